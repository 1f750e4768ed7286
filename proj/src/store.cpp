#include "recap/store.hpp"

namespace recap {

SharedBundle::SharedBundle(ProjectBundle initial)
    : current_(std::make_shared<const ProjectBundle>(std::move(initial))) {}

std::shared_ptr<const ProjectBundle> SharedBundle::snapshot() const {
  std::shared_lock lock(mutex_);
  return current_;
}

Diagnostics SharedBundle::apply(const Operation& op) {
  std::lock_guard writer(writer_);
  auto base = snapshot();
  auto result = op(*base);
  if (!result) return result.diagnostics();
  auto next = std::make_shared<const ProjectBundle>(std::move(result).value());
  std::unique_lock lock(mutex_);
  current_ = std::move(next);
  return {};
}

}  // namespace recap
