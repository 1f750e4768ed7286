#pragma once

// Single-writer, multi-reader holder for an in-memory bundle. Readers take
// immutable snapshots; writers apply one operation at a time and only
// publish accepted results.

#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>

#include "recap/diagnostics.hpp"
#include "recap/model.hpp"

namespace recap {

class SharedBundle {
 public:
  explicit SharedBundle(ProjectBundle initial);

  // Snapshot valid for as long as the caller holds it.
  std::shared_ptr<const ProjectBundle> snapshot() const;

  using Operation = std::function<Result<ProjectBundle>(const ProjectBundle&)>;

  // Runs `op` under the writer lock. A rejected operation leaves the stored
  // bundle untouched and returns its diagnostics.
  Diagnostics apply(const Operation& op);

 private:
  mutable std::shared_mutex mutex_;
  std::mutex writer_;
  std::shared_ptr<const ProjectBundle> current_;
};

}  // namespace recap
