#include "recap/identifier.hpp"

#include <cctype>

namespace recap {

const char* to_string(Namespace ns) {
  switch (ns) {
    case Namespace::gp: return "gp";
    case Namespace::parent: return "parent";
    case Namespace::child: return "child";
  }
  return "gp";
}

std::string Identifier::str() const {
  if (ns == Namespace::gp) return "gp:" + local_name;
  return std::string(to_string(ns)) + ":" + owner + ":" + local_name;
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name)
    if (!is_name_char(c)) return false;
  auto edge_ok = [](char c) { return c != '-' && c != '.'; };
  return edge_ok(name.front()) && edge_ok(name.back());
}

std::optional<Identifier> Identifier::parse(std::string_view text) {
  auto take = [&](std::string_view prefix) {
    if (text.substr(0, prefix.size()) != prefix) return false;
    text.remove_prefix(prefix.size());
    return true;
  };
  if (take("gp:")) {
    if (!is_valid_name(text)) return std::nullopt;
    return Identifier{Namespace::gp, "", std::string(text)};
  }
  Namespace ns;
  if (take("parent:")) {
    ns = Namespace::parent;
  } else if (take("child:")) {
    ns = Namespace::child;
  } else {
    return std::nullopt;
  }
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto owner = text.substr(0, colon);
  auto name = text.substr(colon + 1);
  if (!is_valid_name(owner) || !is_valid_name(name)) return std::nullopt;
  return Identifier{ns, std::string(owner), std::string(name)};
}

std::optional<Identifier> Identifier::parse_in(std::string_view text, Namespace ns,
                                               std::string_view owner) {
  if (text.find(':') != std::string_view::npos) return parse(text);
  if (!is_valid_name(text)) return std::nullopt;
  return Identifier{ns, ns == Namespace::gp ? std::string() : std::string(owner),
                    std::string(text)};
}

namespace {

// Longest valid name starting at `pos`; trailing '.' and '-' are punctuation.
std::size_t scan_name(std::string_view text, std::size_t pos) {
  std::size_t end = pos;
  while (end < text.size() && is_name_char(text[end])) ++end;
  while (end > pos && (text[end - 1] == '.' || text[end - 1] == '-')) --end;
  if (end > pos && (text[pos] == '.' || text[pos] == '-')) return 0;
  return end - pos;
}

}  // namespace

std::vector<TextReference> extract_references(std::string_view text) {
  std::vector<TextReference> out;
  static constexpr std::string_view kPrefixes[] = {"gp:", "parent:", "child:"};
  std::size_t i = 0;
  while (i < text.size()) {
    bool boundary = i == 0 || (!is_name_char(text[i - 1]) && text[i - 1] != ':');
    bool matched = false;
    if (boundary) {
      for (auto prefix : kPrefixes) {
        if (text.substr(i, prefix.size()) != prefix) continue;
        std::size_t p = i + prefix.size();
        std::size_t n1 = scan_name(text, p);
        if (n1 == 0) break;
        std::size_t end = p + n1;
        if (prefix != "gp:") {
          if (end >= text.size() || text[end] != ':') break;
          std::size_t n2 = scan_name(text, end + 1);
          if (n2 == 0) break;
          end = end + 1 + n2;
        }
        if (auto id = Identifier::parse(text.substr(i, end - i))) {
          out.push_back(TextReference{*id, i, end - i});
          i = end;
          matched = true;
        }
        break;
      }
    }
    if (!matched) ++i;
  }
  return out;
}

std::string erase_reference(std::string_view text, const Identifier& id) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& ref : extract_references(text)) {
    if (ref.id != id) continue;
    out.append(text.substr(cursor, ref.offset - cursor));
    cursor = ref.offset + ref.length;
  }
  out.append(text.substr(cursor));
  std::string collapsed;
  collapsed.reserve(out.size());
  for (char c : out) {
    if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
    collapsed.push_back(c);
  }
  while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
  while (!collapsed.empty() && collapsed.front() == ' ') collapsed.erase(collapsed.begin());
  return collapsed;
}

}  // namespace recap
