#include "qaw/carrier.hpp"

#include "qaw/error.hpp"

#include <cctype>

namespace qaw {

Carrier::Carrier(std::vector<Label> points) : points_(std::move(points)) {
  index_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i], i).second)
      throw InputError("duplicate point label '" + points_[i] + "'");
  }
}

std::optional<std::size_t> Carrier::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Carrier::index(std::string_view label) const {
  auto found = find(label);
  if (!found) throw UnknownLeaf("unknown point '" + std::string(label) + "'");
  return *found;
}

bool is_identifier(std::string_view name) {
  static constexpr std::string_view reserved[] = {"join", "from", "step", "inf", "within"};
  if (name.empty()) return false;
  for (auto r : reserved)
    if (name == r) return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && head != '_') return false;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && u != '_') return false;
  }
  return true;
}

std::string quote_name(std::string_view name) {
  if (is_identifier(name)) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

Label tuple_label(const std::vector<Label>& parts) {
  Label out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out + ")";
}

Label class_label(const std::vector<Label>& members) {
  if (members.size() == 1) return members.front();
  Label out = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += ',';
    out += members[i];
  }
  return out + "}";
}

}  // namespace qaw
