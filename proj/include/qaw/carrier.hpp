#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qaw {

using Label = std::string;

// Ordered finite set of opaque point labels.
class Carrier {
 public:
  Carrier() = default;
  explicit Carrier(std::vector<Label> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<Label>& points() const noexcept { return points_; }
  const Label& label(std::size_t i) const { return points_.at(i); }

  std::optional<std::size_t> find(std::string_view label) const;
  // Throws UnknownLeaf for labels not in the carrier.
  std::size_t index(std::string_view label) const;

  friend bool operator==(const Carrier& a, const Carrier& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<Label> points_;
  std::unordered_map<Label, std::size_t> index_;
};

// Whether a name can be written bare in the workbench language:
// [A-Za-z_][A-Za-z0-9_]* and not one of the term-level keywords.
bool is_identifier(std::string_view name);

// The name itself when it is an identifier, otherwise a double-quoted
// string with '"' and '\\' escaped.
std::string quote_name(std::string_view name);

// Canonical label of a tuple of labels: "(a,b,c)".
Label tuple_label(const std::vector<Label>& parts);

// Canonical label of an equivalence class: the member label itself for a
// singleton class, "{a,b}" otherwise.
Label class_label(const std::vector<Label>& members);

}  // namespace qaw
