#pragma once

#include "qaw/alg.hpp"
#include "qaw/dist.hpp"
#include "qaw/term.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qaw {

// t =_eps t'
struct QuantEq {
  Term left;
  Term right;
  Dist eps;
  std::string name;  // optional, for reports
  friend bool operator==(const QuantEq&, const QuantEq&) = default;
};

// t = t' over extended terms.
struct ContEq {
  ExtTerm left;
  ExtTerm right;
  std::string name;
  friend bool operator==(const ContEq&, const ContEq&) = default;
};

// Result of f^@: a point, or the reason the value is undefined.
class PartialValue {
 public:
  enum class Status { Defined, ChainConditionFailed, NonStabilizing };

  static PartialValue defined(std::size_t point) { return {Status::Defined, point}; }
  static PartialValue chain_failed(std::size_t index) { return {Status::ChainConditionFailed, index}; }
  static PartialValue non_stabilizing() { return {Status::NonStabilizing, 0}; }

  Status status() const noexcept { return status_; }
  bool is_defined() const noexcept { return status_ == Status::Defined; }
  std::size_t value() const;  // the point; throws unless defined
  std::size_t index() const;  // first failing index for ChainConditionFailed

  std::string to_string(const Carrier& c) const;

  friend bool operator==(const PartialValue&, const PartialValue&) = default;

 private:
  PartialValue(Status s, std::size_t payload) : status_(s), payload_(payload) {}
  Status status_;
  std::size_t payload_;
};

// Variables of the equation in sorted order: the coordinates of every
// interpretation enumerated below.
std::vector<Label> equation_vars(const QuantEq& e);
std::vector<Label> equation_vars(const ContEq& e);

struct QuantVerdict {
  bool ok = true;
  // First violating interpretation in lexicographic order, with the two
  // values and their distance.
  std::optional<Interpretation> witness;
  std::size_t left_value = 0;
  std::size_t right_value = 0;
  Dist achieved;
};

QuantVerdict satisfies_quant(const QuantAlgebra& a, const QuantEq& e,
                             std::uint64_t max_maps = kDefaultMaxMaps);

// f must interpret every free variable of t (UnmappedVariable otherwise).
PartialValue interpret_extended(const ContAlgebra& a, const Interpretation& f, const ExtTerm& t);

struct ContVerdict {
  bool ok = true;
  std::optional<Interpretation> witness;
  std::optional<PartialValue> left;
  std::optional<PartialValue> right;
};

ContVerdict satisfies_cont(const ContAlgebra& a, const ContEq& e,
                           std::uint64_t max_maps = kDefaultMaxMaps);

// t' = join [t, t']: satisfied iff both sides are defined and t <= t'.
ContEq inequation(const ExtTerm& t, const ExtTerm& t2, std::string name = {});

struct DefinabilityVerdict {
  bool ok = true;
  std::optional<Interpretation> witness;
  std::optional<PartialValue> value;
};

DefinabilityVerdict is_definable(const ContAlgebra& a, const ExtTerm& t,
                                 std::uint64_t max_maps = kDefaultMaxMaps);

template <class Verdict>
struct MembershipReport {
  bool member = true;
  std::vector<Verdict> verdicts;  // one per equation, in order
};

MembershipReport<QuantVerdict> check_variety_membership(const QuantAlgebra& a, const std::vector<QuantEq>& eqs,
                                                       std::uint64_t max_maps = kDefaultMaxMaps);
MembershipReport<ContVerdict> check_variety_membership(const ContAlgebra& a, const std::vector<ContEq>& eqs,
                                                      std::uint64_t max_maps = kDefaultMaxMaps);

// Same verdicts, stopping at the first failing equation.
bool is_member(const QuantAlgebra& a, const std::vector<QuantEq>& eqs, std::uint64_t max_maps = kDefaultMaxMaps);
bool is_member(const ContAlgebra& a, const std::vector<ContEq>& eqs, std::uint64_t max_maps = kDefaultMaxMaps);

}  // namespace qaw
