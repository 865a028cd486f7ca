#pragma once

#include "qaw/carrier.hpp"
#include "qaw/enumerate.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qaw {

// Finite partial order. On a finite carrier every ascending chain is
// eventually constant, so the same value also serves as an omega-cpo and
// a dcpo, and continuous maps are exactly the monotone ones.
class FinPoset {
 public:
  FinPoset() = default;
  // Throws AxiomViolation on the first failed axiom.
  FinPoset(std::vector<Label> points, std::vector<char> leq);

  static FinPoset trusted(std::vector<Label> points, std::vector<char> leq);

  std::size_t size() const noexcept { return carrier_.size(); }
  const Carrier& carrier() const noexcept { return carrier_; }
  const std::vector<Label>& points() const noexcept { return carrier_.points(); }
  const Label& label(std::size_t i) const { return carrier_.label(i); }
  std::size_t index(std::string_view label) const { return carrier_.index(label); }

  bool leq(std::size_t i, std::size_t j) const { return leq_[i * size() + j] != 0; }
  const std::vector<char>& relation() const noexcept { return leq_; }

  // Number of elements in a longest strictly ascending chain.
  std::size_t height() const;

  friend bool operator==(const FinPoset&, const FinPoset&) = default;

 private:
  Carrier carrier_;
  std::vector<char> leq_;
};

struct OrderViolation {
  enum class Kind { Reflexivity, Antisymmetry, Transitivity };
  Kind kind;
  std::vector<std::size_t> witness;

  std::string describe(const std::vector<Label>& points) const;
};

const char* to_string(OrderViolation::Kind kind);

struct PosetCheck {
  std::optional<FinPoset> poset;
  std::vector<OrderViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

PosetCheck validate_poset(const std::vector<Label>& points, const std::vector<char>& leq);

FinPoset discrete_poset(const std::vector<Label>& labels);

// The chain l0 < l1 < ... .
FinPoset chain_poset(const std::vector<Label>& labels);

// Reflexive-transitive closure of the given pairs; throws AxiomViolation if
// the closure is not antisymmetric.
FinPoset poset_from_pairs(const std::vector<Label>& labels,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

struct MonotoneMap {
  FinPoset domain;
  FinPoset codomain;
  PointMap table;

  MonotoneMap(FinPoset dom, FinPoset cod, PointMap tab);
  std::size_t operator()(std::size_t x) const { return table[x]; }
};

struct PosetProduct {
  FinPoset poset;
  std::vector<MonotoneMap> projections;
};

PosetProduct poset_product(const std::vector<FinPoset>& factors);

struct MonotoneCheck {
  bool ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // x <= y, f x !<= f y
};

MonotoneCheck check_monotone(const MonotoneMap& f);
bool is_monotone(const FinPoset& dom, const FinPoset& cod, const PointMap& table);

// The join of an eventually constant ascending sequence: its last entry.
// Throws NotAChain(i) when seq[i] !<= seq[i+1]; InputError on empty input.
std::size_t join_of_chain(const FinPoset& p, const std::vector<std::size_t>& seq);

bool isomorphic_by_labels(const FinPoset& x, const FinPoset& y);
bool is_order_isomorphism(const FinPoset& dom, const FinPoset& cod, const PointMap& table);
// Order isomorphism search, label-respecting candidate first. Throws
// BoundExceeded beyond max_points.
std::optional<PointMap> find_order_isomorphism(const FinPoset& x, const FinPoset& y,
                                               std::size_t max_points = 9);

FinPoset subposet(const FinPoset& x, const std::vector<std::size_t>& keep);

// All partial orders on {0..n-1}, one per isomorphism class, labelled
// "0".."n-1". Deterministic order.
std::vector<FinPoset> posets_up_to_iso(std::size_t n);

}  // namespace qaw
