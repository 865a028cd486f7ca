#pragma once

#include "qaw/carrier.hpp"
#include "qaw/dist.hpp"
#include "qaw/enumerate.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qaw {

// Finite extended metric space: an ordered carrier with a full distance
// table. Construction validates the metric axioms.
class FinMetric {
 public:
  FinMetric() = default;
  // Throws AxiomViolation describing the first violated axiom.
  FinMetric(std::vector<Label> points, std::vector<Dist> table);

  // Skips validation; for results that are metric by construction.
  static FinMetric trusted(std::vector<Label> points, std::vector<Dist> table);

  std::size_t size() const noexcept { return carrier_.size(); }
  const Carrier& carrier() const noexcept { return carrier_; }
  const std::vector<Label>& points() const noexcept { return carrier_.points(); }
  const Label& label(std::size_t i) const { return carrier_.label(i); }
  std::size_t index(std::string_view label) const { return carrier_.index(label); }

  const Dist& d(std::size_t i, std::size_t j) const { return table_[i * size() + j]; }
  const std::vector<Dist>& table() const noexcept { return table_; }

  friend bool operator==(const FinMetric&, const FinMetric&) = default;

 private:
  Carrier carrier_;
  std::vector<Dist> table_;
};

struct MetricViolation {
  enum class Kind { Diagonal, Symmetry, Separation, Triangle };
  Kind kind;
  // One index for Diagonal, two for Symmetry/Separation, three (x,y,z)
  // for Triangle.
  std::vector<std::size_t> witness;

  std::string describe(const std::vector<Label>& points) const;
};

const char* to_string(MetricViolation::Kind kind);

struct MetricCheck {
  std::optional<FinMetric> space;
  std::vector<MetricViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// Reports every violated axiom instance. Throws InputError when the table
// is not |points|^2 long.
MetricCheck validate_metric(const std::vector<Label>& points, const std::vector<Dist>& table);

FinMetric discrete_space(const std::vector<Label>& labels);

struct MetricMap {
  FinMetric domain;
  FinMetric codomain;
  PointMap table;

  MetricMap(FinMetric dom, FinMetric cod, PointMap tab);
  std::size_t operator()(std::size_t x) const { return table[x]; }
};

struct SupProduct {
  FinMetric space;
  std::vector<MetricMap> projections;
};

// Cartesian product with the supremum metric, points ordered
// lexicographically (first factor most significant).
SupProduct sup_product(const std::vector<FinMetric>& factors);

// Cartesian product with the addition metric.
FinMetric tensor(const FinMetric& x, const FinMetric& y);

struct NonexpandingCheck {
  bool ok = true;
  // A pair maximizing d(f x, f x') - d(x, x') when !ok.
  std::optional<std::pair<std::size_t, std::size_t>> worst;
};

NonexpandingCheck check_nonexpanding(const MetricMap& f);
// Table-level variant used by enumeration loops.
bool is_nonexpanding(const FinMetric& dom, const FinMetric& cod, const PointMap& table);

struct HomSpace {
  FinMetric space;
  std::vector<PointMap> maps;  // maps[i] is the map labelled space.label(i)
};

// All nonexpanding maps x -> y with the supremum metric. Throws
// BoundExceeded when |y|^|x| > max_maps.
HomSpace hom_space(const FinMetric& x, const FinMetric& y,
                   std::uint64_t max_maps = kDefaultMaxMaps);

// Label of a map in a hom space: "[f(x0),f(x1),...]".
Label map_label(const FinMetric& cod, const PointMap& table);

// Equal label sets with equal distances between equally labelled points.
bool isometric_by_labels(const FinMetric& x, const FinMetric& y);

// A distance-preserving bijection x -> y, if one exists. Tries the
// label-respecting candidate first. Throws BoundExceeded when the spaces
// have more than max_points points.
std::optional<PointMap> find_isometry(const FinMetric& x, const FinMetric& y,
                                      std::size_t max_points = 9);

bool is_isometry(const FinMetric& dom, const FinMetric& cod, const PointMap& table);

// Restriction of the metric to a subset of points, in the given order.
FinMetric subspace(const FinMetric& x, const std::vector<std::size_t>& keep);

}  // namespace qaw
