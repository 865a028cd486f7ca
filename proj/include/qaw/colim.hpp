#pragma once

#include "qaw/mspace.hpp"
#include "qaw/poset.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qaw {

// ---------------------------------------------------------------------------
// Basic-weight colimits in Met
// ---------------------------------------------------------------------------

// A requirement d(x, y) <= eps on the colimit, eps > 0 and finite.
struct Constraint {
  std::size_t x;
  std::size_t y;
  Dist eps;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// A diagram weighted by the basic weight: a base space together with the
// pairs that the colimit must bring within the given distances. The base
// is discrete for a precongruence proper; a non-discrete base is allowed
// and its own distances act as additional constraints.
struct ConstraintSet {
  FinMetric base;
  std::vector<Constraint> constraints;

  // Throws InputError on out-of-range points or non-positive/infinite eps.
  void validate() const;

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

// One constraint (x, y, d(x,y)) per unordered pair at finite positive
// distance; larger eps would only add weaker constraints.
ConstraintSet precongruence(const FinMetric& m);

struct QuotientSpace {
  FinMetric space;
  MetricMap unit;  // base -> space, surjective
};

// Universal metric quotient: lower the base distances to the constraint
// bounds, close under the triangle inequality (all-pairs shortest paths),
// then identify points at distance 0.
QuotientSpace basic_weight_colimit(const ConstraintSet& c);

// Whether g: base -> z is a cocone: nonexpanding on the base and within
// eps on every constraint pair.
bool respects_constraints(const ConstraintSet& c, const FinMetric& z, const PointMap& g);

struct UniversalityReport {
  bool ok = true;
  std::size_t cocones = 0;          // constraint-respecting maps base -> z
  std::size_t factorizations = 0;   // nonexpanding maps colimit -> z
  std::string failure;
};

// Checks by enumeration that precomposition with the unit is a bijection
// from nonexpanding maps colimit -> z onto cocones base -> z, and that it
// preserves the supremum distance between maps.
UniversalityReport check_basic_weight_universal(const ConstraintSet& c, const QuotientSpace& colim,
                                                const FinMetric& z,
                                                std::uint64_t max_maps = kDefaultMaxMaps);

// ---------------------------------------------------------------------------
// Coinserters in Pos
// ---------------------------------------------------------------------------

struct ParallelPair {
  FinPoset a;
  FinPoset b;
  PointMap f0;
  PointMap f1;

  // Throws InputError unless both maps are total, in range and monotone.
  void validate() const;

  friend bool operator==(const ParallelPair&, const ParallelPair&) = default;
};

struct PosetQuotient {
  FinPoset poset;
  MonotoneMap map;  // b -> poset
};

// Smallest preorder on b containing <=_b and every (f0 a, f1 a), quotiented
// by its symmetric part.
PosetQuotient coinserter(const ParallelPair& p);

// A joint section d: b -> a with f0 d = f1 d = id, monotone.
std::optional<PointMap> reflexive_splitting(const ParallelPair& p);
inline bool is_reflexive(const ParallelPair& p) { return reflexive_splitting(p).has_value(); }

// The pair of projections C^(2) -> |C| from the discrete poset of
// comparable pairs (x0 <= x1) to the discrete carrier of c.
ParallelPair comparable_pairs_presentation(const FinPoset& c);

// Componentwise product of two parallel pairs.
ParallelPair product_pair(const ParallelPair& p, const ParallelPair& q);

struct CoinserterUniversalReport {
  bool ok = true;
  bool cocone = true;      // c f0 <= c f1
  bool clause_a = true;    // every cocone factors through c
  bool clause_b = true;    // u c <= v c implies u <= v
  bool matches_construction = true;
  std::string failure;
};

// Verifies both universal clauses against every poset with at most
// max_target points (up to isomorphism), plus comparison with coinserter(p).
CoinserterUniversalReport check_coinserter_universal(const ParallelPair& p, const FinPoset& target,
                                                     const PointMap& c, std::size_t max_target = 4,
                                                     std::uint64_t max_maps = kDefaultMaxMaps);

// ---------------------------------------------------------------------------
// omega-chains
// ---------------------------------------------------------------------------

struct StableTail {
  friend bool operator==(const StableTail&, const StableTail&) = default;
};

// For every pair of last-stage points, the infimum of the induced distance
// sequence along the (implicit) rest of the chain.
struct DeclaredLimits {
  std::vector<Dist> limits;  // |last|^2 table
  friend bool operator==(const DeclaredLimits&, const DeclaredLimits&) = default;
};

using ChainTail = std::variant<StableTail, DeclaredLimits>;

struct OmegaChainMet {
  std::vector<FinMetric> stages;
  std::vector<PointMap> links;  // links[i]: stages[i] -> stages[i+1]
  ChainTail tail;

  // Throws InputError on malformed links, InvalidTail on bad limits.
  void validate() const;

  friend bool operator==(const OmegaChainMet&, const OmegaChainMet&) = default;
};

struct OmegaChainPos {
  std::vector<FinPoset> stages;
  std::vector<PointMap> links;

  void validate() const;

  friend bool operator==(const OmegaChainPos&, const OmegaChainPos&) = default;

  // The chain {0} -> {0,1} -> ... -> {0..prefix-1} of finite ordinals with
  // inclusions. With stable = false the family grows forever, whose colimit
  // is the natural numbers with a top element; that request throws
  // NonStabilizingChain.
  static OmegaChainPos ordinal_family(std::size_t prefix, bool stable);
};

struct MetColimit {
  FinMetric space;
  std::vector<PointMap> cocone;  // stage i -> space
};

MetColimit omega_colimit_met(const OmegaChainMet& ch);

struct PosColimit {
  FinPoset poset;
  std::vector<PointMap> cocone;
};

PosColimit omega_colimit_pos(const OmegaChainPos& ch);

// Checks the two conditions characterizing a colimit cocone of a directed
// diagram in Met: the images cover the carrier, and distances between
// images equal the infimum of the induced distances along the chain.
bool satisfies_met_colimit_characterization(const OmegaChainMet& ch, const MetColimit& colim,
                                            std::string* failure = nullptr);

// Stagewise sup-product of two chains, padding the shorter one by repeating
// its last stage.
OmegaChainMet product_chain(const OmegaChainMet& a, const OmegaChainMet& b);
OmegaChainPos product_chain(const OmegaChainPos& a, const OmegaChainPos& b);

struct CommutationReport {
  bool ok = true;
  std::size_t product_of_colimits = 0;  // points in colim(a) x colim(b)
  std::size_t colimit_of_product = 0;   // points in colim(a x b)
  std::string failure;
};

// Compares colim(a x b) with colim(a) x colim(b) through the canonical
// comparison map [(y, z)] -> (c_a y, c_b z), which must be a well-defined
// isometry / order isomorphism.
CommutationReport check_product_commutation(const OmegaChainMet& a, const OmegaChainMet& b);
CommutationReport check_product_commutation(const OmegaChainPos& a, const OmegaChainPos& b);

// Compares coinserter(a x b) with coinserter(a) x coinserter(b). Throws
// NotReflexive("A") / NotReflexive("B") when a pair has no joint section.
CommutationReport check_coinserter_products(const ParallelPair& a, const ParallelPair& b);

}  // namespace qaw
