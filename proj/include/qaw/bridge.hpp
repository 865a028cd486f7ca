#pragma once

#include "qaw/alg.hpp"
#include "qaw/colim.hpp"
#include "qaw/eqn.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qaw {

enum class Mode { Metric, Poset };

std::string_view mode_name(Mode m);  // "met" / "cpo"
Mode parse_mode(std::string_view s);  // throws InputError

// A strongly finitary monad at desk scale, as a Kleisli triple restricted
// to the discrete arities V_0 .. V_N:
//   T_n        carrier for each n <= N
//   unit[n]    eta_n : V_n -> T_n
//   ext[n][m]  ext(k) : T_n -> T_m for every k : V_n -> T_m, indexed by
//              the code of (k(x_0), .., k(x_{n-1})) in radix |T_m|.
struct MonadPresentation {
  std::string name;
  Mode mode = Mode::Metric;
  std::size_t max_arity = 0;
  std::vector<FinMetric> metric;  // Metric mode
  std::vector<FinPoset> order;    // Poset mode
  std::vector<PointMap> unit;
  std::vector<std::vector<std::vector<PointMap>>> ext;

  const Carrier& carrier(std::size_t n) const;
  std::size_t size(std::size_t n) const { return carrier(n).size(); }
  const PointMap& ext_of(std::size_t n, std::size_t m, std::span<const std::size_t> k) const {
    return ext[n][m][encode_tuple(k, size(m))];
  }

  // Shapes and ranges of all tables; throws InputError.
  void validate() const;

  friend bool operator==(const MonadPresentation&, const MonadPresentation&) = default;
};

// ext(k)(tau) for k : V_n -> T_m given as a tuple of T_m points.
using ExtRule = std::function<std::size_t(std::size_t n, std::size_t m, std::span<const std::size_t> k,
                                          std::size_t tau)>;

// Materializes ext from a rule. Carriers are given as FinMetric (Metric
// mode) or FinPoset (Poset mode) through exactly one of the two vectors.
MonadPresentation presentation_from_rule(std::string name, Mode mode, std::vector<FinMetric> metric,
                                         std::vector<FinPoset> order, std::vector<PointMap> unit,
                                         const ExtRule& rule, std::uint64_t max_cells = 10'000'000);

// Shipped presentations: identity, semilattice (nonempty subsets, union),
// maybe (one adjoined point), lift (Poset only: adjoined bottom) and
// writer (Metric only: V_n x {0,1}, flag distance 1, flags combined by max).
const std::vector<std::string>& builtin_kinds();
MonadPresentation builtin_presentation(std::string_view kind, std::size_t max_arity, Mode mode);

// The rule a builtin ext table is generated from, by its DSL name
// ("identity", "union", "maybe", "lift", "writer-max").
std::string_view builtin_ext_rule(std::string_view kind);

// ---------------------------------------------------------------------------

enum class Law {
  Structure,    // ext(k) nonexpanding / monotone
  Enrichment,   // k |-> ext(k) nonexpanding / monotone
  ExtUnit,      // ext(eta_n) = id
  UnitExt,      // ext(k) . eta_n = k
  Composition,  // ext(ext(k) . l) = ext(k) . ext(l)
};
std::string_view law_name(Law l);

struct LawFailure {
  Law law;
  std::size_t n = 0, m = 0, p = 0;
  PointMap k, l;       // l only for Composition, k' for Enrichment
  std::size_t point = 0;  // offending point of the domain carrier
  std::string describe(const MonadPresentation& P) const;
};

struct LawReport {
  bool ok = true;
  std::size_t failure_count = 0;
  std::vector<LawFailure> failures;  // first max_failures
};

// Exhaustive over all arities <= N. Throws BoundExceeded when the number
// of (k, l) combinations exceeds max_work.
LawReport check_kleisli_laws(const MonadPresentation& P, std::size_t max_failures = 100,
                             std::uint64_t max_work = 50'000'000);

// ---------------------------------------------------------------------------

// Symbol for sigma in T_n: "<label>@<n>", of arity n.
std::string symbol_name(const MonadPresentation& P, std::size_t n, std::size_t sigma);
Signature generated_signature(const MonadPresentation& P);
// sigma(x0, .., x{n-1})
Term symbol_term(const MonadPresentation& P, std::size_t n, std::size_t sigma);

struct GeneratedVariety {
  Mode mode = Mode::Metric;
  Signature sig;
  std::vector<QuantEq> quant;  // Metric mode
  std::vector<ContEq> cont;    // Poset mode
};

// Equations named c1 (distances / order), c2 (ext), c3 (unit).
GeneratedVariety generate_variety_met(const MonadPresentation& P);
GeneratedVariety generate_variety_cpo(const MonadPresentation& P);
GeneratedVariety generate_variety(const MonadPresentation& P);

// ---------------------------------------------------------------------------

// An Eilenberg-Moore algebra on the discrete carrier V_j.
struct EMAlgebraDesc {
  std::size_t j = 0;
  PointMap alpha;  // T_j -> V_j
};

struct EMCheck {
  bool ok = true;
  std::string law;  // "structure", "unit" or "multiplication"
  std::size_t point = 0;  // offending point of T_j, or of T_|T_j|
};

// Throws ArityBudgetExceeded when |T_j| > N.
EMCheck check_em_algebra(const MonadPresentation& P, const EMAlgebraDesc& a);

// All law-passing alpha on V_j, in lexicographic order.
std::vector<EMAlgebraDesc> em_algebras(const MonadPresentation& P, std::size_t j,
                                       std::uint64_t max_maps = kDefaultMaxMaps);

// Discrete carrier V_j in the presentation's mode.
template <class Space>
Space discrete_arity(std::size_t j);

// sigma_A(a) = alpha(ext(eta_j . a)(sigma)). Throws NotAnEMAlgebra.
template <class Space>
Algebra<Space> em_to_variety_algebra(const MonadPresentation& P, const EMAlgebraDesc& a);

// alpha(tau) = tau_A(x0, .., x{j-1}) for an algebra on V_j.
template <class Space>
EMAlgebraDesc variety_to_em(const MonadPresentation& P, const Algebra<Space>& a);

// Every member of the generated variety on the given carrier. Tables of a
// basis of symbols are enumerated; all other tables follow from the unit
// and ext equations. Throws BoundExceeded past max_candidates.
template <class Space>
std::vector<Algebra<Space>> variety_algebras(const MonadPresentation& P, const GeneratedVariety& v,
                                             const Space& carrier,
                                             std::uint64_t max_candidates = kDefaultMaxMaps);

// Fast membership test for a generated variety (equations compiled once).
template <class Space>
bool satisfies_all(const Algebra<Space>& a, const GeneratedVariety& v);

// ---------------------------------------------------------------------------

enum class FreenessReason { NotHomomorphism, UnitMismatch, NotUnique };
std::string_view reason_name(FreenessReason r);

struct FreenessFailure {
  std::size_t target = 0;
  PointMap f;  // V_n -> A
  FreenessReason reason;
  std::string detail;
};

struct RejectedTarget {
  std::size_t target = 0;
  std::string witness;
};

struct FreenessReport {
  bool ok = true;
  std::size_t maps_checked = 0;
  std::vector<RejectedTarget> rejected;  // non-members of the variety
  std::optional<FreenessFailure> failure;
};

template <class Space>
FreenessReport check_freeness(const MonadPresentation& P, std::size_t n, const GeneratedVariety& v,
                              const std::vector<Algebra<Space>>& targets,
                              std::uint64_t max_maps = kDefaultMaxMaps);

// ---------------------------------------------------------------------------

// T applied to a finite metric space, as the colimit of T applied to its
// precongruence: base T_|M|, and for every realized eps the pairs within
// eps lifted through ext. Point labels are those of T_|M|, where x_i
// stands for the i-th point of M. Throws ArityBudgetExceeded when |M| or
// a pair set exceeds N.
QuotientSpace kan_evaluate(const MonadPresentation& P, const FinMetric& M);

}  // namespace qaw
