#pragma once

#include "qaw/enumerate.hpp"
#include "qaw/mspace.hpp"
#include "qaw/poset.hpp"
#include "qaw/term.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qaw {

// Total operation table: values[encode_tuple(args, |carrier|)].
struct OpTable {
  std::size_t arity = 0;
  std::vector<std::size_t> values;
  friend bool operator==(const OpTable&, const OpTable&) = default;
};

// A finite algebra over an explicit carrier: a FinMetric for quantitative
// algebras, a FinPoset for continuous ones. Construction checks that the
// tables are total and match the signature; the structural requirement
// (nonexpanding / monotone operations) is checked by validate_algebra.
template <class Space>
class Algebra {
 public:
  Algebra() = default;
  Algebra(Signature sig, Space carrier, std::vector<OpTable> ops);

  const Signature& sig() const noexcept { return sig_; }
  const Space& carrier() const noexcept { return carrier_; }
  std::size_t size() const noexcept { return carrier_.size(); }
  const std::vector<OpTable>& ops() const noexcept { return ops_; }
  const OpTable& op(std::size_t symbol) const { return ops_.at(symbol); }

  std::size_t apply(std::size_t symbol, std::span<const std::size_t> args) const {
    return ops_[symbol].values[encode_tuple(args, size())];
  }

  friend bool operator==(const Algebra&, const Algebra&) = default;

 private:
  Signature sig_;
  Space carrier_;
  std::vector<OpTable> ops_;
};

using QuantAlgebra = Algebra<FinMetric>;
using ContAlgebra = Algebra<FinPoset>;

struct OpViolation {
  std::size_t symbol;
  std::vector<std::size_t> lhs;  // argument tuple
  std::vector<std::size_t> rhs;  // argument tuple
};

struct AlgebraCheck {
  bool ok() const noexcept { return violations.empty(); }
  // At most one entry per symbol: the worst violating tuple pair for
  // quantitative algebras, the first one found for continuous ones.
  std::vector<OpViolation> violations;
};

// Every operation nonexpanding from the sup-metric power.
AlgebraCheck validate_algebra(const QuantAlgebra& a);
// Every operation monotone in the componentwise order.
AlgebraCheck validate_algebra(const ContAlgebra& a);

using Interpretation = std::map<Label, std::size_t>;

// f-sharp: structural recursion through the tables. Throws
// UnmappedVariable / InputError (unknown symbol or arity).
template <class Space>
std::size_t eval_term(const Algebra<Space>& a, const Interpretation& f, const Term& t);

// A term flattened against a signature and a fixed variable order, for
// evaluation in tight enumeration loops.
class CompiledTerm {
 public:
  CompiledTerm(const Signature& sig, const Term& t, const std::vector<Label>& var_order);

  template <class Space>
  std::size_t eval(const Algebra<Space>& a, std::span<const std::size_t> values) const;

 private:
  struct Step {
    bool is_var;
    std::size_t index;  // variable slot or symbol
    std::size_t arity;
  };
  std::vector<Step> code_;  // postfix
};

template <class Space>
struct Homo {
  Algebra<Space> source;
  Algebra<Space> target;
  PointMap table;
};

struct HomoCheck {
  bool ok = true;
  bool structure_ok = true;  // nonexpanding / monotone
  std::optional<std::size_t> symbol;
  std::vector<std::size_t> args;  // a tuple where h(op(args)) != op(h args)
};

template <class Space>
HomoCheck check_homomorphism(const Homo<Space>& h);

template <class Space>
struct Derived {
  Algebra<Space> algebra;
  std::vector<PointMap> maps;  // projections, embedding, or surjection
};

// Componentwise product on the sup-metric / product-order carrier. The
// empty product is the one-point algebra. Throws BoundExceeded when the
// carrier or a table would exceed max_cells.
template <class Space>
Derived<Space> product_algebra(const Signature& sig, const std::vector<Algebra<Space>>& factors,
                               std::uint64_t max_cells = 1'000'000);

// Least operation-closed subset containing `generators`, with the
// restricted metric / order; maps = {embedding}.
template <class Space>
Derived<Space> subalgebra_generated(const Algebra<Space>& a, const std::vector<std::size_t>& generators);

// Image of a homomorphism with the structure induced from the target;
// maps = {corestriction}. Throws NotAHomomorphism.
template <class Space>
Derived<Space> homomorphic_image(const Homo<Space>& h);

// Calls fn(const Algebra&) for every algebra of sig on the carrier (all
// table combinations, deterministic order) until fn returns false. Does not
// filter by structure. Throws BoundExceeded when the number of algebras
// exceeds max_algebras.
template <class Space>
void for_each_algebra(const Signature& sig, const Space& carrier, std::uint64_t max_algebras,
                      const std::function<bool(const Algebra<Space>&)>& fn);

}  // namespace qaw
