#pragma once

#include "qaw/alg.hpp"
#include "qaw/bridge.hpp"
#include "qaw/colim.hpp"
#include "qaw/eqn.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qaw {

// Workbench files (.qaw). Declarations:
//
//   space M { points p q; d p q = 1/2; }          unlisted pairs are inf
//   poset C { points a b; leq a b; }              closed reflexively and transitively
//   signature S { op mul/2; op e/0; }
//   algebra A : S over space M { mul = [p, q, q, q]; e = [p]; }
//   eq E : mul(x0, x1) == mul(x1, x0) within 1;   without `within`: a cpo equation
//   eq mul(x0, x1) == mul(x1, x0);                unnamed: called "line:col"
//   ineq I : x0 <= mul(x0, x0);
//   equations V : S { mul(x, e()) == x within 0; ... }
//   constraints K over M { p q 1/2; }
//   chain K : met { stages M0 M1; link 0 = [a]; tail stable; }
//   chain K : met { stages M0; tail limits { a b = 1/2; } }
//   chain K : pos { stages C0 C1; link 0 = [a]; }
//   pair P : A => B { f0 = [..]; f1 = [..]; }
//   presentation T = builtin semilattice max-arity 3 mode met;
//   presentation T : met max-arity 1 { carrier 0 = E; carrier 1 = V1;
//                                      unit 1 = [x0]; ext 1 1 [x0] = [x0]; }
//   homo H : A -> B = [..];
//
// Terms: `x` is a variable, `c()` a constant, `f(t, ..)` an application;
// names that are not identifiers are written in double quotes. Extended
// terms add `join [t0, t1, ..]` and `join from t step s` (hole `z`).
// Comments run from `#` to the end of the line.

struct SpaceDecl {
  std::vector<Label> points;
  std::vector<Dist> table;  // as written; may violate the axioms
  FinMetric resolve() const;  // throws AxiomViolation
  friend bool operator==(const SpaceDecl&, const SpaceDecl&) = default;
};

struct AlgebraDecl {
  std::string signature;
  Mode carrier_kind = Mode::Metric;  // Metric: a space, Poset: a poset
  std::string carrier;
  std::vector<OpTable> ops;  // in signature order
  friend bool operator==(const AlgebraDecl&, const AlgebraDecl&) = default;
};

struct EquationDecl {
  enum class Kind { Equation, Inequation };
  Kind kind = Kind::Equation;
  std::string name;  // may be empty inside an equations block
  ExtTerm left = Term::var("x");
  ExtTerm right = Term::var("x");
  std::optional<Dist> within;  // set: a metric equation

  // Throws InputError when a join occurs or when this is an inequation.
  QuantEq as_quant() const;
  ContEq as_cont() const;
  friend bool operator==(const EquationDecl&, const EquationDecl&) = default;
};

struct EquationSetDecl {
  std::optional<std::string> signature;
  std::vector<EquationDecl> equations;
  friend bool operator==(const EquationSetDecl&, const EquationSetDecl&) = default;
};

struct ConstraintsDecl {
  std::string base;
  std::vector<Constraint> constraints;
  friend bool operator==(const ConstraintsDecl&, const ConstraintsDecl&) = default;
};

struct ChainDecl {
  Mode mode = Mode::Metric;
  std::vector<std::string> stages;
  std::vector<PointMap> links;
  ChainTail tail;  // Metric only
  friend bool operator==(const ChainDecl&, const ChainDecl&) = default;
};

struct PairDecl {
  std::string a, b;  // posets
  PointMap f0, f1;
  friend bool operator==(const PairDecl&, const PairDecl&) = default;
};

struct BuiltinPresentation {
  std::string kind;
  std::size_t max_arity = 0;
  Mode mode = Mode::Metric;
  friend bool operator==(const BuiltinPresentation&, const BuiltinPresentation&) = default;
};

struct ExplicitPresentation {
  std::vector<std::string> carriers;  // space or poset names, one per arity
  std::optional<std::string> rule;    // `ext = <rule>` instead of tables
  MonadPresentation presentation;
  friend bool operator==(const ExplicitPresentation&, const ExplicitPresentation&) = default;
};

using PresentationDecl = std::variant<BuiltinPresentation, ExplicitPresentation>;

struct HomoDecl {
  std::string source, target;  // algebras
  PointMap table;
  friend bool operator==(const HomoDecl&, const HomoDecl&) = default;
};

class WorkbenchFile {
 public:
  std::map<std::string, SpaceDecl> spaces;
  std::map<std::string, FinPoset> posets;
  std::map<std::string, Signature> signatures;
  std::map<std::string, AlgebraDecl> algebras;
  std::map<std::string, EquationDecl> equations;
  std::map<std::string, EquationSetDecl> equation_sets;
  std::map<std::string, ConstraintsDecl> constraints;
  std::map<std::string, ChainDecl> chains;
  std::map<std::string, PairDecl> pairs;
  std::map<std::string, PresentationDecl> presentations;
  std::map<std::string, HomoDecl> homos;

  // Lookups build library values; they throw InputError on unknown names
  // and propagate axiom violations.
  FinMetric space(std::string_view name) const;
  const FinPoset& poset(std::string_view name) const;
  const Signature& signature(std::string_view name) const;
  QuantAlgebra quant_algebra(std::string_view name) const;
  ContAlgebra cont_algebra(std::string_view name) const;
  ConstraintSet constraint_set(std::string_view name) const;
  OmegaChainMet met_chain(std::string_view name) const;
  OmegaChainPos pos_chain(std::string_view name) const;
  ParallelPair pair(std::string_view name) const;
  MonadPresentation presentation(std::string_view name) const;
  // An `eq`/`ineq` declaration or every member of an `equations` block.
  std::vector<EquationDecl> equation_list(std::string_view name) const;

  friend bool operator==(const WorkbenchFile&, const WorkbenchFile&) = default;
};

struct Diagnostic {
  std::string kind;  // "syntax", "unresolved", "duplicate", "arity"
  std::size_t line = 0, col = 0;
  std::string message;
};

// Parses and resolves a whole file. Throws the first error as a
// SyntaxError / UnresolvedName / DuplicateName / ArityMismatch; use
// diagnose() for the complete list.
WorkbenchFile parse_workbench(std::string_view source);
std::vector<Diagnostic> diagnose(std::string_view source);

// Canonical text: kinds in declaration-table order, names sorted.
std::string serialize(const WorkbenchFile& f);

// Single items, for command-line arguments.
Term parse_term(std::string_view source);
ExtTerm parse_ext_term(std::string_view source);

std::string serialize_equation(const EquationDecl& e);

// The generated variety as a signature plus an equations block.
WorkbenchFile variety_file(const GeneratedVariety& v, const std::string& name);

}  // namespace qaw
