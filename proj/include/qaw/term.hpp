#pragma once

#include "qaw/carrier.hpp"
#include "qaw/dist.hpp"
#include "qaw/mspace.hpp"
#include "qaw/poset.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qaw {

struct Symbol {
  std::string name;
  std::size_t arity;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<Symbol> symbols);

  // Throws InputError on a duplicate name.
  void add(std::string name, std::size_t arity);

  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  std::optional<std::size_t> find(std::string_view name) const;
  const Symbol& at(std::size_t i) const { return symbols_.at(i); }
  std::size_t max_arity() const;

  friend bool operator==(const Signature& a, const Signature& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<Symbol> symbols_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Finitary first-order term: a variable or a symbol applied to arguments.
// Immutable; copies share structure.
class Term {
 public:
  static Term var(Label name);
  static Term app(std::string symbol, std::vector<Term> args = {});

  bool is_var() const noexcept { return node_->is_var; }
  // Variable label or head symbol.
  const std::string& name() const noexcept { return node_->name; }
  const std::vector<Term>& args() const noexcept { return node_->args; }

  // 0 for variables and constants, 1 + max over arguments otherwise.
  std::size_t height() const noexcept { return node_->height; }

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_var;
    std::string name;
    std::vector<Term> args;
    std::size_t height;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Throws InputError (arity mismatch / unknown symbol) unless every
// application in t uses a symbol of sig with its declared arity.
void check_term(const Signature& sig, const Term& t);

// Reserved hole variable of generated join families.
inline const Label kHole = "z";

// Extended term: a term, or a formal omega-join of a family of extended
// terms. Families are eventually constant lists (the last entry repeats
// forever) or orbits t_0 = seed, t_{k+1} = step[z := t_k].
class ExtTerm {
 public:
  enum class Kind { Base, JoinList, JoinGenerated };

  ExtTerm(Term t);  // implicit: every term is an extended term
  static ExtTerm join(std::vector<ExtTerm> family);
  // Throws InputError when the seed mentions the hole variable.
  static ExtTerm generated(ExtTerm seed, Term step);

  Kind kind() const noexcept { return node_->kind; }
  bool is_base() const noexcept { return kind() == Kind::Base; }
  const Term& base() const;
  const std::vector<ExtTerm>& family() const;  // JoinList
  const ExtTerm& seed() const;                 // JoinGenerated
  const Term& step() const;                    // JoinGenerated

  // The k-th family member for generated families whose seed is a term.
  // For lists, the k-th entry (the last one for k past the end).
  ExtTerm member(std::size_t k) const;

  std::string to_string() const;

  friend bool operator==(const ExtTerm& a, const ExtTerm& b);

 private:
  struct Node {
    Kind kind;
    std::optional<Term> term;  // Base term or generated step
    std::vector<ExtTerm> children;  // list family, or {seed}
  };
  explicit ExtTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

void check_term(const Signature& sig, const ExtTerm& t);

std::set<Label> vars(const Term& t);
// For generated families: vars(seed) together with vars(step) minus the hole.
std::set<Label> vars(const ExtTerm& t);

// Both variables, or the same head with pairwise similar arguments.
bool similar(const Term& a, const Term& b);

// Term metric over a space of leaves: d_M on variables, infinity between
// non-similar terms, max over arguments for similar composites. Throws
// UnknownLeaf when a variable is not a point of m.
Dist term_metric(const FinMetric& m, const Term& a, const Term& b);

// Term order over a poset of leaves: similar terms compared leafwise.
bool term_order(const FinPoset& p, const Term& a, const Term& b);

// Every term of height <= depth over the generators, level by level; within
// a level by symbol order, then lexicographically in the argument indices.
// Throws BoundExceeded when more than max_terms terms would be produced.
std::vector<Term> enumerate_terms(const Signature& sig, const std::vector<Label>& gens,
                                  std::size_t depth, std::size_t max_terms = 100000);

using Substitution = std::map<Label, Term>;

// Simultaneous substitution; throws UnmappedVariable for variables of t
// missing from m.
Term substitute(const Term& t, const Substitution& m);
// Leaves unmapped variables in place.
Term substitute_partial(const Term& t, const Substitution& m);

// Variable renaming through an injective map (unmapped labels are kept).
ExtTerm rename(const ExtTerm& t, const std::map<Label, Label>& names);

// The standard variables x0 .. x{n-1}.
std::vector<Label> standard_vars(std::size_t n);

}  // namespace qaw
