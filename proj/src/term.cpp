#include "qaw/term.hpp"

#include "qaw/error.hpp"

#include <algorithm>

namespace qaw {

Signature::Signature(std::vector<Symbol> symbols) {
  for (auto& s : symbols) add(std::move(s.name), s.arity);
}

void Signature::add(std::string name, std::size_t arity) {
  if (index_.count(name)) throw InputError("duplicate symbol '" + name + "'");
  index_.emplace(name, symbols_.size());
  symbols_.push_back({std::move(name), arity});
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Signature::max_arity() const {
  std::size_t best = 0;
  for (const auto& s : symbols_) best = std::max(best, s.arity);
  return best;
}

// ---------------------------------------------------------------------------

Term Term::var(Label name) {
  return Term(std::make_shared<const Node>(Node{true, std::move(name), {}, 0}));
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  std::size_t height = 0;
  for (const auto& a : args) height = std::max(height, a.height() + 1);
  return Term(std::make_shared<const Node>(Node{false, std::move(symbol), std::move(args), height}));
}

std::string Term::to_string() const {
  if (is_var()) return quote_name(name());
  std::string out = quote_name(name()) + "(";
  for (std::size_t i = 0; i < args().size(); ++i) {
    if (i) out += ", ";
    out += args()[i].to_string();
  }
  return out + ")";
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return a.is_var() == b.is_var() && a.name() == b.name() && a.args() == b.args();
}

bool operator<(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return false;
  if (a.is_var() != b.is_var()) return a.is_var();
  if (a.name() != b.name()) return a.name() < b.name();
  return std::lexicographical_compare(a.args().begin(), a.args().end(), b.args().begin(),
                                      b.args().end());
}

void check_term(const Signature& sig, const Term& t) {
  if (t.is_var()) return;
  auto idx = sig.find(t.name());
  if (!idx) throw InputError("unknown symbol '" + t.name() + "'");
  if (sig.at(*idx).arity != t.args().size())
    throw InputError("symbol '" + t.name() + "' has arity " + std::to_string(sig.at(*idx).arity) +
                     ", applied to " + std::to_string(t.args().size()) + " arguments");
  for (const auto& a : t.args()) check_term(sig, a);
}

// ---------------------------------------------------------------------------

ExtTerm::ExtTerm(Term t) : node_(std::make_shared<const Node>(Node{Kind::Base, std::move(t), {}})) {}

ExtTerm ExtTerm::join(std::vector<ExtTerm> family) {
  if (family.empty()) throw InputError("join of an empty family");
  return ExtTerm(std::make_shared<const Node>(Node{Kind::JoinList, std::nullopt, std::move(family)}));
}

ExtTerm ExtTerm::generated(ExtTerm seed, Term step) {
  if (vars(seed).count(kHole))
    throw InputError("the hole variable '" + kHole + "' may not occur in a seed");
  return ExtTerm(std::make_shared<const Node>(Node{Kind::JoinGenerated, std::move(step), {std::move(seed)}}));
}

const Term& ExtTerm::base() const {
  if (kind() != Kind::Base) throw std::logic_error("base() of a join");
  return *node_->term;
}

const std::vector<ExtTerm>& ExtTerm::family() const {
  if (kind() != Kind::JoinList) throw std::logic_error("family() of a non-list term");
  return node_->children;
}

const ExtTerm& ExtTerm::seed() const {
  if (kind() != Kind::JoinGenerated) throw std::logic_error("seed() of a non-generated term");
  return node_->children.front();
}

const Term& ExtTerm::step() const {
  if (kind() != Kind::JoinGenerated) throw std::logic_error("step() of a non-generated term");
  return *node_->term;
}

ExtTerm ExtTerm::member(std::size_t k) const {
  switch (kind()) {
    case Kind::Base: throw std::logic_error("member() of a base term");
    case Kind::JoinList: return family()[std::min(k, family().size() - 1)];
    case Kind::JoinGenerated: {
      if (!seed().is_base())
        throw InputError("members of a generated family with a join seed are not terms");
      Term t = seed().base();
      for (std::size_t i = 0; i < k; ++i) t = substitute_partial(step(), {{kHole, t}});
      return t;
    }
  }
  throw std::logic_error("unreachable");
}

std::string ExtTerm::to_string() const {
  switch (kind()) {
    case Kind::Base: return base().to_string();
    case Kind::JoinList: {
      std::string out = "join [";
      for (std::size_t i = 0; i < family().size(); ++i) {
        if (i) out += ", ";
        out += family()[i].to_string();
      }
      return out + "]";
    }
    case Kind::JoinGenerated:
      return "join from " + seed().to_string() + " step " + step().to_string();
  }
  return {};
}

bool operator==(const ExtTerm& a, const ExtTerm& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.node_->term == b.node_->term && a.node_->children == b.node_->children;
}

void check_term(const Signature& sig, const ExtTerm& t) {
  switch (t.kind()) {
    case ExtTerm::Kind::Base: check_term(sig, t.base()); break;
    case ExtTerm::Kind::JoinList:
      for (const auto& m : t.family()) check_term(sig, m);
      break;
    case ExtTerm::Kind::JoinGenerated:
      check_term(sig, t.seed());
      check_term(sig, t.step());
      break;
  }
}

// ---------------------------------------------------------------------------

namespace {

void collect_vars(const Term& t, std::set<Label>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

}  // namespace

std::set<Label> vars(const Term& t) {
  std::set<Label> out;
  collect_vars(t, out);
  return out;
}

std::set<Label> vars(const ExtTerm& t) {
  switch (t.kind()) {
    case ExtTerm::Kind::Base: return vars(t.base());
    case ExtTerm::Kind::JoinList: {
      std::set<Label> out;
      for (const auto& m : t.family()) out.merge(vars(m));
      return out;
    }
    case ExtTerm::Kind::JoinGenerated: {
      auto out = vars(t.seed());
      auto step = vars(t.step());
      step.erase(kHole);
      out.merge(step);
      return out;
    }
  }
  return {};
}

bool similar(const Term& a, const Term& b) {
  if (a.is_var() || b.is_var()) return a.is_var() && b.is_var();
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!similar(a.args()[i], b.args()[i])) return false;
  return true;
}

namespace {

void check_leaves(const Carrier& c, const Term& t) {
  for (const auto& v : vars(t)) c.index(v);
}

Dist metric_rec(const FinMetric& m, const Term& a, const Term& b) {
  if (a.is_var() && b.is_var()) return m.d(m.index(a.name()), m.index(b.name()));
  if (!similar(a, b)) return Dist::inf();
  Dist best;
  for (std::size_t i = 0; i < a.args().size(); ++i) best = dmax(best, metric_rec(m, a.args()[i], b.args()[i]));
  return best;
}

bool order_rec(const FinPoset& p, const Term& a, const Term& b) {
  if (a.is_var() && b.is_var()) return p.leq(p.index(a.name()), p.index(b.name()));
  if (!similar(a, b)) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!order_rec(p, a.args()[i], b.args()[i])) return false;
  return true;
}

}  // namespace

Dist term_metric(const FinMetric& m, const Term& a, const Term& b) {
  check_leaves(m.carrier(), a);
  check_leaves(m.carrier(), b);
  return metric_rec(m, a, b);
}

bool term_order(const FinPoset& p, const Term& a, const Term& b) {
  check_leaves(p.carrier(), a);
  check_leaves(p.carrier(), b);
  return order_rec(p, a, b);
}

std::vector<Term> enumerate_terms(const Signature& sig, const std::vector<Label>& gens,
                                  std::size_t depth, std::size_t max_terms) {
  std::vector<Term> out;
  auto push = [&](Term t) {
    if (out.size() >= max_terms) throw BoundExceeded("term enumeration", out.size() + 1, max_terms);
    out.push_back(std::move(t));
  };
  for (const auto& g : gens) push(Term::var(g));
  for (const auto& s : sig.symbols())
    if (s.arity == 0) push(Term::app(s.name));

  std::size_t below = 0;  // terms of height < level - 1 occupy out[0, below)
  for (std::size_t level = 1; level <= depth; ++level) {
    const std::size_t available = out.size();  // all terms of height < level
    for (const auto& s : sig.symbols()) {
      if (s.arity == 0) continue;
      std::vector<std::size_t> idx(s.arity, 0);
      if (available == 0) continue;
      do {
        bool fresh = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= below; });
        if (!fresh) continue;
        std::vector<Term> args;
        for (auto i : idx) args.push_back(out[i]);
        push(Term::app(s.name, std::move(args)));
      } while (next_tuple(idx, available));
    }
    below = available;
  }
  return out;
}

Term substitute(const Term& t, const Substitution& m) {
  if (t.is_var()) {
    auto it = m.find(t.name());
    if (it == m.end()) throw UnmappedVariable("variable '" + t.name() + "' is not mapped");
    return it->second;
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute(a, m));
  return Term::app(t.name(), std::move(args));
}

Term substitute_partial(const Term& t, const Substitution& m) {
  if (t.is_var()) {
    auto it = m.find(t.name());
    return it == m.end() ? t : it->second;
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute_partial(a, m));
  return Term::app(t.name(), std::move(args));
}

namespace {

Term rename_term(const Term& t, const std::map<Label, Label>& names) {
  if (t.is_var()) {
    auto it = names.find(t.name());
    return it == names.end() ? t : Term::var(it->second);
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rename_term(a, names));
  return Term::app(t.name(), std::move(args));
}

}  // namespace

ExtTerm rename(const ExtTerm& t, const std::map<Label, Label>& names) {
  switch (t.kind()) {
    case ExtTerm::Kind::Base: return rename_term(t.base(), names);
    case ExtTerm::Kind::JoinList: {
      std::vector<ExtTerm> fam;
      for (const auto& m : t.family()) fam.push_back(rename(m, names));
      return ExtTerm::join(std::move(fam));
    }
    case ExtTerm::Kind::JoinGenerated: {
      auto without_hole = names;
      without_hole.erase(kHole);
      return ExtTerm::generated(rename(t.seed(), without_hole), rename_term(t.step(), without_hole));
    }
  }
  return t;
}

std::vector<Label> standard_vars(std::size_t n) {
  std::vector<Label> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

}  // namespace qaw
