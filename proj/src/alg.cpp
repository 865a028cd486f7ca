#include "qaw/alg.hpp"

#include "qaw/error.hpp"

#include <algorithm>

namespace qaw {

namespace {

bool structure_map(const FinMetric& dom, const FinMetric& cod, const PointMap& f) {
  return is_nonexpanding(dom, cod, f);
}
bool structure_map(const FinPoset& dom, const FinPoset& cod, const PointMap& f) {
  return is_monotone(dom, cod, f);
}

FinMetric restrict_to(const FinMetric& x, const std::vector<std::size_t>& keep) { return subspace(x, keep); }
FinPoset restrict_to(const FinPoset& x, const std::vector<std::size_t>& keep) { return subposet(x, keep); }

std::pair<FinMetric, std::vector<PointMap>> product_space(const std::vector<FinMetric>& f) {
  auto p = sup_product(f);
  std::vector<PointMap> proj;
  for (auto& m : p.projections) proj.push_back(m.table);
  return {std::move(p.space), std::move(proj)};
}
std::pair<FinPoset, std::vector<PointMap>> product_space(const std::vector<FinPoset>& f) {
  auto p = poset_product(f);
  std::vector<PointMap> proj;
  for (auto& m : p.projections) proj.push_back(m.table);
  return {std::move(p.poset), std::move(proj)};
}

}  // namespace

template <class Space>
Algebra<Space>::Algebra(Signature sig, Space carrier, std::vector<OpTable> ops)
    : sig_(std::move(sig)), carrier_(std::move(carrier)), ops_(std::move(ops)) {
  if (ops_.size() != sig_.size())
    throw InputError("algebra has " + std::to_string(ops_.size()) + " tables for " +
                     std::to_string(sig_.size()) + " symbols");
  for (std::size_t s = 0; s < sig_.size(); ++s) {
    const auto& sym = sig_.at(s);
    if (ops_[s].arity != sym.arity)
      throw InputError("table for '" + sym.name + "' has the wrong arity");
    if (ops_[s].values.size() != tuple_count(carrier_.size(), sym.arity))
      throw InputError("table for '" + sym.name + "' is not total");
    for (auto v : ops_[s].values)
      if (v >= carrier_.size()) throw InputError("table for '" + sym.name + "' leaves the carrier");
  }
}

AlgebraCheck validate_algebra(const QuantAlgebra& a) {
  AlgebraCheck check;
  const auto& m = a.carrier();
  const std::size_t n = a.size();
  for (std::size_t s = 0; s < a.sig().size(); ++s) {
    const auto& op = a.op(s);
    const std::size_t count = op.values.size();
    std::vector<std::size_t> lhs(op.arity), rhs(op.arity);
    std::optional<OpViolation> worst;
    bool worst_inf = false;
    Rational worst_excess = 0;
    for (std::size_t p = 0; p < count; ++p) {
      decode_tuple(p, n, lhs);
      for (std::size_t q = p + 1; q < count; ++q) {
        decode_tuple(q, n, rhs);
        Dist before;
        for (std::size_t i = 0; i < op.arity; ++i) before = dmax(before, m.d(lhs[i], rhs[i]));
        const Dist& after = m.d(op.values[p], op.values[q]);
        if (!(before < after)) continue;
        bool inf = after.is_inf();
        Rational excess = inf ? Rational(0) : after.value() - before.value();
        if (!worst || (inf && !worst_inf) || (inf == worst_inf && !inf && worst_excess < excess)) {
          worst = OpViolation{s, lhs, rhs};
          worst_inf = inf;
          worst_excess = excess;
        }
      }
    }
    if (worst) check.violations.push_back(std::move(*worst));
  }
  return check;
}

AlgebraCheck validate_algebra(const ContAlgebra& a) {
  AlgebraCheck check;
  const auto& p = a.carrier();
  const std::size_t n = a.size();
  for (std::size_t s = 0; s < a.sig().size(); ++s) {
    const auto& op = a.op(s);
    const std::size_t count = op.values.size();
    std::vector<std::size_t> lhs(op.arity), rhs(op.arity);
    bool found = false;
    for (std::size_t i = 0; i < count && !found; ++i) {
      decode_tuple(i, n, lhs);
      for (std::size_t j = 0; j < count && !found; ++j) {
        if (i == j) continue;
        decode_tuple(j, n, rhs);
        bool below = true;
        for (std::size_t k = 0; k < op.arity && below; ++k) below = p.leq(lhs[k], rhs[k]);
        if (below && !p.leq(op.values[i], op.values[j])) {
          check.violations.push_back({s, lhs, rhs});
          found = true;
        }
      }
    }
  }
  return check;
}

template <class Space>
std::size_t eval_term(const Algebra<Space>& a, const Interpretation& f, const Term& t) {
  if (t.is_var()) {
    auto it = f.find(t.name());
    if (it == f.end()) throw UnmappedVariable("variable '" + t.name() + "' is not interpreted");
    if (it->second >= a.size()) throw InputError("interpretation leaves the carrier");
    return it->second;
  }
  auto sym = a.sig().find(t.name());
  if (!sym) throw InputError("unknown symbol '" + t.name() + "'");
  if (a.sig().at(*sym).arity != t.args().size())
    throw InputError("symbol '" + t.name() + "' applied to the wrong number of arguments");
  std::vector<std::size_t> args;
  args.reserve(t.args().size());
  for (const auto& x : t.args()) args.push_back(eval_term(a, f, x));
  return a.apply(*sym, args);
}

// ---------------------------------------------------------------------------

CompiledTerm::CompiledTerm(const Signature& sig, const Term& t, const std::vector<Label>& var_order) {
  std::function<void(const Term&)> emit = [&](const Term& u) {
    if (u.is_var()) {
      auto it = std::find(var_order.begin(), var_order.end(), u.name());
      if (it == var_order.end()) throw UnmappedVariable("variable '" + u.name() + "' is not interpreted");
      code_.push_back({true, static_cast<std::size_t>(it - var_order.begin()), 0});
      return;
    }
    for (const auto& x : u.args()) emit(x);
    auto sym = sig.find(u.name());
    if (!sym) throw InputError("unknown symbol '" + u.name() + "'");
    if (sig.at(*sym).arity != u.args().size())
      throw InputError("symbol '" + u.name() + "' applied to the wrong number of arguments");
    code_.push_back({false, *sym, u.args().size()});
  };
  emit(t);
}

template <class Space>
std::size_t CompiledTerm::eval(const Algebra<Space>& a, std::span<const std::size_t> values) const {
  std::size_t stack[64] = {};
  std::vector<std::size_t> overflow;
  std::size_t* base = stack;
  if (code_.size() > 64) {
    overflow.resize(code_.size());
    base = overflow.data();
  }
  std::size_t top = 0;
  const std::size_t n = a.size();
  for (const auto& s : code_) {
    if (s.is_var) {
      base[top++] = values[s.index];
      continue;
    }
    std::size_t code = 0;
    for (std::size_t i = top - s.arity; i < top; ++i) code = code * n + base[i];
    top -= s.arity;
    base[top++] = a.op(s.index).values[code];
  }
  return base[0];
}

// ---------------------------------------------------------------------------

template <class Space>
HomoCheck check_homomorphism(const Homo<Space>& h) {
  HomoCheck out;
  const auto& src = h.source;
  const auto& tgt = h.target;
  if (!(src.sig() == tgt.sig())) throw InputError("homomorphism between different signatures");
  if (h.table.size() != src.size()) throw InputError("homomorphism table is not total");
  for (auto v : h.table)
    if (v >= tgt.size()) throw InputError("homomorphism table leaves the target");
  out.structure_ok = structure_map(src.carrier(), tgt.carrier(), h.table);
  out.ok = out.structure_ok;
  for (std::size_t s = 0; s < src.sig().size(); ++s) {
    const auto& op = src.op(s);
    std::vector<std::size_t> args(op.arity), image(op.arity);
    for (std::size_t p = 0; p < op.values.size(); ++p) {
      decode_tuple(p, src.size(), args);
      for (std::size_t i = 0; i < op.arity; ++i) image[i] = h.table[args[i]];
      if (h.table[op.values[p]] != tgt.apply(s, image)) {
        out.ok = false;
        out.symbol = s;
        out.args = args;
        return out;
      }
    }
  }
  return out;
}

template <class Space>
Derived<Space> product_algebra(const Signature& sig, const std::vector<Algebra<Space>>& factors,
                               std::uint64_t max_cells) {
  std::vector<Space> spaces;
  std::uint64_t size = 1;
  for (const auto& f : factors) {
    if (!(f.sig() == sig)) throw InputError("product of algebras over different signatures");
    spaces.push_back(f.carrier());
    size *= f.size();
    if (size > max_cells) throw BoundExceeded("product carrier", size, max_cells);
  }
  for (const auto& s : sig.symbols()) bounded_power(size, s.arity, max_cells, "product operation table");
  auto [carrier, proj] = product_space(spaces);
  const std::size_t n = carrier.size();
  std::vector<OpTable> ops;
  for (std::size_t s = 0; s < sig.size(); ++s) {
    const std::size_t arity = sig.at(s).arity;
    OpTable table{arity, std::vector<std::size_t>(tuple_count(n, arity))};
    std::vector<std::size_t> args(arity), comp(arity);
    for (std::size_t p = 0; p < table.values.size(); ++p) {
      decode_tuple(p, n, args);
      std::size_t point = 0;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        for (std::size_t i = 0; i < arity; ++i) comp[i] = proj[k][args[i]];
        point = point * factors[k].size() + factors[k].apply(s, comp);
      }
      table.values[p] = point;
    }
    ops.push_back(std::move(table));
  }
  return {Algebra<Space>(sig, std::move(carrier), std::move(ops)), std::move(proj)};
}

template <class Space>
Derived<Space> subalgebra_generated(const Algebra<Space>& a, const std::vector<std::size_t>& generators) {
  std::vector<char> in(a.size(), 0);
  for (auto g : generators) in.at(g) = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (in[i]) members.push_back(i);
    for (std::size_t s = 0; s < a.sig().size(); ++s) {
      const std::size_t arity = a.sig().at(s).arity;
      if (arity > 0 && members.empty()) continue;
      std::vector<std::size_t> pick(arity, 0), args(arity);
      do {
        for (std::size_t i = 0; i < arity; ++i) args[i] = members[pick[i]];
        auto v = a.apply(s, args);
        if (!in[v]) {
          in[v] = 1;
          grew = true;
        }
      } while (next_tuple(pick, members.size()));
    }
  }
  std::vector<std::size_t> keep;
  PointMap back(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (in[i]) {
      back[i] = keep.size();
      keep.push_back(i);
    }
  std::vector<OpTable> ops;
  for (std::size_t s = 0; s < a.sig().size(); ++s) {
    const std::size_t arity = a.sig().at(s).arity;
    OpTable table{arity, std::vector<std::size_t>(tuple_count(keep.size(), arity))};
    std::vector<std::size_t> local(arity), args(arity);
    for (std::size_t p = 0; p < table.values.size(); ++p) {
      decode_tuple(p, keep.size(), local);
      for (std::size_t i = 0; i < arity; ++i) args[i] = keep[local[i]];
      table.values[p] = back[a.apply(s, args)];
    }
    ops.push_back(std::move(table));
  }
  return {Algebra<Space>(a.sig(), restrict_to(a.carrier(), keep), std::move(ops)), {keep}};
}

template <class Space>
Derived<Space> homomorphic_image(const Homo<Space>& h) {
  auto check = check_homomorphism(h);
  if (!check.ok) throw NotAHomomorphism("map is not a homomorphism");
  std::vector<char> hit(h.target.size(), 0);
  for (auto v : h.table) hit[v] = 1;
  std::vector<std::size_t> keep;
  PointMap back(h.target.size(), h.target.size());
  for (std::size_t i = 0; i < h.target.size(); ++i)
    if (hit[i]) {
      back[i] = keep.size();
      keep.push_back(i);
    }
  const auto& tgt = h.target;
  std::vector<OpTable> ops;
  for (std::size_t s = 0; s < tgt.sig().size(); ++s) {
    const std::size_t arity = tgt.sig().at(s).arity;
    OpTable table{arity, std::vector<std::size_t>(tuple_count(keep.size(), arity))};
    std::vector<std::size_t> local(arity), args(arity);
    for (std::size_t p = 0; p < table.values.size(); ++p) {
      decode_tuple(p, keep.size(), local);
      for (std::size_t i = 0; i < arity; ++i) args[i] = keep[local[i]];
      auto v = back[tgt.apply(s, args)];
      if (v == tgt.size()) throw NotAHomomorphism("image is not closed under '" + tgt.sig().at(s).name + "'");
      table.values[p] = v;
    }
    ops.push_back(std::move(table));
  }
  PointMap onto(h.table.size());
  for (std::size_t i = 0; i < h.table.size(); ++i) onto[i] = back[h.table[i]];
  return {Algebra<Space>(tgt.sig(), restrict_to(tgt.carrier(), keep), std::move(ops)), {onto}};
}

template <class Space>
void for_each_algebra(const Signature& sig, const Space& carrier, std::uint64_t max_algebras,
                      const std::function<bool(const Algebra<Space>&)>& fn) {
  const std::size_t n = carrier.size();
  std::vector<std::size_t> cells;
  std::uint64_t total = 1;
  for (const auto& s : sig.symbols()) {
    auto count = bounded_power(n, s.arity, max_algebras, "algebra enumeration");
    cells.push_back(count);
    total *= bounded_power(n, count, max_algebras, "algebra enumeration");
    if (total > max_algebras) throw BoundExceeded("algebra enumeration", total, max_algebras);
  }
  if (n == 0) {
    for (auto c : cells)
      if (c > 0) return;
  }
  std::size_t flat = 0;
  for (auto c : cells) flat += c;
  std::vector<std::size_t> digits(flat, 0);
  do {
    std::vector<OpTable> ops;
    std::size_t at = 0;
    for (std::size_t s = 0; s < sig.size(); ++s) {
      ops.push_back({sig.at(s).arity, std::vector<std::size_t>(digits.begin() + at, digits.begin() + at + cells[s])});
      at += cells[s];
    }
    if (!fn(Algebra<Space>(sig, carrier, std::move(ops)))) return;
  } while (next_tuple(digits, n));
}

#define QAW_INSTANTIATE(Space)                                                                   \
  template class Algebra<Space>;                                                                 \
  template std::size_t eval_term(const Algebra<Space>&, const Interpretation&, const Term&);    \
  template std::size_t CompiledTerm::eval(const Algebra<Space>&, std::span<const std::size_t>) const; \
  template HomoCheck check_homomorphism(const Homo<Space>&);                                     \
  template Derived<Space> product_algebra(const Signature&, const std::vector<Algebra<Space>>&,  \
                                          std::uint64_t);                                        \
  template Derived<Space> subalgebra_generated(const Algebra<Space>&, const std::vector<std::size_t>&); \
  template Derived<Space> homomorphic_image(const Homo<Space>&);                                 \
  template void for_each_algebra(const Signature&, const Space&, std::uint64_t,                  \
                                 const std::function<bool(const Algebra<Space>&)>&);

QAW_INSTANTIATE(FinMetric)
QAW_INSTANTIATE(FinPoset)

#undef QAW_INSTANTIATE

}  // namespace qaw
