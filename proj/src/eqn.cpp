#include "qaw/eqn.hpp"

#include "qaw/error.hpp"

#include <stdexcept>

namespace qaw {

std::size_t PartialValue::value() const {
  if (status_ != Status::Defined) throw std::logic_error("value() of an undefined result");
  return payload_;
}

std::size_t PartialValue::index() const {
  if (status_ != Status::ChainConditionFailed) throw std::logic_error("index() without a chain failure");
  return payload_;
}

std::string PartialValue::to_string(const Carrier& c) const {
  switch (status_) {
    case Status::Defined: return c.label(payload_);
    case Status::ChainConditionFailed: return "undefined (chain condition fails at " + std::to_string(payload_) + ")";
    case Status::NonStabilizing: return "undefined (no stabilization)";
  }
  return {};
}

std::vector<Label> equation_vars(const QuantEq& e) {
  auto v = vars(e.left);
  v.merge(vars(e.right));
  return {v.begin(), v.end()};
}

std::vector<Label> equation_vars(const ContEq& e) {
  auto v = vars(e.left);
  v.merge(vars(e.right));
  return {v.begin(), v.end()};
}

namespace {

Interpretation make_interpretation(const std::vector<Label>& names, const std::vector<std::size_t>& values) {
  Interpretation f;
  for (std::size_t i = 0; i < names.size(); ++i) f[names[i]] = values[i];
  return f;
}

// Enumerates every assignment of `count` variables into n points.
template <class Fn>
void for_each_assignment(std::size_t count, std::size_t n, std::uint64_t max_maps, Fn&& fn) {
  bounded_power(n, count, max_maps, "interpretation enumeration");
  if (n == 0 && count > 0) return;
  std::vector<std::size_t> values(count, 0);
  do {
    if (!fn(values)) return;
  } while (next_tuple(values, n));
}

PartialValue interpret_rec(const ContAlgebra& a, Interpretation& f, const ExtTerm& t, std::size_t bound) {
  switch (t.kind()) {
    case ExtTerm::Kind::Base: return PartialValue::defined(eval_term(a, f, t.base()));
    case ExtTerm::Kind::JoinList: {
      const auto& fam = t.family();
      std::optional<std::size_t> prev;
      for (std::size_t k = 0; k < fam.size(); ++k) {
        auto v = interpret_rec(a, f, fam[k], bound);
        if (!v.is_defined()) return PartialValue::chain_failed(k);
        if (prev && !a.carrier().leq(*prev, v.value())) return PartialValue::chain_failed(k - 1);
        prev = v.value();
      }
      return PartialValue::defined(*prev);
    }
    case ExtTerm::Kind::JoinGenerated: {
      auto seed = interpret_rec(a, f, t.seed(), bound);
      if (!seed.is_defined()) return PartialValue::chain_failed(0);
      auto saved = f.find(kHole) == f.end() ? std::nullopt : std::optional<std::size_t>(f[kHole]);
      std::size_t v = seed.value();
      PartialValue out = PartialValue::non_stabilizing();
      for (std::size_t k = 0; k <= bound; ++k) {
        f[kHole] = v;
        std::size_t next = eval_term(a, f, t.step());
        if (next == v) {
          out = PartialValue::defined(v);
          break;
        }
        if (!a.carrier().leq(v, next)) {
          out = PartialValue::chain_failed(k);
          break;
        }
        v = next;
      }
      if (saved) f[kHole] = *saved;
      else f.erase(kHole);
      return out;
    }
  }
  return PartialValue::non_stabilizing();
}

}  // namespace

QuantVerdict satisfies_quant(const QuantAlgebra& a, const QuantEq& e, std::uint64_t max_maps) {
  check_term(a.sig(), e.left);
  check_term(a.sig(), e.right);
  if (e.eps.is_inf()) throw InputError("equation bound must be finite");
  const auto names = equation_vars(e);
  const CompiledTerm left(a.sig(), e.left, names);
  const CompiledTerm right(a.sig(), e.right, names);
  QuantVerdict out;
  for_each_assignment(names.size(), a.size(), max_maps, [&](const std::vector<std::size_t>& values) {
    auto l = left.eval(a, values);
    auto r = right.eval(a, values);
    const Dist& d = a.carrier().d(l, r);
    if (d <= e.eps) return true;
    out.ok = false;
    out.witness = make_interpretation(names, values);
    out.left_value = l;
    out.right_value = r;
    out.achieved = d;
    return false;
  });
  return out;
}

PartialValue interpret_extended(const ContAlgebra& a, const Interpretation& f, const ExtTerm& t) {
  check_term(a.sig(), t);
  Interpretation g = f;
  return interpret_rec(a, g, t, a.carrier().height());
}

ContVerdict satisfies_cont(const ContAlgebra& a, const ContEq& e, std::uint64_t max_maps) {
  check_term(a.sig(), e.left);
  check_term(a.sig(), e.right);
  const auto names = equation_vars(e);
  const std::size_t bound = a.carrier().height();
  ContVerdict out;
  for_each_assignment(names.size(), a.size(), max_maps, [&](const std::vector<std::size_t>& values) {
    auto f = make_interpretation(names, values);
    auto l = interpret_rec(a, f, e.left, bound);
    auto r = interpret_rec(a, f, e.right, bound);
    if (l.is_defined() && r.is_defined() && l.value() == r.value()) return true;
    out.ok = false;
    out.witness = std::move(f);
    out.left = l;
    out.right = r;
    return false;
  });
  return out;
}

ContEq inequation(const ExtTerm& t, const ExtTerm& t2, std::string name) {
  return {t2, ExtTerm::join({t, t2}), std::move(name)};
}

DefinabilityVerdict is_definable(const ContAlgebra& a, const ExtTerm& t, std::uint64_t max_maps) {
  check_term(a.sig(), t);
  auto v = vars(t);
  const std::vector<Label> names(v.begin(), v.end());
  const std::size_t bound = a.carrier().height();
  DefinabilityVerdict out;
  for_each_assignment(names.size(), a.size(), max_maps, [&](const std::vector<std::size_t>& values) {
    auto f = make_interpretation(names, values);
    auto r = interpret_rec(a, f, t, bound);
    if (r.is_defined()) return true;
    out.ok = false;
    out.witness = std::move(f);
    out.value = r;
    return false;
  });
  return out;
}

MembershipReport<QuantVerdict> check_variety_membership(const QuantAlgebra& a, const std::vector<QuantEq>& eqs,
                                                       std::uint64_t max_maps) {
  MembershipReport<QuantVerdict> out;
  for (const auto& e : eqs) {
    out.verdicts.push_back(satisfies_quant(a, e, max_maps));
    out.member = out.member && out.verdicts.back().ok;
  }
  return out;
}

MembershipReport<ContVerdict> check_variety_membership(const ContAlgebra& a, const std::vector<ContEq>& eqs,
                                                      std::uint64_t max_maps) {
  MembershipReport<ContVerdict> out;
  for (const auto& e : eqs) {
    out.verdicts.push_back(satisfies_cont(a, e, max_maps));
    out.member = out.member && out.verdicts.back().ok;
  }
  return out;
}

bool is_member(const QuantAlgebra& a, const std::vector<QuantEq>& eqs, std::uint64_t max_maps) {
  for (const auto& e : eqs)
    if (!satisfies_quant(a, e, max_maps).ok) return false;
  return true;
}

bool is_member(const ContAlgebra& a, const std::vector<ContEq>& eqs, std::uint64_t max_maps) {
  for (const auto& e : eqs)
    if (!satisfies_cont(a, e, max_maps).ok) return false;
  return true;
}

}  // namespace qaw
