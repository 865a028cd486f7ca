#pragma once

// Generators and independent reference implementations shared by the unit
// and acceptance tests. Oracles here never call the library routine they
// are used to check.

#include "qaw/alg.hpp"
#include "qaw/dist.hpp"
#include "qaw/eqn.hpp"
#include "qaw/mspace.hpp"
#include "qaw/poset.hpp"
#include "qaw/term.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qtest {

using qaw::Dist;
using qaw::FinMetric;
using qaw::FinPoset;
using qaw::Label;

struct Rng {
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool coin(double p = 0.5) { return std::uniform_real_distribution<double>(0, 1)(gen) < p; }
  std::mt19937_64 gen;
};

inline std::vector<Label> labels(std::size_t n, const std::string& prefix = "p") {
  std::vector<Label> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Relaxes every edge n times (Bellman-Ford from every source).
inline std::vector<Dist> shortest_paths(std::size_t n, const std::vector<Dist>& w) {
  std::vector<Dist> best(n * n, Dist::inf());
  for (std::size_t s = 0; s < n; ++s) {
    best[s * n + s] = Dist::zero();
    for (std::size_t round = 0; round < n; ++round)
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
          if (best[s * n + u].is_inf() || w[u * n + v].is_inf()) continue;
          Dist via = best[s * n + u] + w[u * n + v];
          if (via < best[s * n + v]) best[s * n + v] = via;
        }
  }
  return best;
}

// Triple loop over the axioms.
inline bool metric_axioms_hold(std::size_t n, const std::vector<Dist>& t) {
  for (std::size_t x = 0; x < n; ++x) {
    if (!t[x * n + x].is_zero()) return false;
    for (std::size_t y = 0; y < n; ++y) {
      if (!(t[x * n + y] == t[y * n + x])) return false;
      if (x != y && t[x * n + y].is_zero()) return false;
      for (std::size_t z = 0; z < n; ++z)
        if (!(t[x * n + z] <= t[x * n + y] + t[y * n + z])) return false;
    }
  }
  return true;
}

// A valid metric on at most max_points points with every finite nonzero
// distance in {k/4 : 1 <= k <= 40}.
inline FinMetric random_metric(Rng& r, std::size_t max_points, std::size_t min_points = 1) {
  for (;;) {
    const std::size_t n = r.between(min_points, max_points);
    std::vector<Dist> t(n * n, Dist::inf());
    if (r.coin()) {
      // components at infinite distance; inside a component distances in [5, 10]
      std::vector<std::size_t> comp(n);
      for (auto& c : comp) c = r.below(std::max<std::size_t>(1, n / 2 + 1));
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y <= x; ++y) {
          Dist d = x == y ? Dist::zero() : comp[x] == comp[y] ? Dist(long(r.between(20, 40)), 4) : Dist::inf();
          t[x * n + y] = t[y * n + x] = d;
        }
    } else {
      std::vector<Dist> w(n * n, Dist::inf());
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < x; ++y)
          if (r.coin(0.7)) w[x * n + y] = w[y * n + x] = Dist(long(r.between(1, 16)), 4);
      t = shortest_paths(n, w);
      bool small = true;
      for (auto& d : t) small = small && (d.is_inf() || d <= Dist(10));
      if (!small) continue;
    }
    return FinMetric(labels(n), t);
  }
}

// Warshall closure of random pairs i < j: a random partial order.
inline FinPoset random_poset(Rng& r, std::size_t n, double density = 0.35) {
  std::vector<char> leq(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = 1;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), r.gen);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (r.coin(density)) leq[perm[i] * n + perm[j]] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (leq[i * n + k] && leq[k * n + j]) leq[i * n + j] = 1;
  return FinPoset(labels(n), leq);
}

inline std::vector<std::size_t> decode(std::size_t code, std::size_t radix, std::size_t len) {
  std::vector<std::size_t> out(len);
  for (std::size_t i = len; i-- > 0;) {
    out[i] = code % radix;
    code /= radix;
  }
  return out;
}

inline std::size_t power(std::size_t b, std::size_t e) {
  std::size_t out = 1;
  while (e--) out *= b;
  return out;
}

// Random nonexpanding operation: a random table when it happens to be
// nonexpanding, otherwise a map applied to one coordinate.
inline qaw::OpTable random_quant_op(Rng& r, const FinMetric& m, std::size_t arity) {
  const std::size_t n = m.size();
  const std::size_t cells = power(n, arity);
  for (int attempt = 0; attempt < 4; ++attempt) {
    qaw::OpTable t{arity, std::vector<std::size_t>(cells)};
    for (auto& v : t.values) v = r.below(n);
    bool ok = true;
    for (std::size_t a = 0; a < cells && ok; ++a)
      for (std::size_t b = 0; b < cells && ok; ++b) {
        auto x = decode(a, n, arity), y = decode(b, n, arity);
        Dist sup;
        for (std::size_t i = 0; i < arity; ++i) sup = qaw::dmax(sup, m.d(x[i], y[i]));
        ok = m.d(t.values[a], t.values[b]) <= sup;
      }
    if (ok) return t;
  }
  qaw::OpTable t{arity, std::vector<std::size_t>(cells)};
  if (arity == 0) {
    t.values[0] = r.below(n);
    return t;
  }
  // g(x_i) for a nonexpanding g: the identity or a constant
  const std::size_t i = r.below(arity);
  const bool constant = r.coin(0.3);
  const std::size_t c = r.below(n);
  for (std::size_t a = 0; a < cells; ++a) t.values[a] = constant ? c : decode(a, n, arity)[i];
  return t;
}

// Random monotone operation, assigned along a linear extension of the
// componentwise order; falls back to a constant when stuck.
inline qaw::OpTable random_cont_op(Rng& r, const FinPoset& p, std::size_t arity) {
  const std::size_t n = p.size();
  const std::size_t cells = power(n, arity);
  std::vector<std::size_t> order(cells);
  for (std::size_t i = 0; i < cells; ++i) order[i] = i;
  auto below = [&](std::size_t a, std::size_t b) {
    auto x = decode(a, n, arity), y = decode(b, n, arity);
    for (std::size_t i = 0; i < arity; ++i)
      if (!p.leq(x[i], y[i])) return false;
    return true;
  };
  auto rank = [&](std::size_t a) {
    std::size_t k = 0;
    for (std::size_t b = 0; b < cells; ++b) k += below(b, a);
    return k;
  };
  std::vector<std::size_t> ranks(cells);
  for (std::size_t i = 0; i < cells; ++i) ranks[i] = rank(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
  qaw::OpTable t{arity, std::vector<std::size_t>(cells, n)};
  for (auto a : order) {
    std::vector<std::size_t> candidates;
    for (std::size_t v = 0; v < n; ++v) {
      bool ok = true;
      for (std::size_t b = 0; b < cells && ok; ++b)
        if (t.values[b] != n && b != a) {
          if (below(b, a) && !p.leq(t.values[b], v)) ok = false;
          if (below(a, b) && !p.leq(v, t.values[b])) ok = false;
        }
      if (ok) candidates.push_back(v);
    }
    if (candidates.empty()) {
      std::fill(t.values.begin(), t.values.end(), r.below(n));
      return t;
    }
    t.values[a] = candidates[r.below(candidates.size())];
  }
  return t;
}

inline qaw::Signature small_signature(Rng& r) {
  qaw::Signature sig;
  sig.add("mul", 2);
  if (r.coin()) sig.add("e", 0);
  if (r.coin()) sig.add("inv", 1);
  return sig;
}

inline qaw::QuantAlgebra random_quant_algebra(Rng& r, const qaw::Signature& sig, std::size_t max_points) {
  auto m = random_metric(r, max_points);
  std::vector<qaw::OpTable> ops;
  for (const auto& s : sig.symbols()) ops.push_back(random_quant_op(r, m, s.arity));
  return qaw::QuantAlgebra(sig, m, ops);
}

inline qaw::ContAlgebra random_cont_algebra(Rng& r, const qaw::Signature& sig, std::size_t max_points) {
  auto p = random_poset(r, r.between(1, max_points));
  std::vector<qaw::OpTable> ops;
  for (const auto& s : sig.symbols()) ops.push_back(random_cont_op(r, p, s.arity));
  return qaw::ContAlgebra(sig, p, ops);
}

inline qaw::Term random_term(Rng& r, const qaw::Signature& sig, const std::vector<Label>& vars, std::size_t depth) {
  if (depth == 0 || r.coin(0.3)) {
    std::vector<std::size_t> constants;
    for (std::size_t i = 0; i < sig.size(); ++i)
      if (sig.at(i).arity == 0) constants.push_back(i);
    if (!constants.empty() && r.coin(0.2)) return qaw::Term::app(sig.at(constants[r.below(constants.size())]).name);
    return qaw::Term::var(vars[r.below(vars.size())]);
  }
  const auto& s = sig.at(r.below(sig.size()));
  std::vector<qaw::Term> args;
  for (std::size_t i = 0; i < s.arity; ++i) args.push_back(random_term(r, sig, vars, depth - 1));
  return qaw::Term::app(s.name, std::move(args));
}

inline qaw::ExtTerm random_ext_term(Rng& r, const qaw::Signature& sig, const std::vector<Label>& vars,
                                    std::size_t depth) {
  const std::size_t pick = depth == 0 ? 0 : r.below(3);
  if (pick == 0) return random_term(r, sig, vars, 2);
  if (pick == 1) {
    std::vector<qaw::ExtTerm> fam;
    const std::size_t len = r.between(1, 3);
    for (std::size_t i = 0; i < len; ++i) fam.push_back(random_ext_term(r, sig, vars, depth - 1));
    return qaw::ExtTerm::join(std::move(fam));
  }
  auto step_vars = vars;
  step_vars.push_back(qaw::kHole);
  auto step = random_term(r, sig, step_vars, 2);
  if (r.coin(0.6) && !sig.symbols().empty()) {
    // make the hole occur
    const auto& s = sig.at(r.below(sig.size()));
    if (s.arity > 0) {
      std::vector<qaw::Term> args;
      for (std::size_t i = 0; i < s.arity; ++i)
        args.push_back(i == 0 ? qaw::Term::var(qaw::kHole) : random_term(r, sig, vars, 1));
      step = qaw::Term::app(s.name, std::move(args));
    }
  }
  return qaw::ExtTerm::generated(random_ext_term(r, sig, vars, depth - 1), step);
}

// Direct recursion through the tables.
template <class Space>
std::size_t eval_oracle(const qaw::Algebra<Space>& a, const std::map<Label, std::size_t>& f, const qaw::Term& t) {
  if (t.is_var()) return f.at(t.name());
  std::size_t code = 0;
  for (const auto& x : t.args()) code = code * a.size() + eval_oracle(a, f, x);
  return a.op(*a.sig().find(t.name())).values[code];
}

// f^@ computed member by member. Generated families are unrolled up to
// |carrier| + 1 members; an orbit that has not repeated by then cannot be
// an ascending chain.
struct OracleValue {
  bool defined = false;
  std::size_t value = 0;
};

inline OracleValue ext_oracle(const qaw::ContAlgebra& a, std::map<Label, std::size_t> f, const qaw::ExtTerm& t) {
  using K = qaw::ExtTerm::Kind;
  if (t.kind() == K::Base) return {true, eval_oracle(a, f, t.base())};
  std::vector<std::size_t> seq;
  if (t.kind() == K::JoinList) {
    for (const auto& m : t.family()) {
      auto v = ext_oracle(a, f, m);
      if (!v.defined) return {};
      seq.push_back(v.value);
    }
  } else {
    auto v = ext_oracle(a, f, t.seed());
    if (!v.defined) return {};
    seq.push_back(v.value);
    for (std::size_t k = 0; k <= a.size(); ++k) {
      f[qaw::kHole] = seq.back();
      seq.push_back(eval_oracle(a, f, t.step()));
    }
    if (seq[seq.size() - 1] != seq[seq.size() - 2]) return {};
  }
  for (std::size_t k = 0; k + 1 < seq.size(); ++k)
    if (!a.carrier().leq(seq[k], seq[k + 1])) return {};
  return {true, seq.back()};
}

}  // namespace qtest
