// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "gen_workbench.hpp"
#include "support.hpp"

#include "qaw/bridge.hpp"
#include "qaw/cli.hpp"
#include "qaw/colim.hpp"
#include "qaw/error.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace qaw;
using qtest::Rng;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

// ---------------------------------------------------------------------------
// Oracles

bool same_metric_by_labels(const FinMetric& a, const FinMetric& b) {
  if (a.size() != b.size()) return false;
  std::map<Label, std::size_t> ib;
  for (std::size_t j = 0; j < b.size(); ++j) ib[b.label(j)] = j;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ib.count(a.label(i))) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!(a.d(i, j) == b.d(ib[a.label(i)], ib[a.label(j)]))) return false;
  return true;
}

bool monotone(const FinPoset& a, const FinPoset& b, const PointMap& f) {
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (a.leq(x, y) && !b.leq(f[x], f[y])) return false;
  return true;
}

bool nonexpanding(const FinMetric& a, const FinMetric& b, const PointMap& f) {
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (!(b.d(f[x], f[y]) <= a.d(x, y))) return false;
  return true;
}

PointMap random_monotone(Rng& r, const FinPoset& a, const FinPoset& b) {
  for (int t = 0; t < 60; ++t) {
    auto f = qtest::random_map(r, a.size(), b.size());
    if (monotone(a, b, f)) return f;
  }
  return PointMap(a.size(), r.below(b.size()));
}

PointMap random_nonexpanding(Rng& r, const FinMetric& a, const FinMetric& b) {
  for (int t = 0; t < 60; ++t) {
    auto f = qtest::random_map(r, a.size(), b.size());
    if (nonexpanding(a, b, f)) return f;
  }
  return PointMap(a.size(), r.below(b.size()));
}

// Smallest preorder on b containing <=_b and every (f0 a, f1 a).
std::vector<char> coinserter_preorder(const ParallelPair& p) {
  const std::size_t n = p.b.size();
  std::vector<char> rel(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) rel[x * n + y] = p.b.leq(x, y);
  for (std::size_t a = 0; a < p.a.size(); ++a) rel[p.f0[a] * n + p.f1[a]] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rel[i * n + k] && rel[k * n + j]) rel[i * n + j] = 1;
  return rel;
}

std::size_t preorder_classes(const std::vector<char>& rel, std::size_t n) {
  std::size_t classes = 0;
  for (std::size_t x = 0; x < n; ++x) {
    bool first = true;
    for (std::size_t y = 0; y < x; ++y) first = first && !(rel[x * n + y] && rel[y * n + x]);
    classes += first;
  }
  return classes;
}

template <class Space>
std::vector<Label> all_vars(const std::vector<ExtTerm>& ts) {
  std::set<Label> vs;
  for (const auto& t : ts)
    for (const auto& v : vars(t)) vs.insert(v);
  return {vs.begin(), vs.end()};
}

// Direct double loop over all interpretations.
bool quant_oracle(const QuantAlgebra& a, const QuantEq& e) {
  std::set<Label> vs = vars(e.left);
  for (const auto& v : vars(e.right)) vs.insert(v);
  std::vector<Label> names(vs.begin(), vs.end());
  const std::size_t n = a.size(), k = names.size();
  for (std::size_t code = 0; code < qtest::power(n, k); ++code) {
    auto vals = qtest::decode(code, n, k);
    std::map<Label, std::size_t> f;
    for (std::size_t i = 0; i < k; ++i) f[names[i]] = vals[i];
    if (!(a.carrier().d(qtest::eval_oracle(a, f, e.left), qtest::eval_oracle(a, f, e.right)) <= e.eps)) return false;
  }
  return true;
}

// Largest distance between the two sides over all interpretations.
Dist quant_gap(const QuantAlgebra& a, const Term& l, const Term& r) {
  std::set<Label> vs = vars(l);
  for (const auto& v : vars(r)) vs.insert(v);
  std::vector<Label> names(vs.begin(), vs.end());
  Dist worst;
  for (std::size_t code = 0; code < qtest::power(a.size(), names.size()); ++code) {
    auto vals = qtest::decode(code, a.size(), names.size());
    std::map<Label, std::size_t> f;
    for (std::size_t i = 0; i < names.size(); ++i) f[names[i]] = vals[i];
    worst = dmax(worst, a.carrier().d(qtest::eval_oracle(a, f, l), qtest::eval_oracle(a, f, r)));
  }
  return worst;
}

bool cont_oracle(const ContAlgebra& a, const ContEq& e) {
  std::set<Label> vs = vars(e.left);
  for (const auto& v : vars(e.right)) vs.insert(v);
  std::vector<Label> names(vs.begin(), vs.end());
  for (std::size_t code = 0; code < qtest::power(a.size(), names.size()); ++code) {
    auto vals = qtest::decode(code, a.size(), names.size());
    std::map<Label, std::size_t> f;
    for (std::size_t i = 0; i < names.size(); ++i) f[names[i]] = vals[i];
    auto l = qtest::ext_oracle(a, f, e.left), r = qtest::ext_oracle(a, f, e.right);
    if (!l.defined || !r.defined || l.value != r.value) return false;
  }
  return true;
}

template <class Space>
bool structure_preserved(const Algebra<Space>& a, const Algebra<Space>& b, const PointMap& h);
template <>
bool structure_preserved(const QuantAlgebra& a, const QuantAlgebra& b, const PointMap& h) {
  return nonexpanding(a.carrier(), b.carrier(), h);
}
template <>
bool structure_preserved(const ContAlgebra& a, const ContAlgebra& b, const PointMap& h) {
  return monotone(a.carrier(), b.carrier(), h);
}

template <class Space>
bool homomorphism_oracle(const Algebra<Space>& a, const Algebra<Space>& b, const PointMap& h) {
  if (!structure_preserved(a, b, h)) return false;
  for (std::size_t s = 0; s < a.sig().size(); ++s) {
    const std::size_t k = a.sig().at(s).arity;
    for (std::size_t code = 0; code < qtest::power(a.size(), k); ++code) {
      auto args = qtest::decode(code, a.size(), k);
      std::vector<std::size_t> img(k);
      for (std::size_t i = 0; i < k; ++i) img[i] = h[args[i]];
      if (h[a.op(s).values[code]] != b.apply(s, img)) return false;
    }
  }
  return true;
}

template <class Space>
std::vector<PointMap> homomorphisms(const Algebra<Space>& a, const Algebra<Space>& b) {
  std::vector<PointMap> out;
  for (std::size_t code = 0; code < qtest::power(b.size(), a.size()); ++code) {
    auto h = qtest::decode(code, b.size(), a.size());
    if (homomorphism_oracle(a, b, h)) out.push_back(h);
  }
  return out;
}

// Stages of size <= 3 and structure-preserving links; constant after the
// last stage.
OmegaChainMet random_met_chain(Rng& r) {
  OmegaChainMet c;
  const std::size_t k = r.between(1, 3);
  for (std::size_t i = 0; i < k; ++i) c.stages.push_back(qtest::random_metric(r, 3));
  for (std::size_t i = 0; i + 1 < k; ++i) c.links.push_back(random_nonexpanding(r, c.stages[i], c.stages[i + 1]));
  return c;
}

OmegaChainPos random_pos_chain(Rng& r) {
  OmegaChainPos c;
  const std::size_t k = r.between(1, 3);
  for (std::size_t i = 0; i < k; ++i) c.stages.push_back(qtest::random_poset(r, r.between(1, 3)));
  for (std::size_t i = 0; i + 1 < k; ++i) c.links.push_back(random_monotone(r, c.stages[i], c.stages[i + 1]));
  return c;
}

// A pair with a joint section d: b -> a, carriers <= 4.
ParallelPair random_reflexive_pair(Rng& r) {
  for (;;) {
    auto b = qtest::random_poset(r, r.between(1, 3));
    auto a = qtest::random_poset(r, r.between(b.size(), 4));
    std::vector<std::size_t> perm(a.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), r.gen);
    PointMap d(perm.begin(), perm.begin() + static_cast<long>(b.size()));
    PointMap f0 = qtest::random_map(r, a.size(), b.size()), f1 = qtest::random_map(r, a.size(), b.size());
    for (std::size_t y = 0; y < b.size(); ++y) f0[d[y]] = f1[d[y]] = y;
    if (monotone(b, a, d) && monotone(a, b, f0) && monotone(a, b, f1)) return {a, b, f0, f1};
  }
}

// alpha : T_j -> V_j checked directly against the tables: structure map
// into the discrete V_j, alpha . eta = id, and alpha . ext(id) = alpha .
// ext(eta . alpha) on T_|T_j|.
bool em_oracle(const MonadPresentation& P, std::size_t j, const PointMap& alpha) {
  const std::size_t t = P.size(j);
  for (std::size_t s = 0; s < t; ++s)
    for (std::size_t u = 0; u < t; ++u) {
      bool related = P.mode == Mode::Metric ? !P.metric[j].d(s, u).is_inf() : P.order[j].leq(s, u);
      if (related && alpha[s] != alpha[u]) return false;
    }
  for (std::size_t i = 0; i < j; ++i)
    if (alpha[P.unit[j][i]] != i) return false;
  PointMap id(t), eta_alpha(t);
  for (std::size_t i = 0; i < t; ++i) {
    id[i] = i;
    eta_alpha[i] = P.unit[j][alpha[i]];
  }
  const auto& mu = P.ext[t][j][encode_tuple(id, t)];
  const auto& ta = P.ext[t][j][encode_tuple(eta_alpha, t)];
  for (std::size_t sigma = 0; sigma < P.size(t); ++sigma)
    if (alpha[mu[sigma]] != alpha[ta[sigma]]) return false;
  return true;
}

// For every f : V_n -> A, g(sigma) = sigma_A(f x0, ..) extends f and is a
// structure-preserving homomorphism from T_n. Uniqueness is automatic: any
// homomorphism extending f agrees with g on sigma = sigma(eta x0, ..).
template <class Space>
bool freeness_oracle(const MonadPresentation& P, std::size_t n, const Algebra<Space>& a) {
  const std::size_t c = a.size();
  for (std::size_t fc = 0; fc < qtest::power(c, n); ++fc) {
    auto f = qtest::decode(fc, c, n);
    PointMap g(P.size(n));
    for (std::size_t s = 0; s < P.size(n); ++s) g[s] = a.apply(*a.sig().find(symbol_name(P, n, s)), f);
    for (std::size_t i = 0; i < n; ++i)
      if (g[P.unit[n][i]] != f[i]) return false;
    for (std::size_t s = 0; s < P.size(n); ++s)
      for (std::size_t u = 0; u < P.size(n); ++u) {
        bool ok;
        if constexpr (std::is_same_v<Space, FinMetric>)
          ok = a.carrier().d(g[s], g[u]) <= P.metric[n].d(s, u);
        else
          ok = !P.order[n].leq(s, u) || a.carrier().leq(g[s], g[u]);
        if (!ok) return false;
      }
    for (std::size_t m = 0; m <= P.max_arity; ++m)
      for (std::size_t tau = 0; tau < P.size(m); ++tau) {
        const std::size_t sym = *a.sig().find(symbol_name(P, m, tau));
        for (std::size_t code = 0; code < qtest::power(P.size(n), m); ++code) {
          auto args = qtest::decode(code, P.size(n), m);
          std::vector<std::size_t> gargs(m);
          for (std::size_t i = 0; i < m; ++i) gargs[i] = g[args[i]];
          if (g[P.ext[m][n][code][tau]] != a.apply(sym, gargs)) return false;
        }
      }
  }
  return true;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string eqgen_text(const MonadPresentation& P, const std::string& name) {
  return serialize(variety_file(generate_variety(P), name));
}

// ---------------------------------------------------------------------------
// Criteria

Outcome c1_precongruence() {
  Rng r(1001);
  Outcome o;
  std::size_t constraints = 0;
  for (int i = 0; i < 200; ++i) {
    auto M = qtest::random_metric(r, 8);
    auto pre = precongruence(M);
    constraints += pre.constraints.size();
    auto q = basic_weight_colimit(pre);
    if (!same_metric_by_labels(q.space, M)) o.fail("space " + std::to_string(i) + " not reconstructed");
    for (std::size_t x = 0; x < M.size(); ++x)
      if (q.space.label(q.unit.table[x]) != M.label(x)) o.fail("unit of space " + std::to_string(i) + " moves labels");
  }
  if (o.ok) o.detail = "200 spaces with <= 8 points, " + std::to_string(constraints) + " constraints";
  return o;
}

Outcome c2_coinserters() {
  Rng r(1002);
  Outcome o;
  for (int i = 0; i < 100; ++i) {
    auto C = qtest::random_poset(r, r.between(1, 6));
    auto p = comparable_pairs_presentation(C);
    auto q = coinserter(p);
    const auto& m = q.map.table;
    if (q.poset.size() != C.size() || p.b.points() != C.points()) {
      o.fail("case " + std::to_string(i) + ": wrong carrier");
      continue;
    }
    std::set<std::size_t> image(m.begin(), m.end());
    if (image.size() != C.size()) o.fail("case " + std::to_string(i) + ": not bijective");
    for (std::size_t x = 0; x < C.size(); ++x)
      for (std::size_t y = 0; y < C.size(); ++y)
        if (C.leq(x, y) != q.poset.leq(m[x], m[y])) o.fail("case " + std::to_string(i) + ": order differs");
  }
  std::size_t reflexive = 0;
  for (int i = 0; i < 20; ++i) {
    auto a = qtest::random_poset(r, r.between(1, 4)), b = qtest::random_poset(r, r.between(1, 4));
    ParallelPair p{a, b, random_monotone(r, a, b), random_monotone(r, a, b)};
    auto q = coinserter(p);
    auto rel = coinserter_preorder(p);
    if (q.poset.size() != preorder_classes(rel, b.size())) o.fail("pair " + std::to_string(i) + ": class count");
    for (std::size_t x = 0; x < b.size(); ++x)
      for (std::size_t y = 0; y < b.size(); ++y)
        if (static_cast<bool>(rel[x * b.size() + y]) != q.poset.leq(q.map.table[x], q.map.table[y]))
          o.fail("pair " + std::to_string(i) + ": quotient order");
    auto rep = check_coinserter_universal(p, q.poset, q.map.table, 4);
    if (!rep.ok) o.fail("pair " + std::to_string(i) + ": " + rep.failure);
    reflexive += is_reflexive(p);
  }
  if (o.ok)
    o.detail = "100 posets <= 6 points; 20 pairs (" + std::to_string(reflexive) +
               " reflexive) universal against all targets <= 4";
  return o;
}

Outcome c3_commutation() {
  Rng r(1003);
  Outcome o;
  for (int i = 0; i < 50; ++i) {
    auto a = random_met_chain(r), b = random_met_chain(r);
    auto rep = check_product_commutation(a, b);
    const std::size_t want = a.stages.back().size() * b.stages.back().size();
    if (!rep.ok) o.fail("met pair " + std::to_string(i) + ": " + rep.failure);
    if (rep.colimit_of_product != want || rep.product_of_colimits != want)
      o.fail("met pair " + std::to_string(i) + ": size " + std::to_string(rep.colimit_of_product));
  }
  for (int i = 0; i < 50; ++i) {
    auto a = random_pos_chain(r), b = random_pos_chain(r);
    auto rep = check_product_commutation(a, b);
    const std::size_t want = a.stages.back().size() * b.stages.back().size();
    if (!rep.ok) o.fail("pos pair " + std::to_string(i) + ": " + rep.failure);
    if (rep.colimit_of_product != want || rep.product_of_colimits != want)
      o.fail("pos pair " + std::to_string(i) + ": size " + std::to_string(rep.colimit_of_product));
  }
  // d_n(0, 1) = 2^-n, declared limit 0: the colimit is a single point
  std::vector<FinMetric> stages;
  std::vector<PointMap> links;
  for (int n = 0; n < 5; ++n) {
    stages.push_back(FinMetric({"0", "1"}, {0, Dist(1, 1LL << n), Dist(1, 1LL << n), 0}));
    if (n) links.push_back({0, 1});
  }
  OmegaChainMet collapsing{stages, links, DeclaredLimits{{0, 0, 0, 0}}};
  if (omega_colimit_met(collapsing).space.size() != 1) o.fail("collapsing chain: colimit is not a point");
  for (int i = 0; i < 10; ++i) {
    auto b = random_met_chain(r);
    auto rep = check_product_commutation(collapsing, b);
    if (!rep.ok || rep.colimit_of_product != b.stages.back().size())
      o.fail("collapsing x chain " + std::to_string(i) + ": " + rep.failure);
    auto rep2 = check_product_commutation(b, collapsing);
    if (!rep2.ok) o.fail("chain x collapsing " + std::to_string(i) + ": " + rep2.failure);
  }
  for (int i = 0; i < 30; ++i) {
    auto p = random_reflexive_pair(r), q = random_reflexive_pair(r);
    auto rep = check_coinserter_products(p, q);
    const std::size_t want = preorder_classes(coinserter_preorder(p), p.b.size()) *
                             preorder_classes(coinserter_preorder(q), q.b.size());
    if (!rep.ok) o.fail("reflexive pair " + std::to_string(i) + ": " + rep.failure);
    if (rep.colimit_of_product != want) o.fail("reflexive pair " + std::to_string(i) + ": size");
  }
  if (o.ok) o.detail = "50 Met + 50 Pos chain pairs, collapsing chain x 10, 30 reflexive coinserter pairs";
  return o;
}

Outcome c4_quant_satisfaction() {
  Rng r(1004);
  Outcome o;
  std::size_t holds = 0, fails = 0;
  for (int i = 0; i < 500; ++i) {
    auto sig = qtest::small_signature(r);
    auto a = qtest::random_quant_algebra(r, sig, 4);
    const auto vs = qtest::labels(r.between(1, 3), "x");
    auto t = qtest::random_term(r, sig, vs, 3), u = qtest::random_term(r, sig, vs, 3);
    Dist eps;
    switch (r.below(3)) {
      case 0: break;
      case 1: eps = Dist(long(r.between(1, 40)), 4); break;
      default: {
        auto g = quant_gap(a, t, u);
        eps = g.is_inf() ? Dist(1) : g;
      }
    }
    QuantEq e{t, u, eps, "e"};
    auto v = satisfies_quant(a, e);
    const bool want = quant_oracle(a, e);
    if (v.ok != want) o.fail("instance " + std::to_string(i) + " disagrees");
    if (!v.ok) {
      std::map<Label, std::size_t> f(v.witness->begin(), v.witness->end());
      Dist d = a.carrier().d(qtest::eval_oracle(a, f, t), qtest::eval_oracle(a, f, u));
      if (d <= eps || !(d == v.achieved)) o.fail("instance " + std::to_string(i) + ": bad witness");
    }
    (want ? holds : fails)++;
  }
  // x . y =_1 y . x on {e, a} with d(e, a) = 1
  Signature mul;
  mul.add("mul", 2);
  QuantAlgebra ac(mul, FinMetric({"e", "a"}, {0, 1, 1, 0}), {{2, {0, 1, 0, 0}}});
  auto xy = Term::app("mul", {Term::var("x"), Term::var("y")}), yx = Term::app("mul", {Term::var("y"), Term::var("x")});
  for (auto [eps, want] : std::vector<std::pair<Dist, bool>>{{Dist(1), true}, {Dist(1, 2), false}, {Dist(0), false}}) {
    QuantEq e{xy, yx, eps, "comm"};
    if (satisfies_quant(ac, e).ok != want || quant_oracle(ac, e) != want)
      o.fail("almost-commutative fixture at eps " + eps.to_string());
  }
  if (o.ok)
    o.detail = "500 instances (" + std::to_string(holds) + " hold, " + std::to_string(fails) +
               " fail), 0 disagreements; almost-commutative fixture ok";
  return o;
}

Outcome c5_extended_terms() {
  Rng r(1005);
  Outcome o;
  std::size_t defined = 0;
  for (int i = 0; i < 300; ++i) {
    auto sig = qtest::small_signature(r);
    auto a = qtest::random_cont_algebra(r, sig, 4);
    auto t = qtest::random_ext_term(r, sig, {"x0", "x1"}, 2);
    std::map<Label, std::size_t> f{{"x0", r.below(a.size())}, {"x1", r.below(a.size())}};
    auto v = interpret_extended(a, Interpretation(f.begin(), f.end()), t);
    auto w = qtest::ext_oracle(a, f, t);
    if (v.is_defined() != w.defined || (w.defined && v.value() != w.value))
      o.fail("instance " + std::to_string(i) + ": " + t.to_string());
    defined += w.defined;
  }
  std::size_t kinds[3] = {0, 0, 0}, nat_defined = 0, nat_undefined = 0, became_defined = 0;
  for (int i = 0; i < 200; ++i) {
    auto sig = qtest::small_signature(r);
    ContAlgebra A, B;
    PointMap h;
    const std::size_t kind = r.below(3);
    ++kinds[kind];
    if (kind == 0) {
      B = qtest::random_cont_algebra(r, sig, 3);
      auto C = qtest::random_cont_algebra(r, sig, 3);
      auto prod = product_algebra(sig, std::vector<ContAlgebra>{B, C});
      A = prod.algebra;
      h = prod.maps[0];
    } else if (kind == 1) {
      B = qtest::random_cont_algebra(r, sig, 4);
      std::vector<std::size_t> gens{r.below(B.size())};
      auto sub = subalgebra_generated(B, gens);
      A = sub.algebra;
      h = sub.maps[0];
    } else {
      A = qtest::random_cont_algebra(r, sig, 4);
      B = qtest::random_cont_algebra(r, sig, 4);
      auto hs = homomorphisms(A, B);
      if (hs.empty()) {
        B = A;
        hs = homomorphisms(A, A);
      }
      h = hs[r.below(hs.size())];
    }
    if (!homomorphism_oracle(A, B, h)) {
      o.fail("homomorphism instance " + std::to_string(i) + " is not a homomorphism");
      continue;
    }
    auto t = qtest::random_ext_term(r, sig, {"x0", "x1"}, 2);
    Interpretation f{{"x0", r.below(A.size())}, {"x1", r.below(A.size())}};
    Interpretation hf{{"x0", h[f["x0"]]}, {"x1", h[f["x1"]]}};
    auto v = interpret_extended(A, f, t);
    auto w = interpret_extended(B, hf, t);
    if (v.is_defined()) {
      ++nat_defined;
      if (!w.is_defined() || w.value() != h[v.value()]) o.fail("naturality fails on " + t.to_string());
    } else {
      ++nat_undefined;
      became_defined += w.is_defined();
    }
  }
  if (nat_defined == 0 || nat_undefined == 0) o.fail("naturality sample lacks defined or undefined cases");
  if (o.ok)
    o.detail = "300 instances (" + std::to_string(defined) + " defined); naturality on 200 homomorphisms (" +
               std::to_string(nat_defined) + " defined, " + std::to_string(nat_undefined) + " undefined, " +
               std::to_string(became_defined) + " defined only after h)";
  return o;
}

// Equations with the tightest bound that every algebra satisfies.
std::vector<QuantEq> tight_equations(Rng& r, const Signature& sig, const std::vector<const QuantAlgebra*>& algs,
                                     std::size_t want) {
  std::vector<QuantEq> out;
  const auto vs = qtest::labels(3, "x");
  for (int tries = 0; tries < 40 && out.size() < want; ++tries) {
    auto t = qtest::random_term(r, sig, vs, 2), u = qtest::random_term(r, sig, vs, 2);
    if (t == u) continue;
    Dist eps;
    for (auto* a : algs) eps = dmax(eps, quant_gap(*a, t, u));
    if (eps.is_inf()) continue;
    out.push_back({t, u, eps, "q" + std::to_string(out.size())});
  }
  return out;
}

std::vector<ContEq> cont_candidates(Rng& r, const Signature& sig) {
  auto x = Term::var("x0"), y = Term::var("x1"), z = Term::var("x2");
  auto mul = [](Term a, Term b) { return Term::app("mul", {std::move(a), std::move(b)}); };
  std::vector<ContEq> c = {
      {mul(x, y), mul(y, x), "comm"},
      {mul(x, mul(y, z)), mul(mul(x, y), z), "assoc"},
      {mul(x, x), x, "idem"},
      {mul(x, y), x, "left"},
      {mul(mul(x, y), y), mul(x, y), "absorb"},
      {ExtTerm::generated(x, mul(Term::var(kHole), x)), mul(x, x), "powers"},
      {ExtTerm::join({x, mul(x, x)}), mul(x, x), "chain"},
      inequation(x, mul(x, x), "infl"),
  };
  if (sig.find("inv")) {
    c.push_back({Term::app("inv", {Term::app("inv", {x})}), x, "invol"});
    c.push_back({ExtTerm::generated(x, Term::app("inv", {Term::var(kHole)})), Term::app("inv", {x}), "inv-chain"});
  }
  if (sig.find("e")) c.push_back({mul(x, Term::app("e")), x, "unit"});
  for (int i = 0; i < 12; ++i) {
    auto l = qtest::random_ext_term(r, sig, {"x0", "x1"}, 1), rr = qtest::random_ext_term(r, sig, {"x0", "x1"}, 1);
    if (!(l == rr)) c.push_back({l, rr, "r" + std::to_string(i)});
  }
  return c;
}

std::vector<ContEq> cont_equations(Rng& r, const Signature& sig, const std::vector<const ContAlgebra*>& algs) {
  std::vector<ContEq> out;
  for (auto& e : cont_candidates(r, sig)) {
    bool all = true;
    for (auto* a : algs) all = all && cont_oracle(*a, e);
    if (all) out.push_back(e);
  }
  return out;
}

template <class Space, class Eq>
bool oracle_member(const Algebra<Space>& a, const std::vector<Eq>& eqs) {
  for (const auto& e : eqs) {
    if constexpr (std::is_same_v<Space, FinMetric>) {
      if (!quant_oracle(a, e)) return false;
    } else {
      if (!cont_oracle(a, e)) return false;
    }
  }
  return true;
}

Outcome c6_hsp() {
  Rng r(1006);
  Outcome o;
  std::size_t quant_eqs = 0, cont_eqs = 0, cont_tries = 0;
  auto check = [&](const auto& algebra, const auto& eqs, const std::string& what) {
    if (!is_member(algebra, eqs)) o.fail(what + ": library rejects the construction");
    if (!oracle_member(algebra, eqs)) o.fail(what + ": oracle rejects the construction");
  };
  for (int i = 0; i < 100; ++i) {
    const std::string tag = " #" + std::to_string(i);
    auto sig = qtest::small_signature(r);
    // products
    {
      auto a = qtest::random_quant_algebra(r, sig, 3), b = qtest::random_quant_algebra(r, sig, 3);
      auto eqs = tight_equations(r, sig, {&a, &b}, 4);
      quant_eqs += eqs.size();
      check(product_algebra(sig, std::vector<QuantAlgebra>{a, b}).algebra, eqs, "quant product" + tag);
    }
    // generated subalgebras
    {
      auto a = qtest::random_quant_algebra(r, sig, 4);
      auto eqs = tight_equations(r, sig, {&a}, 4);
      quant_eqs += eqs.size();
      std::vector<std::size_t> gens{r.below(a.size())};
      if (r.coin()) gens.push_back(r.below(a.size()));
      check(subalgebra_generated(a, gens).algebra, eqs, "quant subalgebra" + tag);
    }
    // homomorphic images
    {
      auto a = qtest::random_quant_algebra(r, sig, 4);
      auto b = qtest::random_quant_algebra(r, sig, 4);
      auto hs = homomorphisms(a, b);
      if (hs.empty()) {
        b = a;
        hs = homomorphisms(a, a);
      }
      auto eqs = tight_equations(r, sig, {&a}, 4);
      quant_eqs += eqs.size();
      check(homomorphic_image(Homo<FinMetric>{a, b, hs[r.below(hs.size())]}).algebra, eqs, "quant image" + tag);
    }
  }
  // continuous suite: equations found by the oracle, at least one nontrivial
  auto members = [&](Rng& rr, const Signature& sig, std::size_t max_points, std::vector<ContEq>& eqs) {
    for (;;) {
      ++cont_tries;
      auto a = qtest::random_cont_algebra(rr, sig, max_points);
      eqs = cont_equations(rr, sig, {&a});
      if (!eqs.empty()) return a;
    }
  };
  for (int i = 0; i < 100; ++i) {
    const std::string tag = " #" + std::to_string(i);
    Signature sig;
    sig.add("mul", 2);
    if (r.coin()) sig.add("inv", 1);
    {
      std::vector<ContEq> eqs;
      auto a = members(r, sig, 3, eqs);
      ContAlgebra b = a;
      for (int t = 0; t < 100; ++t) {
        auto c = qtest::random_cont_algebra(r, sig, 3);
        auto both = cont_equations(r, sig, {&a, &c});
        if (!both.empty()) {
          b = c;
          eqs = both;
          break;
        }
      }
      cont_eqs += eqs.size();
      check(product_algebra(sig, std::vector<ContAlgebra>{a, b}).algebra, eqs, "cont product" + tag);
    }
    {
      std::vector<ContEq> eqs;
      auto a = members(r, sig, 4, eqs);
      cont_eqs += eqs.size();
      std::vector<std::size_t> gens{r.below(a.size())};
      check(subalgebra_generated(a, gens).algebra, eqs, "cont subalgebra" + tag);
    }
    {
      std::vector<ContEq> eqs;
      auto a = members(r, sig, 4, eqs);
      auto b = qtest::random_cont_algebra(r, sig, 4);
      auto hs = homomorphisms(a, b);
      if (hs.empty()) {
        b = a;
        hs = homomorphisms(a, a);
      }
      cont_eqs += eqs.size();
      check(homomorphic_image(Homo<FinPoset>{a, b, hs[r.below(hs.size())]}).algebra, eqs, "cont image" + tag);
    }
  }
  if (o.ok)
    o.detail = "300 QuantEq instances (" + std::to_string(quant_eqs) + " equations), 300 ContEq instances (" +
               std::to_string(cont_eqs) + " equations), all preserved";
  return o;
}

Outcome c7_monad_laws() {
  Rng r(1007);
  Outcome o;
  const std::vector<std::string> fixtures = {"identity", "semilattice", "maybe", "writer"};
  std::size_t by_laws = 0, by_eqgen = 0, mutants = 0;
  for (const auto& kind : fixtures) {
    const auto P = builtin_presentation(kind, 3, Mode::Metric);
    if (kind == "semilattice" && P.size(3) != 7) o.fail("semilattice |T_3| != 7");
    auto rep = check_kleisli_laws(P);
    if (!rep.ok) o.fail(kind + " fails the laws: " + rep.failures.front().describe(P));
    const auto reference = eqgen_text(P, kind);
    for (int i = 0; i < 20; ++i) {
      auto Q = P;
      for (int tries = 0; tries < 1000; ++tries) {
        std::size_t n = r.below(4), m = r.below(4);
        if (Q.size(n) == 0 || Q.size(m) < 2) continue;
        auto& t = Q.ext[n][m][r.below(Q.ext[n][m].size())];
        auto& cell = t[r.below(t.size())];
        cell = (cell + 1 + r.below(Q.size(m) - 1)) % Q.size(m);
        break;
      }
      if (Q == P) {
        o.fail(kind + ": no mutation possible");
        continue;
      }
      ++mutants;
      if (!check_kleisli_laws(Q, 1).ok) {
        ++by_laws;
      } else if (eqgen_text(Q, kind) != reference) {
        ++by_eqgen;
      } else {
        o.fail(kind + " mutant " + std::to_string(i) + " survives");
      }
    }
  }
  for (auto [kind, mode] : std::vector<std::pair<std::string, std::string>>{
           {"semilattice", "met"}, {"semilattice", "cpo"}, {"writer", "met"}, {"lift", "cpo"}}) {
    const auto golden = slurp(std::string(QAW_GOLDEN_DIR) + "/eqgen_" + kind + "_" + mode + ".qaw");
    if (golden.empty()) o.fail("missing golden file for " + kind + " " + mode);
    if (eqgen_text(builtin_presentation(kind, 2, parse_mode(mode)), kind) != golden)
      o.fail("generated equations differ from golden " + kind + " " + mode);
  }
  if (o.ok)
    o.detail = "4 fixtures lawful at N = 3; " + std::to_string(mutants) + " mutants, " + std::to_string(by_laws) +
               " killed by laws, " + std::to_string(by_eqgen) + " by equation generation; 4 golden files match";
  return o;
}

Outcome c8_correspondence() {
  Outcome o;
  std::ostringstream summary;
  for (auto [kind, N] : std::vector<std::pair<std::string, std::size_t>>{{"semilattice", 3}, {"writer", 4}}) {
    const std::size_t j = 2;
    const auto P = builtin_presentation(kind, N, Mode::Metric);
    const auto v = generate_variety(P);
    // EM algebras on V_2: the library list against the oracle's
    std::set<PointMap> oracle_em;
    for (std::size_t code = 0; code < qtest::power(j, P.size(j)); ++code) {
      auto alpha = qtest::decode(code, j, P.size(j));
      if (em_oracle(P, j, alpha)) oracle_em.insert(alpha);
    }
    std::set<PointMap> lib_em;
    for (const auto& a : em_algebras(P, j)) lib_em.insert(a.alpha);
    if (lib_em != oracle_em) o.fail(kind + ": EM algebras differ from the oracle");
    // (i)
    for (const auto& alpha : oracle_em) {
      auto A = em_to_variety_algebra<FinMetric>(P, EMAlgebraDesc{j, alpha});
      if (!satisfies_all(A, v) || !oracle_member(A, v.quant)) o.fail(kind + ": EM algebra outside the variety");
    }
    // (ii)
    auto members = variety_algebras(P, v, discrete_arity<FinMetric>(j));
    std::set<PointMap> hit;
    for (const auto& B : members) {
      if (!oracle_member(B, v.quant)) o.fail(kind + ": enumerated algebra is not a member");
      auto em = variety_to_em(P, B);
      if (!oracle_em.count(em.alpha)) o.fail(kind + ": variety algebra gives no EM algebra");
      if (!(em_to_variety_algebra<FinMetric>(P, em) == B)) o.fail(kind + ": round trip changes the algebra");
      if (!hit.insert(em.alpha).second) o.fail(kind + ": two variety algebras share an EM algebra");
    }
    if (hit.size() != oracle_em.size()) o.fail(kind + ": correspondence is not onto");
    // (iii)
    std::vector<QuantAlgebra> targets;
    for (std::size_t k = 1; k <= 3; ++k) {
      auto found = variety_algebras(P, v, discrete_arity<FinMetric>(k));
      targets.insert(targets.end(), found.begin(), found.end());
    }
    auto rep = check_freeness(P, 2, v, targets);
    if (!rep.ok) o.fail(kind + ": freeness fails: " + (rep.failure ? rep.failure->detail : ""));
    for (std::size_t t = 0; t < targets.size(); ++t)
      if (!freeness_oracle(P, 2, targets[t])) o.fail(kind + ": oracle finds T_2 not free against target " + std::to_string(t));
    summary << kind << " N=" << N << ": " << oracle_em.size() << " EM = " << members.size() << " variety algebras on V_2, "
            << targets.size() << " freeness targets; ";
  }
  if (o.ok) o.detail = summary.str();
  return o;
}

Outcome c9_kan() {
  Outcome o;
  for (auto [kind, N] : std::vector<std::pair<std::string, std::size_t>>{
           {"identity", 3}, {"semilattice", 3}, {"maybe", 3}, {"writer", 4}}) {
    const auto P = builtin_presentation(kind, N, Mode::Metric);
    for (std::size_t k = 0; k <= N; ++k) {
      auto q = kan_evaluate(P, discrete_space(qtest::labels(k, "m")));
      if (!(q.space == P.metric[k])) o.fail(kind + ": discrete space of size " + std::to_string(k));
    }
  }
  const auto W = builtin_presentation("writer", 4, Mode::Metric);
  auto q = kan_evaluate(W, FinMetric({"p", "q"}, {0, Dist(1, 2), Dist(1, 2), 0}));
  // hand-derived: flags at distance 1, equal flags across p/q at 1/2
  std::vector<Label> pts;
  for (int x = 0; x < 2; ++x)
    for (int fl = 0; fl < 2; ++fl) pts.push_back("(x" + std::to_string(x) + "," + std::to_string(fl) + ")");
  std::vector<Dist> w(16, Dist::inf());
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      if (a / 2 == b / 2) w[a * 4 + b] = Dist(1);
      else if (a % 2 == b % 2) w[a * 4 + b] = Dist(1, 2);
    }
  FinMetric expected(pts, qtest::shortest_paths(4, w));
  if (!same_metric_by_labels(q.space, expected)) o.fail("writer on the 1/2 space differs from the hand-derived space");
  if (o.ok)
    o.detail = "discrete spaces give T_k exactly for 4 fixtures; writer on {p,q} at 1/2 matches (d((x0,0),(x1,1)) = " +
               q.space.d(0, 3).to_string() + ")";
  return o;
}

Outcome c10_roundtrip() {
  Outcome o;
  Rng r(1010);
  std::map<std::string, std::size_t> totals;
  for (int i = 0; i < 1000; ++i) {
    auto f = qtest::WorkbenchGen(r).file();
    for (const auto& [k, n] : qtest::declaration_counts(f)) totals[k] += n;
    auto text = serialize(f);
    if (!(parse_workbench(text) == f)) {
      o.fail("file " + std::to_string(i) + " does not round-trip");
      continue;
    }
    if (i % 4 == 0 && !(workbench_from_json(Json::parse(to_json(f).dump())) == f))
      o.fail("file " + std::to_string(i) + " does not round-trip through JSON");
  }
  std::size_t least = SIZE_MAX;
  for (const auto& [k, n] : totals) least = std::min(least, n);
  if (least < 1000) o.fail("fewer than 1000 declarations of some kind");

  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "qaw_acceptance";
  fs::create_directories(dir);
  const std::string path = (dir / "reports.qaw").string();
  std::ofstream(path) << "space M { points e a; d e a = 1; }\n"
                         "signature S { op mul/2; }\n"
                         "algebra A : S over space M { mul = [e, a, e, e]; }\n"
                         "eq C : mul(x0, x1) == mul(x1, x0) within 1;\n"
                         "eq C0 : mul(x0, x1) == mul(x1, x0);\n"
                         "poset P { points a b c; leq a b; }\n"
                         "pair R : P => P { f0 = [a, b, c]; f1 = [b, b, c]; }\n";
  const std::vector<std::vector<std::string>> commands = {
      {"satisfies", "-f", path, "--algebra", "A", "--eq", "C"},
      {"satisfies", "-f", path, "--algebra", "A", "--eq", "C0"},
      {"colimit", "precongruence", "-f", path, "--space", "M"},
      {"colimit", "coinserter", "-f", path, "--pair", "R"},
      {"hsp", "close", "-f", path, "--algebra", "A", "--equations", "C"},
      {"monad", "eqgen", "--presentation", "semilattice"},
      {"monad", "freeness", "--presentation", "semilattice", "--max-arity", "3"},
      {"kan", "eval", "-f", path, "--space", "M", "--presentation", "writer", "--max-arity", "4"},
      {"fmt", "-f", path, "--to", "json"},
  };
  for (auto c : commands) {
    auto a = run_cli(c), b = run_cli(c);
    auto strip = [](const std::string& s) {
      if (s.empty() || s[0] != '{') return s;
      auto j = Json::parse(s);
      j.erase("timing_ms");
      return j.dump(2);
    };
    if (a.exit_code != b.exit_code || strip(a.out) != strip(b.out)) o.fail("report differs: " + c[0]);
    c.push_back("--no-timing");
    if (run_cli(c).out != run_cli(c).out) o.fail("report not byte-stable: " + c[0]);
  }
  if (o.ok) {
    std::ostringstream s;
    s << "1000 files, >= " << least << " declarations of each of " << totals.size()
      << " kinds round-trip; " << commands.size() << " reports byte-stable";
    o.detail = s.str();
  }
  return o;
}

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "precongruence reconstruction", 2, c1_precongruence},
      {2, "coinserter identities", 30, c2_coinserters},
      {3, "commutation with finite products", 60, c3_commutation},
      {4, "quantitative satisfaction semantics", 10, c4_quant_satisfaction},
      {5, "extended-term semantics", 20, c5_extended_terms},
      {6, "HSP closure", 30, c6_hsp},
      {7, "monad laws and equation generation", 30, c7_monad_laws},
      {8, "monad-variety correspondence", 120, c8_correspondence},
      {9, "Kan evaluation consistency", 5, c9_kan},
      {10, "DSL round-trip and stable reports", 10, c10_roundtrip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && s >= c.limit_s) o.fail("took longer than the limit");
    failed += !o.ok;
    std::printf("%s  [%2d] %s: %s (%.2f s, limit %.0f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                o.detail.c_str(), s, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
