#include "qaw/bridge.hpp"

#include "qaw/error.hpp"

#include <algorithm>
#include <set>

namespace qaw {

std::string_view mode_name(Mode m) { return m == Mode::Metric ? "met" : "cpo"; }

Mode parse_mode(std::string_view s) {
  if (s == "met" || s == "metric") return Mode::Metric;
  if (s == "cpo" || s == "poset") return Mode::Poset;
  throw InputError("unknown mode '" + std::string(s) + "' (expected met or cpo)");
}

const Carrier& MonadPresentation::carrier(std::size_t n) const {
  return mode == Mode::Metric ? metric.at(n).carrier() : order.at(n).carrier();
}

void MonadPresentation::validate() const {
  const std::size_t count = max_arity + 1;
  if ((mode == Mode::Metric ? metric.size() : order.size()) != count)
    throw InputError("presentation needs carriers T_0 .. T_" + std::to_string(max_arity));
  if (unit.size() != count) throw InputError("presentation needs a unit table for every arity");
  for (std::size_t n = 0; n < count; ++n) {
    if (unit[n].size() != n) throw InputError("unit table " + std::to_string(n) + " has the wrong size");
    for (auto v : unit[n])
      if (v >= size(n)) throw InputError("unit table " + std::to_string(n) + " leaves T_" + std::to_string(n));
  }
  if (ext.size() != count) throw InputError("presentation needs ext tables for every arity");
  for (std::size_t n = 0; n < count; ++n) {
    if (ext[n].size() != count) throw InputError("presentation needs ext tables for every arity");
    for (std::size_t m = 0; m < count; ++m) {
      if (ext[n][m].size() != tuple_count(size(m), n))
        throw InputError("ext tables from T_" + std::to_string(n) + " to T_" + std::to_string(m) +
                         " are incomplete");
      for (const auto& t : ext[n][m]) {
        if (t.size() != size(n)) throw InputError("ext table has the wrong size");
        for (auto v : t)
          if (v >= size(m)) throw InputError("ext table leaves T_" + std::to_string(m));
      }
    }
  }
}

MonadPresentation presentation_from_rule(std::string name, Mode mode, std::vector<FinMetric> metric,
                                         std::vector<FinPoset> order, std::vector<PointMap> unit,
                                         const ExtRule& rule, std::uint64_t max_cells) {
  MonadPresentation P;
  P.name = std::move(name);
  P.mode = mode;
  P.metric = std::move(metric);
  P.order = std::move(order);
  P.unit = std::move(unit);
  const std::size_t count = mode == Mode::Metric ? P.metric.size() : P.order.size();
  if (count == 0) throw InputError("presentation needs at least T_0");
  P.max_arity = count - 1;
  std::uint64_t cells = 0;
  P.ext.assign(count, std::vector<std::vector<PointMap>>(count));
  for (std::size_t n = 0; n < count; ++n)
    for (std::size_t m = 0; m < count; ++m) {
      const auto maps = bounded_power(P.size(m), n, max_cells, "ext tables");
      cells += maps * P.size(n);
      if (cells > max_cells) throw BoundExceeded("ext tables", cells, max_cells);
      auto& tables = P.ext[n][m];
      tables.reserve(maps);
      std::vector<std::size_t> k(n, 0);
      for (std::size_t code = 0; code < maps; ++code) {
        decode_tuple(code, P.size(m), k);
        PointMap t(P.size(n));
        for (std::size_t tau = 0; tau < t.size(); ++tau) t[tau] = rule(n, m, k, tau);
        tables.push_back(std::move(t));
      }
    }
  P.validate();
  return P;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& builtin_kinds() {
  static const std::vector<std::string> kinds = {"identity", "semilattice", "maybe", "lift", "writer"};
  return kinds;
}

std::string_view builtin_ext_rule(std::string_view kind) {
  if (kind == "identity") return "identity";
  if (kind == "semilattice") return "union";
  if (kind == "maybe") return "maybe";
  if (kind == "lift") return "lift";
  if (kind == "writer") return "writer-max";
  throw InputError("unknown builtin presentation '" + std::string(kind) + "'");
}

namespace {

Label subset_label(unsigned mask, std::size_t n) {
  Label out = "{";
  bool first = true;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1u) {
      if (!first) out += ',';
      out += "x" + std::to_string(i);
      first = false;
    }
  return out + "}";
}

}  // namespace

MonadPresentation builtin_presentation(std::string_view kind, std::size_t N, Mode mode) {
  std::vector<std::vector<Label>> labels(N + 1);
  std::vector<PointMap> unit(N + 1);
  ExtRule rule;
  std::vector<FinMetric> metric;
  std::vector<FinPoset> order;

  auto discrete = [&] {
    for (std::size_t n = 0; n <= N; ++n) {
      if (mode == Mode::Metric) metric.push_back(discrete_space(labels[n]));
      else order.push_back(discrete_poset(labels[n]));
    }
  };

  if (kind == "identity") {
    for (std::size_t n = 0; n <= N; ++n) {
      labels[n] = standard_vars(n);
      unit[n] = identity_map(n);
    }
    rule = [](std::size_t, std::size_t, std::span<const std::size_t> k, std::size_t tau) { return k[tau]; };
    discrete();
  } else if (kind == "semilattice") {
    if (N > 6) throw BoundExceeded("semilattice arity", N, 6);
    for (std::size_t n = 0; n <= N; ++n) {
      for (unsigned mask = 1; mask < (1u << n); ++mask) labels[n].push_back(subset_label(mask, n));
      for (std::size_t i = 0; i < n; ++i) unit[n].push_back((std::size_t{1} << i) - 1);
    }
    rule = [](std::size_t n, std::size_t, std::span<const std::size_t> k, std::size_t tau) {
      std::size_t mask = tau + 1, out = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1u) out |= k[i] + 1;
      return out - 1;
    };
    discrete();
  } else if (kind == "maybe" || kind == "lift") {
    const bool lift = kind == "lift";
    if (lift && mode != Mode::Poset) throw ModeMismatch("the lift presentation is a cpo presentation");
    for (std::size_t n = 0; n <= N; ++n) {
      labels[n] = standard_vars(n);
      labels[n].push_back(lift ? "bot" : "nothing");
      unit[n] = identity_map(n);
    }
    rule = [](std::size_t n, std::size_t m, std::span<const std::size_t> k, std::size_t tau) {
      return tau < n ? k[tau] : m;
    };
    if (lift) {
      for (std::size_t n = 0; n <= N; ++n) {
        const std::size_t s = n + 1;
        std::vector<char> leq(s * s, 0);
        for (std::size_t i = 0; i < s; ++i) {
          leq[i * s + i] = 1;
          leq[n * s + i] = 1;
        }
        order.push_back(FinPoset(labels[n], std::move(leq)));
      }
    } else {
      discrete();
    }
  } else if (kind == "writer") {
    if (mode != Mode::Metric) throw ModeMismatch("the writer presentation is a metric presentation");
    for (std::size_t n = 0; n <= N; ++n) {
      const std::size_t s = 2 * n;
      std::vector<Dist> table(s * s, Dist::inf());
      for (std::size_t i = 0; i < n; ++i) {
        labels[n].push_back("(x" + std::to_string(i) + ",0)");
        labels[n].push_back("(x" + std::to_string(i) + ",1)");
        unit[n].push_back(2 * i);
        table[(2 * i) * s + 2 * i] = Dist::zero();
        table[(2 * i + 1) * s + 2 * i + 1] = Dist::zero();
        table[(2 * i) * s + 2 * i + 1] = Dist(1);
        table[(2 * i + 1) * s + 2 * i] = Dist(1);
      }
      metric.push_back(FinMetric(labels[n], std::move(table)));
    }
    rule = [](std::size_t, std::size_t, std::span<const std::size_t> k, std::size_t tau) {
      std::size_t target = k[tau / 2];
      return (target & ~std::size_t{1}) | ((tau | target) & 1u);
    };
  } else {
    throw InputError("unknown builtin presentation '" + std::string(kind) + "'");
  }
  return presentation_from_rule(std::string(kind), mode, std::move(metric), std::move(order), std::move(unit), rule);
}

// ---------------------------------------------------------------------------

std::string_view law_name(Law l) {
  switch (l) {
    case Law::Structure: return "structure";
    case Law::Enrichment: return "enrichment";
    case Law::ExtUnit: return "ext-unit";
    case Law::UnitExt: return "unit-ext";
    case Law::Composition: return "composition";
  }
  return {};
}

namespace {

std::string tuple_text(const MonadPresentation& P, std::size_t m, const PointMap& k) {
  std::vector<Label> parts;
  for (auto v : k) parts.push_back(P.carrier(m).label(v));
  return "[" + [&] {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    return s;
  }() + "]";
}

bool structure_map(const MonadPresentation& P, std::size_t n, std::size_t m, const PointMap& t,
                   std::size_t* bad = nullptr) {
  const std::size_t s = t.size();
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      bool ok = P.mode == Mode::Metric ? P.metric[m].d(t[i], t[j]) <= P.metric[n].d(i, j)
                                       : (!P.order[n].leq(i, j) || P.order[m].leq(t[i], t[j]));
      if (!ok) {
        if (bad) *bad = i;
        return false;
      }
    }
  return true;
}

}  // namespace

std::string LawFailure::describe(const MonadPresentation& P) const {
  std::string out(law_name(law));
  switch (law) {
    case Law::Structure:
      out += ": ext(" + tuple_text(P, m, k) + ") : T_" + std::to_string(n) + " -> T_" + std::to_string(m) +
             " is not a structure map at " + P.carrier(n).label(point);
      break;
    case Law::Enrichment:
      out += ": ext(" + tuple_text(P, m, k) + ") and ext(" + tuple_text(P, m, l) + ") are too far apart at " +
             P.carrier(n).label(point);
      break;
    case Law::ExtUnit:
      out += ": ext(eta_" + std::to_string(n) + ") is not the identity at " + P.carrier(n).label(point);
      break;
    case Law::UnitExt:
      out += ": ext(" + tuple_text(P, m, k) + ") . eta_" + std::to_string(n) + " differs from k at x" +
             std::to_string(point);
      break;
    case Law::Composition:
      out += ": ext(ext(k) . l) != ext(k) . ext(l) for k = " + tuple_text(P, m, k) + ", l = " +
             tuple_text(P, n, l) + " at " + P.carrier(p).label(point);
      break;
  }
  return out;
}

LawReport check_kleisli_laws(const MonadPresentation& P, std::size_t max_failures, std::uint64_t max_work) {
  P.validate();
  const std::size_t N = P.max_arity;
  std::uint64_t work = 0;
  auto add = [&](std::uint64_t w) {
    work += w;
    if (work > max_work) throw BoundExceeded("law check", work, max_work);
  };
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t m = 0; m <= N; ++m) {
      const auto maps = P.ext[n][m].size();
      add(maps * maps);
      for (std::size_t p = 0; p <= N; ++p) add(P.ext[p][n].size() * maps);
    }

  LawReport out;
  auto fail = [&](LawFailure f) {
    out.ok = false;
    ++out.failure_count;
    if (out.failures.size() < max_failures) out.failures.push_back(std::move(f));
  };

  for (std::size_t n = 0; n <= N; ++n) {
    {
      const auto& t = P.ext_of(n, n, P.unit[n]);
      for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] != i) {
          fail({Law::ExtUnit, n, n, 0, P.unit[n], {}, i});
          break;
        }
    }
    for (std::size_t m = 0; m <= N; ++m) {
      const auto& tables = P.ext[n][m];
      PointMap k(n);
      for (std::size_t code = 0; code < tables.size(); ++code) {
        decode_tuple(code, P.size(m), k);
        const auto& t = tables[code];
        std::size_t bad = 0;
        if (!structure_map(P, n, m, t, &bad)) fail({Law::Structure, n, m, 0, k, {}, bad});
        for (std::size_t i = 0; i < n; ++i)
          if (t[P.unit[n][i]] != k[i]) {
            fail({Law::UnitExt, n, m, 0, k, {}, i});
            break;
          }
      }
      // k |-> ext(k) is a structure map for the pointwise metric / order
      PointMap k2(n);
      for (std::size_t a = 0; a < tables.size(); ++a) {
        decode_tuple(a, P.size(m), k);
        for (std::size_t b = 0; b < tables.size(); ++b) {
          if (a == b) continue;
          decode_tuple(b, P.size(m), k2);
          const auto& ta = tables[a];
          const auto& tb = tables[b];
          if (P.mode == Mode::Metric) {
            if (b < a) continue;
            Dist bound;
            for (std::size_t i = 0; i < n; ++i) bound = dmax(bound, P.metric[m].d(k[i], k2[i]));
            if (bound.is_inf()) continue;
            for (std::size_t tau = 0; tau < ta.size(); ++tau)
              if (!(P.metric[m].d(ta[tau], tb[tau]) <= bound)) {
                fail({Law::Enrichment, n, m, 0, k, k2, tau});
                break;
              }
          } else {
            bool below = true;
            for (std::size_t i = 0; i < n && below; ++i) below = P.order[m].leq(k[i], k2[i]);
            if (!below) continue;
            for (std::size_t tau = 0; tau < ta.size(); ++tau)
              if (!P.order[m].leq(ta[tau], tb[tau])) {
                fail({Law::Enrichment, n, m, 0, k, k2, tau});
                break;
              }
          }
        }
      }
      for (std::size_t p = 0; p <= N; ++p) {
        const auto& ltables = P.ext[p][n];
        PointMap l(p), kl(p);
        for (std::size_t lc = 0; lc < ltables.size(); ++lc) {
          decode_tuple(lc, P.size(n), l);
          const auto& tl = ltables[lc];
          for (std::size_t kc = 0; kc < tables.size(); ++kc) {
            const auto& tk = tables[kc];
            for (std::size_t i = 0; i < p; ++i) kl[i] = tk[l[i]];
            const auto& lhs = P.ext_of(p, m, kl);
            for (std::size_t tau = 0; tau < lhs.size(); ++tau)
              if (lhs[tau] != tk[tl[tau]]) {
                decode_tuple(kc, P.size(m), k);
                fail({Law::Composition, n, m, p, k, l, tau});
                break;
              }
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string symbol_name(const MonadPresentation& P, std::size_t n, std::size_t sigma) {
  return P.carrier(n).label(sigma) + "@" + std::to_string(n);
}

Signature generated_signature(const MonadPresentation& P) {
  Signature sig;
  for (std::size_t n = 0; n <= P.max_arity; ++n)
    for (std::size_t s = 0; s < P.size(n); ++s) sig.add(symbol_name(P, n, s), n);
  return sig;
}

Term symbol_term(const MonadPresentation& P, std::size_t n, std::size_t sigma) {
  std::vector<Term> args;
  for (const auto& x : standard_vars(n)) args.push_back(Term::var(x));
  return Term::app(symbol_name(P, n, sigma), std::move(args));
}

namespace {

// Clauses (2) and (3), shared by both modes.
template <class Emit>
void ext_and_unit_equations(const MonadPresentation& P, Emit&& emit) {
  const std::size_t N = P.max_arity;
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t m = 0; m <= N; ++m) {
      PointMap k(n);
      for (std::size_t code = 0; code < P.ext[n][m].size(); ++code) {
        decode_tuple(code, P.size(m), k);
        std::vector<Term> inner;
        for (auto v : k) inner.push_back(symbol_term(P, m, v));
        for (std::size_t s = 0; s < P.size(n); ++s)
          emit(symbol_term(P, m, P.ext[n][m][code][s]), Term::app(symbol_name(P, n, s), inner), "c2");
      }
    }
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t i = 0; i < n; ++i)
      emit(symbol_term(P, n, P.unit[n][i]), Term::var("x" + std::to_string(i)), "c3");
}

}  // namespace

GeneratedVariety generate_variety_met(const MonadPresentation& P) {
  if (P.mode != Mode::Metric) throw ModeMismatch("generate_variety_met needs a met presentation");
  GeneratedVariety v;
  v.mode = Mode::Metric;
  v.sig = generated_signature(P);
  for (std::size_t n = 0; n <= P.max_arity; ++n)
    for (std::size_t a = 0; a < P.size(n); ++a)
      for (std::size_t b = a + 1; b < P.size(n); ++b) {
        const Dist& d = P.metric[n].d(a, b);
        if (d.is_finite()) v.quant.push_back({symbol_term(P, n, a), symbol_term(P, n, b), d, "c1"});
      }
  ext_and_unit_equations(P, [&](Term l, Term r, const char* name) {
    v.quant.push_back({std::move(l), std::move(r), Dist::zero(), name});
  });
  return v;
}

GeneratedVariety generate_variety_cpo(const MonadPresentation& P) {
  if (P.mode != Mode::Poset) throw ModeMismatch("generate_variety_cpo needs a cpo presentation");
  GeneratedVariety v;
  v.mode = Mode::Poset;
  v.sig = generated_signature(P);
  for (std::size_t n = 0; n <= P.max_arity; ++n)
    for (std::size_t hi = 0; hi < P.size(n); ++hi)
      for (std::size_t lo = 0; lo < P.size(n); ++lo)
        if (P.order[n].leq(lo, hi)) {
          auto top = symbol_term(P, n, hi);
          v.cont.push_back({top, ExtTerm::join({symbol_term(P, n, lo), top}), "c1"});
        }
  ext_and_unit_equations(P, [&](Term l, Term r, const char* name) {
    v.cont.push_back({std::move(l), std::move(r), name});
  });
  return v;
}

GeneratedVariety generate_variety(const MonadPresentation& P) {
  return P.mode == Mode::Metric ? generate_variety_met(P) : generate_variety_cpo(P);
}

// ---------------------------------------------------------------------------

namespace {

template <class Space>
constexpr Mode mode_of() {
  if constexpr (std::is_same_v<Space, FinMetric>) return Mode::Metric;
  else return Mode::Poset;
}

template <class Space>
void require_mode(const MonadPresentation& P) {
  if (P.mode != mode_of<Space>())
    throw ModeMismatch("presentation '" + P.name + "' is a " + std::string(mode_name(P.mode)) + " presentation");
}

template <class Space>
const Space& presentation_carrier(const MonadPresentation& P, std::size_t n) {
  if constexpr (std::is_same_v<Space, FinMetric>) return P.metric.at(n);
  else return P.order.at(n);
}

bool structure_map(const FinMetric& dom, const FinMetric& cod, const PointMap& f) {
  return is_nonexpanding(dom, cod, f);
}
bool structure_map(const FinPoset& dom, const FinPoset& cod, const PointMap& f) { return is_monotone(dom, cod, f); }

std::vector<std::size_t> symbol_offsets(const MonadPresentation& P) {
  std::vector<std::size_t> off(P.max_arity + 2, 0);
  for (std::size_t n = 0; n <= P.max_arity; ++n) off[n + 1] = off[n] + P.size(n);
  return off;
}

// A generated variety with its base equations compiled once.
template <class Space>
class CompiledVariety {
 public:
  explicit CompiledVariety(const GeneratedVariety& v) {
    if (v.mode != mode_of<Space>()) throw ModeMismatch("variety and algebra modes differ");
    if constexpr (std::is_same_v<Space, FinMetric>) {
      for (const auto& e : v.quant) add(v.sig, e.left, e.right, e.eps);
    } else {
      for (const auto& e : v.cont) {
        if (e.left.is_base() && e.right.is_base()) add(v.sig, e.left.base(), e.right.base(), Dist::zero());
        else slow_.push_back(e);
      }
    }
    std::stable_sort(fast_.begin(), fast_.end(), [](const Entry& a, const Entry& b) { return a.arity < b.arity; });
  }

  bool holds(const Algebra<Space>& a) const {
    const std::size_t n = a.size();
    std::vector<std::size_t> values;
    for (const auto& e : fast_) {
      values.assign(e.arity, 0);
      if (n == 0 && e.arity > 0) continue;
      do {
        auto l = e.left.eval(a, values);
        auto r = e.right.eval(a, values);
        if (l == r) continue;
        if constexpr (std::is_same_v<Space, FinMetric>) {
          if (a.carrier().d(l, r) <= e.eps) continue;
        }
        return false;
      } while (next_tuple(values, n));
    }
    if constexpr (std::is_same_v<Space, FinPoset>) {
      for (const auto& e : slow_)
        if (!satisfies_cont(a, e).ok) return false;
    }
    return true;
  }

 private:
  struct Entry {
    CompiledTerm left, right;
    std::size_t arity;
    Dist eps;
  };

  void add(const Signature& sig, const Term& l, const Term& r, const Dist& eps) {
    auto v = vars(l);
    v.merge(vars(r));
    std::vector<Label> names(v.begin(), v.end());
    fast_.push_back({CompiledTerm(sig, l, names), CompiledTerm(sig, r, names), names.size(), eps});
  }

  std::vector<Entry> fast_;
  std::vector<ContEq> slow_;
};

}  // namespace

EMCheck check_em_algebra(const MonadPresentation& P, const EMAlgebraDesc& a) {
  const std::size_t j = a.j;
  if (j > P.max_arity) throw ArityBudgetExceeded("V_" + std::to_string(j) + " is beyond the presentation's arities");
  const std::size_t tj = P.size(j);
  if (a.alpha.size() != tj) throw InputError("alpha must be total on T_" + std::to_string(j));
  for (auto v : a.alpha)
    if (v >= j) throw InputError("alpha leaves V_" + std::to_string(j));
  if (tj > P.max_arity)
    throw ArityBudgetExceeded("|T_" + std::to_string(j) + "| = " + std::to_string(tj) + " exceeds max arity " +
                              std::to_string(P.max_arity));
  for (std::size_t x = 0; x < tj; ++x)
    for (std::size_t y = 0; y < tj; ++y) {
      bool related = P.mode == Mode::Metric ? P.metric[j].d(x, y).is_finite() : P.order[j].leq(x, y);
      if (related && a.alpha[x] != a.alpha[y]) return {false, "structure", x};
    }
  for (std::size_t i = 0; i < j; ++i)
    if (a.alpha[P.unit[j][i]] != i) return {false, "unit", i};
  const std::size_t r = tj;
  const PointMap iota = identity_map(r);
  PointMap flat(r);
  for (std::size_t t = 0; t < r; ++t) flat[t] = P.unit[j][a.alpha[t]];
  const auto& mu = P.ext_of(r, j, iota);
  const auto& ta = P.ext_of(r, j, flat);
  for (std::size_t tau = 0; tau < P.size(r); ++tau)
    if (a.alpha[mu[tau]] != a.alpha[ta[tau]]) return {false, "multiplication", tau};
  return {};
}

std::vector<EMAlgebraDesc> em_algebras(const MonadPresentation& P, std::size_t j, std::uint64_t max_maps) {
  std::vector<EMAlgebraDesc> out;
  for_each_function(P.size(j), j, max_maps, [&](const PointMap& alpha) {
    EMAlgebraDesc a{j, alpha};
    if (check_em_algebra(P, a).ok) out.push_back(std::move(a));
    return true;
  });
  return out;
}

template <>
FinMetric discrete_arity<FinMetric>(std::size_t j) {
  return discrete_space(standard_vars(j));
}
template <>
FinPoset discrete_arity<FinPoset>(std::size_t j) {
  return discrete_poset(standard_vars(j));
}

template <class Space>
Algebra<Space> em_to_variety_algebra(const MonadPresentation& P, const EMAlgebraDesc& a) {
  require_mode<Space>(P);
  auto check = check_em_algebra(P, a);
  if (!check.ok) throw NotAnEMAlgebra("alpha fails the " + check.law + " law at point " + std::to_string(check.point));
  const std::size_t j = a.j;
  std::vector<OpTable> ops;
  for (std::size_t n = 0; n <= P.max_arity; ++n) {
    std::vector<std::size_t> args(n, 0);
    PointMap lifted(n);
    const std::size_t cells = tuple_count(j, n);
    for (std::size_t s = 0; s < P.size(n); ++s) {
      OpTable t{n, std::vector<std::size_t>(cells)};
      for (std::size_t c = 0; c < cells; ++c) {
        decode_tuple(c, j, args);
        for (std::size_t i = 0; i < n; ++i) lifted[i] = P.unit[j][args[i]];
        t.values[c] = a.alpha[P.ext_of(n, j, lifted)[s]];
      }
      ops.push_back(std::move(t));
    }
  }
  return Algebra<Space>(generated_signature(P), discrete_arity<Space>(j), std::move(ops));
}

template <class Space>
EMAlgebraDesc variety_to_em(const MonadPresentation& P, const Algebra<Space>& a) {
  require_mode<Space>(P);
  const std::size_t j = a.size();
  if (j > P.max_arity) throw ArityBudgetExceeded("carrier larger than the presentation's arities");
  const auto off = symbol_offsets(P);
  const PointMap xs = identity_map(j);
  EMAlgebraDesc out{j, PointMap(P.size(j))};
  for (std::size_t t = 0; t < P.size(j); ++t) out.alpha[t] = a.apply(off[j] + t, xs);
  return out;
}

template <class Space>
bool satisfies_all(const Algebra<Space>& a, const GeneratedVariety& v) {
  return CompiledVariety<Space>(v).holds(a);
}

template <class Space>
std::vector<Algebra<Space>> variety_algebras(const MonadPresentation& P, const GeneratedVariety& v,
                                             const Space& carrier, std::uint64_t max_candidates) {
  require_mode<Space>(P);
  const std::size_t N = P.max_arity;
  const std::size_t c = carrier.size();
  const auto off = symbol_offsets(P);
  const std::size_t total = off[N + 1];

  struct Step {
    std::size_t target, m, source, n;
    PointMap k;  // T_m points
  };
  std::vector<char> known(total, 0);
  std::vector<std::pair<std::size_t, std::size_t>> projections;  // symbol, variable
  std::vector<std::size_t> basis;
  std::vector<Step> steps;

  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t i = 0; i < n; ++i) {
      auto s = off[n] + P.unit[n][i];
      if (!known[s]) {
        known[s] = 1;
        projections.push_back({s, i});
      }
    }
  auto close = [&] {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t n = 0; n <= N; ++n)
        for (std::size_t s = 0; s < P.size(n); ++s) {
          if (!known[off[n] + s]) continue;
          for (std::size_t m = 0; m <= N; ++m) {
            PointMap k(n);
            for (std::size_t code = 0; code < P.ext[n][m].size(); ++code) {
              decode_tuple(code, P.size(m), k);
              bool ready = true;
              for (auto x : k) ready = ready && known[off[m] + x];
              if (!ready) continue;
              auto t = off[m] + P.ext[n][m][code][s];
              if (known[t]) continue;
              known[t] = 1;
              steps.push_back({t, m, off[n] + s, n, k});
              changed = true;
            }
          }
        }
    }
  };
  close();
  for (std::size_t n = 0; n <= N; ++n)
    for (std::size_t s = 0; s < P.size(n); ++s)
      if (!known[off[n] + s]) {
        known[off[n] + s] = 1;
        basis.push_back(off[n] + s);
        close();
      }

  auto arity_of = [&](std::size_t sym) {
    std::size_t n = 0;
    while (off[n + 1] <= sym) ++n;
    return n;
  };
  std::size_t digits = 0;
  std::uint64_t candidates = 1;
  for (auto b : basis) {
    auto cells = tuple_count(c, arity_of(b));
    digits += cells;
    candidates *= bounded_power(c, cells, max_candidates, "variety enumeration");
    if (candidates > max_candidates) throw BoundExceeded("variety enumeration", candidates, max_candidates);
  }

  std::vector<Algebra<Space>> out;
  if (c == 0 && (digits > 0 || P.size(0) > 0)) return out;
  const CompiledVariety<Space> compiled(v);
  const Signature sig = generated_signature(P);
  std::vector<std::size_t> d(digits, 0);
  std::vector<OpTable> ops(total);
  for (std::size_t s = 0; s < total; ++s) ops[s] = {arity_of(s), std::vector<std::size_t>(tuple_count(c, arity_of(s)))};
  for (auto [s, i] : projections) {
    std::vector<std::size_t> args(ops[s].arity);
    for (std::size_t cell = 0; cell < ops[s].values.size(); ++cell) {
      decode_tuple(cell, c, args);
      ops[s].values[cell] = args[i];
    }
  }
  do {
    std::size_t at = 0;
    for (auto b : basis) {
      std::copy(d.begin() + at, d.begin() + at + ops[b].values.size(), ops[b].values.begin());
      at += ops[b].values.size();
    }
    for (const auto& st : steps) {
      auto& target = ops[st.target].values;
      const auto& src = ops[st.source].values;
      std::vector<std::size_t> args(st.m), inner(st.n);
      for (std::size_t cell = 0; cell < target.size(); ++cell) {
        for (std::size_t i = 0; i < st.n; ++i) inner[i] = ops[off[st.m] + st.k[i]].values[cell];
        target[cell] = src[encode_tuple(inner, c)];
      }
    }
    Algebra<Space> a(sig, carrier, ops);
    if (compiled.holds(a) && validate_algebra(a).ok()) out.push_back(std::move(a));
  } while (next_tuple(d, c));
  return out;
}

// ---------------------------------------------------------------------------

std::string_view reason_name(FreenessReason r) {
  switch (r) {
    case FreenessReason::NotHomomorphism: return "not-homomorphism";
    case FreenessReason::UnitMismatch: return "unit-mismatch";
    case FreenessReason::NotUnique: return "not-unique";
  }
  return {};
}

namespace {

template <class Space>
std::string membership_witness(const Algebra<Space>& a, const GeneratedVariety& v) {
  auto show = [&](const std::optional<Interpretation>& f) {
    std::string s;
    if (!f) return s;
    for (const auto& [x, p] : *f) s += (s.empty() ? "" : ", ") + x + " := " + a.carrier().label(p);
    return " under " + s;
  };
  if constexpr (std::is_same_v<Space, FinMetric>) {
    for (const auto& e : v.quant) {
      auto r = satisfies_quant(a, e);
      if (!r.ok) return e.left.to_string() + " == " + e.right.to_string() + " within " + e.eps.to_string() + show(r.witness);
    }
  } else {
    for (const auto& e : v.cont) {
      auto r = satisfies_cont(a, e);
      if (!r.ok) return e.left.to_string() + " == " + e.right.to_string() + show(r.witness);
    }
  }
  return "operations are not structure maps";
}

// g : T_n -> A commutes with every tau acting on T_n by ext.
template <class Space>
bool is_symbol_homomorphism(const MonadPresentation& P, std::size_t n, const Algebra<Space>& a,
                            const std::vector<std::size_t>& off, const PointMap& g, std::string* detail) {
  for (std::size_t m = 0; m <= P.max_arity; ++m) {
    PointMap k(m), image(m);
    for (std::size_t code = 0; code < P.ext[m][n].size(); ++code) {
      decode_tuple(code, P.size(n), k);
      for (std::size_t i = 0; i < m; ++i) image[i] = g[k[i]];
      const auto& t = P.ext[m][n][code];
      for (std::size_t tau = 0; tau < P.size(m); ++tau)
        if (g[t[tau]] != a.apply(off[m] + tau, image)) {
          if (detail) *detail = "fails to commute with " + symbol_name(P, m, tau) + " at " + tuple_text(P, n, k);
          return false;
        }
    }
  }
  return true;
}

}  // namespace

template <class Space>
FreenessReport check_freeness(const MonadPresentation& P, std::size_t n, const GeneratedVariety& v,
                              const std::vector<Algebra<Space>>& targets, std::uint64_t max_maps) {
  require_mode<Space>(P);
  if (n > P.max_arity) throw ArityBudgetExceeded("arity beyond the presentation");
  const auto off = symbol_offsets(P);
  const Space& tn = presentation_carrier<Space>(P, n);
  const CompiledVariety<Space> compiled(v);
  FreenessReport out;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& a = targets[t];
    if (!(a.sig() == v.sig)) throw InputError("target algebra is not over the generated signature");
    if (!validate_algebra(a).ok() || !compiled.holds(a)) {
      out.ok = false;
      out.rejected.push_back({t, membership_witness(a, v)});
      continue;
    }
    const std::size_t c = a.size();
    bounded_power(c, P.size(n), max_maps, "freeness uniqueness search");
    bool stop = false;
    for_each_function(n, c, max_maps, [&](const PointMap& f) {
      ++out.maps_checked;
      PointMap fbar(P.size(n));
      for (std::size_t s = 0; s < fbar.size(); ++s) fbar[s] = a.apply(off[n] + s, f);
      auto fail = [&](FreenessReason r, std::string detail) {
        out.ok = false;
        out.failure = FreenessFailure{t, f, r, std::move(detail)};
        stop = true;
        return false;
      };
      if (!structure_map(tn, a.carrier(), fbar)) return fail(FreenessReason::NotHomomorphism, "not a structure map");
      for (std::size_t i = 0; i < n; ++i)
        if (fbar[P.unit[n][i]] != f[i]) return fail(FreenessReason::UnitMismatch, "at x" + std::to_string(i));
      std::string detail;
      if (!is_symbol_homomorphism(P, n, a, off, fbar, &detail)) return fail(FreenessReason::NotHomomorphism, detail);
      bool unique = true;
      for_each_function(P.size(n), c, max_maps, [&](const PointMap& g) {
        if (g == fbar) return true;
        for (std::size_t i = 0; i < n; ++i)
          if (g[P.unit[n][i]] != f[i]) return true;
        if (!structure_map(tn, a.carrier(), g)) return true;
        if (!is_symbol_homomorphism(P, n, a, off, g, nullptr)) return true;
        unique = false;
        return false;
      });
      if (!unique) return fail(FreenessReason::NotUnique, "a second homomorphism extends f");
      return true;
    });
    if (stop) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

QuotientSpace kan_evaluate(const MonadPresentation& P, const FinMetric& M) {
  if (P.mode != Mode::Metric) throw ModeMismatch("kan_evaluate needs a met presentation");
  const std::size_t r = M.size();
  if (r > P.max_arity)
    throw ArityBudgetExceeded("space has " + std::to_string(r) + " points, max arity is " + std::to_string(P.max_arity));
  std::set<Dist> levels;
  for (std::size_t x = 0; x < r; ++x)
    for (std::size_t y = 0; y < r; ++y)
      if (x != y && M.d(x, y).is_finite()) levels.insert(M.d(x, y));
  ConstraintSet cs{P.metric[r], {}};
  for (const auto& eps : levels) {
    PointMap lam, rho;
    for (std::size_t x = 0; x < r; ++x)
      for (std::size_t y = 0; y < r; ++y)
        if (M.d(x, y) <= eps) {
          lam.push_back(P.unit[r][x]);
          rho.push_back(P.unit[r][y]);
        }
    const std::size_t s = lam.size();
    if (s > P.max_arity)
      throw ArityBudgetExceeded("the pairs within " + eps.to_string() + " need arity " + std::to_string(s) +
                                ", max arity is " + std::to_string(P.max_arity));
    const auto& left = P.ext_of(s, r, lam);
    const auto& right = P.ext_of(s, r, rho);
    for (std::size_t tau = 0; tau < P.size(s); ++tau)
      if (left[tau] != right[tau]) cs.constraints.push_back({left[tau], right[tau], eps});
  }
  return basic_weight_colimit(cs);
}

#define QAW_INSTANTIATE(Space)                                                                             \
  template Algebra<Space> em_to_variety_algebra(const MonadPresentation&, const EMAlgebraDesc&);          \
  template EMAlgebraDesc variety_to_em(const MonadPresentation&, const Algebra<Space>&);                  \
  template bool satisfies_all(const Algebra<Space>&, const GeneratedVariety&);                            \
  template std::vector<Algebra<Space>> variety_algebras(const MonadPresentation&, const GeneratedVariety&, \
                                                        const Space&, std::uint64_t);                     \
  template FreenessReport check_freeness(const MonadPresentation&, std::size_t, const GeneratedVariety&,   \
                                         const std::vector<Algebra<Space>>&, std::uint64_t);

QAW_INSTANTIATE(FinMetric)
QAW_INSTANTIATE(FinPoset)

#undef QAW_INSTANTIATE

}  // namespace qaw
