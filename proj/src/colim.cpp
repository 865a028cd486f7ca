#include "qaw/colim.hpp"

#include "qaw/error.hpp"

#include <algorithm>
#include <set>

namespace qaw {

namespace {

// Equivalence classes of a reflexive symmetric transitive relation given as
// a predicate, numbered by first member.
template <class Same>
std::vector<std::size_t> classes_of(std::size_t n, Same&& same, std::size_t& count) {
  std::vector<std::size_t> cls(n, n);
  count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cls[i] != n) continue;
    for (std::size_t j = i; j < n; ++j)
      if (cls[j] == n && same(i, j)) cls[j] = count;
    ++count;
  }
  return cls;
}

std::vector<std::vector<Label>> class_members(const std::vector<Label>& labels,
                                              const std::vector<std::size_t>& cls,
                                              std::size_t count) {
  std::vector<std::vector<Label>> members(count);
  for (std::size_t i = 0; i < cls.size(); ++i) members[cls[i]].push_back(labels[i]);
  return members;
}

// Quotient of a pseudometric table by its zero-distance classes.
std::pair<FinMetric, PointMap> metric_quotient(const std::vector<Label>& labels,
                                               const std::vector<Dist>& table) {
  const std::size_t n = labels.size();
  std::size_t count = 0;
  auto cls = classes_of(n, [&](std::size_t i, std::size_t j) { return table[i * n + j].is_zero(); },
                        count);
  std::vector<std::size_t> rep(count, n);
  for (std::size_t i = 0; i < n; ++i)
    if (rep[cls[i]] == n) rep[cls[i]] = i;
  std::vector<Label> out_labels;
  for (auto& m : class_members(labels, cls, count)) out_labels.push_back(class_label(m));
  std::vector<Dist> out(count * count);
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b) out[a * count + b] = table[rep[a] * n + rep[b]];
  return {FinMetric::trusted(std::move(out_labels), std::move(out)), std::move(cls)};
}

// Quotient of a preorder by its symmetric part.
std::pair<FinPoset, PointMap> preorder_quotient(const std::vector<Label>& labels,
                                                const std::vector<char>& rel) {
  const std::size_t n = labels.size();
  std::size_t count = 0;
  auto cls = classes_of(
      n, [&](std::size_t i, std::size_t j) { return rel[i * n + j] && rel[j * n + i]; }, count);
  std::vector<std::size_t> rep(count, n);
  for (std::size_t i = 0; i < n; ++i)
    if (rep[cls[i]] == n) rep[cls[i]] = i;
  std::vector<Label> out_labels;
  for (auto& m : class_members(labels, cls, count)) out_labels.push_back(class_label(m));
  std::vector<char> out(count * count);
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b) out[a * count + b] = rel[rep[a] * n + rep[b]];
  return {FinPoset::trusted(std::move(out_labels), std::move(out)), std::move(cls)};
}

void transitive_closure(std::vector<char>& rel, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (rel[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (rel[k * n + j]) rel[i * n + j] = 1;
}

}  // namespace

// ---------------------------------------------------------------------------

void ConstraintSet::validate() const {
  for (const auto& c : constraints) {
    if (c.x >= base.size() || c.y >= base.size())
      throw InputError("constraint refers to a point outside the base");
    if (c.eps.is_inf() || c.eps.is_zero())
      throw InputError("constraint bound must be positive and finite, got " + c.eps.to_string());
  }
}

ConstraintSet precongruence(const FinMetric& m) {
  ConstraintSet out{discrete_space(m.points()), {}};
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = x + 1; y < m.size(); ++y) {
      const Dist& d = m.d(x, y);
      if (d.is_finite() && !d.is_zero()) out.constraints.push_back({x, y, d});
    }
  return out;
}

QuotientSpace basic_weight_colimit(const ConstraintSet& c) {
  c.validate();
  const std::size_t n = c.base.size();
  std::vector<Dist> table = c.base.table();
  for (const auto& k : c.constraints) {
    table[k.x * n + k.y] = dmin(table[k.x * n + k.y], k.eps);
    table[k.y * n + k.x] = dmin(table[k.y * n + k.x], k.eps);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (table[i * n + k].is_inf()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        Dist via = table[i * n + k] + table[k * n + j];
        if (via < table[i * n + j]) table[i * n + j] = std::move(via);
      }
    }
  auto [space, cls] = metric_quotient(c.base.points(), table);
  MetricMap unit(c.base, space, std::move(cls));
  return {std::move(space), std::move(unit)};
}

bool respects_constraints(const ConstraintSet& c, const FinMetric& z, const PointMap& g) {
  if (!is_nonexpanding(c.base, z, g)) return false;
  for (const auto& k : c.constraints)
    if (k.eps < z.d(g[k.x], g[k.y])) return false;
  return true;
}

UniversalityReport check_basic_weight_universal(const ConstraintSet& c, const QuotientSpace& colim,
                                                const FinMetric& z, std::uint64_t max_maps) {
  UniversalityReport report;
  std::set<PointMap> cocones;
  for_each_function(c.base.size(), z.size(), max_maps, [&](const PointMap& g) {
    if (respects_constraints(c, z, g)) cocones.insert(g);
    return true;
  });
  report.cocones = cocones.size();

  std::vector<PointMap> factors, restricted;
  for_each_function(colim.space.size(), z.size(), max_maps, [&](const PointMap& h) {
    if (is_nonexpanding(colim.space, z, h)) {
      factors.push_back(h);
      restricted.push_back(compose(h, colim.unit.table));
    }
    return true;
  });
  report.factorizations = factors.size();

  std::set<PointMap> image(restricted.begin(), restricted.end());
  if (image.size() != restricted.size()) {
    report.ok = false;
    report.failure = "two maps out of the colimit agree after the unit";
  } else if (image != cocones) {
    report.ok = false;
    report.failure = "restriction along the unit does not hit exactly the cocones";
  }
  if (!report.ok) return report;

  auto sup_distance = [&](const PointMap& f, const PointMap& g) {
    Dist best;
    for (std::size_t i = 0; i < f.size(); ++i) best = dmax(best, z.d(f[i], g[i]));
    return best;
  };
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = i + 1; j < factors.size(); ++j)
      if (sup_distance(factors[i], factors[j]) != sup_distance(restricted[i], restricted[j])) {
        report.ok = false;
        report.failure = "restriction along the unit changes a supremum distance";
        return report;
      }
  return report;
}

// ---------------------------------------------------------------------------

void ParallelPair::validate() const {
  for (const PointMap* f : {&f0, &f1}) {
    if (f->size() != a.size()) throw InputError("parallel pair map is not total");
    for (auto v : *f)
      if (v >= b.size()) throw InputError("parallel pair map leaves its codomain");
    if (!is_monotone(a, b, *f)) throw InputError("parallel pair map is not monotone");
  }
}

PosetQuotient coinserter(const ParallelPair& p) {
  p.validate();
  const std::size_t n = p.b.size();
  std::vector<char> rel = p.b.relation();
  for (std::size_t x = 0; x < p.a.size(); ++x) rel[p.f0[x] * n + p.f1[x]] = 1;
  transitive_closure(rel, n);
  auto [poset, cls] = preorder_quotient(p.b.points(), rel);
  MonotoneMap map(p.b, poset, std::move(cls));
  return {std::move(poset), std::move(map)};
}

namespace {

bool extend_splitting(const ParallelPair& p, const std::vector<std::vector<std::size_t>>& candidates,
                      PointMap& d, std::size_t b) {
  if (b == p.b.size()) return true;
  for (auto a : candidates[b]) {
    bool fits = true;
    for (std::size_t prev = 0; prev < b && fits; ++prev) {
      if (p.b.leq(prev, b) && !p.a.leq(d[prev], a)) fits = false;
      if (p.b.leq(b, prev) && !p.a.leq(a, d[prev])) fits = false;
    }
    if (!fits) continue;
    d[b] = a;
    if (extend_splitting(p, candidates, d, b + 1)) return true;
  }
  return false;
}

}  // namespace

std::optional<PointMap> reflexive_splitting(const ParallelPair& p) {
  p.validate();
  std::vector<std::vector<std::size_t>> candidates(p.b.size());
  for (std::size_t a = 0; a < p.a.size(); ++a)
    if (p.f0[a] == p.f1[a]) candidates[p.f0[a]].push_back(a);
  PointMap d(p.b.size());
  if (extend_splitting(p, candidates, d, 0)) return d;
  return std::nullopt;
}

ParallelPair comparable_pairs_presentation(const FinPoset& c) {
  std::vector<Label> labels;
  PointMap f0, f1;
  for (std::size_t x = 0; x < c.size(); ++x)
    for (std::size_t y = 0; y < c.size(); ++y)
      if (c.leq(x, y)) {
        labels.push_back(tuple_label({c.label(x), c.label(y)}));
        f0.push_back(x);
        f1.push_back(y);
      }
  return {discrete_poset(labels), discrete_poset(c.points()), std::move(f0), std::move(f1)};
}

ParallelPair product_pair(const ParallelPair& p, const ParallelPair& q) {
  ParallelPair out{poset_product({p.a, q.a}).poset, poset_product({p.b, q.b}).poset, {}, {}};
  for (std::size_t i = 0; i < p.a.size(); ++i)
    for (std::size_t j = 0; j < q.a.size(); ++j) {
      out.f0.push_back(p.f0[i] * q.b.size() + q.f0[j]);
      out.f1.push_back(p.f1[i] * q.b.size() + q.f1[j]);
    }
  return out;
}

CoinserterUniversalReport check_coinserter_universal(const ParallelPair& p, const FinPoset& target,
                                                     const PointMap& c, std::size_t max_target,
                                                     std::uint64_t max_maps) {
  p.validate();
  CoinserterUniversalReport r;
  auto fail = [&](bool CoinserterUniversalReport::*clause, std::string why) {
    r.ok = false;
    r.*clause = false;
    if (r.failure.empty()) r.failure = std::move(why);
  };
  if (c.size() != p.b.size() || std::any_of(c.begin(), c.end(), [&](auto v) { return v >= target.size(); }) ||
      !is_monotone(p.b, target, c)) {
    fail(&CoinserterUniversalReport::cocone, "candidate is not a monotone map out of the codomain");
    r.clause_a = r.clause_b = r.matches_construction = false;
    return r;
  }
  for (std::size_t a = 0; a < p.a.size(); ++a)
    if (!target.leq(c[p.f0[a]], c[p.f1[a]])) {
      fail(&CoinserterUniversalReport::cocone, "candidate violates c f0 <= c f1 at " + p.a.label(a));
      break;
    }

  for (std::size_t size = 1; size <= max_target; ++size) {
    for (const auto& d : posets_up_to_iso(size)) {
      std::vector<PointMap> from_target;
      for_each_function(target.size(), d.size(), max_maps, [&](const PointMap& u) {
        if (is_monotone(target, d, u)) from_target.push_back(u);
        return true;
      });
      if (r.clause_a) {
        std::set<PointMap> factored;
        for (const auto& u : from_target) factored.insert(compose(u, c));
        for_each_function(p.b.size(), d.size(), max_maps, [&](const PointMap& cp) {
          if (!is_monotone(p.b, d, cp)) return true;
          for (std::size_t a = 0; a < p.a.size(); ++a)
            if (!d.leq(cp[p.f0[a]], cp[p.f1[a]])) return true;
          if (!factored.count(cp)) {
            fail(&CoinserterUniversalReport::clause_a,
                 "a cocone into a " + std::to_string(size) + "-point poset does not factor");
            return false;
          }
          return true;
        });
      }
      if (r.clause_b) {
        for (const auto& u : from_target) {
          for (const auto& v : from_target) {
            bool below_after = true, below = true;
            for (std::size_t x = 0; x < p.b.size() && below_after; ++x)
              below_after = d.leq(u[c[x]], v[c[x]]);
            if (!below_after) continue;
            for (std::size_t y = 0; y < target.size() && below; ++y) below = d.leq(u[y], v[y]);
            if (!below) {
              fail(&CoinserterUniversalReport::clause_b,
                   "u c <= v c without u <= v into a " + std::to_string(size) + "-point poset");
              break;
            }
          }
          if (!r.clause_b) break;
        }
      }
    }
  }

  auto built = coinserter(p);
  PointMap phi(target.size(), built.poset.size());
  bool consistent = true;
  for (std::size_t x = 0; x < p.b.size() && consistent; ++x) {
    auto& slot = phi[c[x]];
    if (slot == built.poset.size()) slot = built.map(x);
    else consistent = slot == built.map(x);
  }
  if (!consistent || std::count(phi.begin(), phi.end(), built.poset.size()) ||
      !is_order_isomorphism(target, built.poset, phi))
    fail(&CoinserterUniversalReport::matches_construction,
         "candidate is not isomorphic to the constructed coinserter under the cocone maps");
  return r;
}

// ---------------------------------------------------------------------------

void OmegaChainMet::validate() const {
  if (stages.empty()) throw InputError("chain needs at least one stage");
  if (links.size() + 1 != stages.size()) throw InputError("chain needs one link per consecutive pair");
  for (std::size_t i = 0; i < links.size(); ++i) {
    MetricMap link(stages[i], stages[i + 1], links[i]);
    if (!is_nonexpanding(stages[i], stages[i + 1], links[i]))
      throw InputError("link " + std::to_string(i) + " is not nonexpanding");
  }
  if (auto* lim = std::get_if<DeclaredLimits>(&tail)) {
    const auto& last = stages.back();
    const std::size_t n = last.size();
    if (lim->limits.size() != n * n) throw InvalidTail("declared limits must cover the last stage");
    auto l = [&](std::size_t i, std::size_t j) -> const Dist& { return lim->limits[i * n + j]; };
    for (std::size_t x = 0; x < n; ++x) {
      if (!l(x, x).is_zero()) throw InvalidTail("declared limit of a point with itself is not 0");
      for (std::size_t y = 0; y < n; ++y) {
        if (l(x, y) != l(y, x)) throw InvalidTail("declared limits are not symmetric");
        if (last.d(x, y) < l(x, y))
          throw InvalidTail("declared limit of (" + last.label(x) + "," + last.label(y) +
                            ") exceeds a finite-stage distance");
        for (std::size_t z = 0; z < n; ++z)
          if (l(x, y) + l(y, z) < l(x, z)) throw InvalidTail("declared limits violate the triangle inequality");
      }
    }
  }
}

void OmegaChainPos::validate() const {
  if (stages.empty()) throw InputError("chain needs at least one stage");
  if (links.size() + 1 != stages.size()) throw InputError("chain needs one link per consecutive pair");
  for (std::size_t i = 0; i < links.size(); ++i) {
    MonotoneMap link(stages[i], stages[i + 1], links[i]);
    if (!is_monotone(stages[i], stages[i + 1], links[i]))
      throw InputError("link " + std::to_string(i) + " is not monotone");
  }
}

OmegaChainPos OmegaChainPos::ordinal_family(std::size_t prefix, bool stable) {
  if (!stable)
    throw NonStabilizingChain(
        "the ordinal chain 1 -> 2 -> 3 -> ... never stabilizes; its colimit is the natural numbers "
        "with a top element, which is not a finite poset");
  if (prefix == 0) throw InputError("ordinal family needs at least one stage");
  OmegaChainPos ch;
  for (std::size_t n = 1; n <= prefix; ++n) {
    std::vector<Label> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    ch.stages.push_back(chain_poset(labels));
    if (n > 1) ch.links.push_back(identity_map(n - 1));
  }
  return ch;
}

namespace {

// stage i -> last stage along the links
template <class Chain>
PointMap to_last_stage(const Chain& ch, std::size_t i) {
  PointMap f = identity_map(ch.stages[i].size());
  for (std::size_t j = i; j < ch.links.size(); ++j) f = compose(ch.links[j], f);
  return f;
}

std::vector<Dist> limit_table(const OmegaChainMet& ch) {
  if (auto* lim = std::get_if<DeclaredLimits>(&ch.tail)) return lim->limits;
  return ch.stages.back().table();
}

}  // namespace

MetColimit omega_colimit_met(const OmegaChainMet& ch) {
  ch.validate();
  auto [space, cls] = metric_quotient(ch.stages.back().points(), limit_table(ch));
  MetColimit out{std::move(space), {}};
  for (std::size_t i = 0; i < ch.stages.size(); ++i) out.cocone.push_back(compose(cls, to_last_stage(ch, i)));
  return out;
}

PosColimit omega_colimit_pos(const OmegaChainPos& ch) {
  ch.validate();
  PosColimit out{ch.stages.back(), {}};
  for (std::size_t i = 0; i < ch.stages.size(); ++i) out.cocone.push_back(to_last_stage(ch, i));
  return out;
}

bool satisfies_met_colimit_characterization(const OmegaChainMet& ch, const MetColimit& colim,
                                            std::string* failure) {
  auto fail = [&](std::string why) {
    if (failure) *failure = std::move(why);
    return false;
  };
  std::vector<bool> covered(colim.space.size(), false);
  for (std::size_t i = 0; i < ch.stages.size(); ++i)
    for (auto v : colim.cocone.at(i)) covered.at(v) = true;
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    return fail("cocone images do not cover the colimit");

  const auto* declared = std::get_if<DeclaredLimits>(&ch.tail);
  const std::size_t last = ch.stages.back().size();
  for (std::size_t i = 0; i < ch.stages.size(); ++i) {
    const auto& stage = ch.stages[i];
    for (std::size_t y = 0; y < stage.size(); ++y)
      for (std::size_t z = 0; z < stage.size(); ++z) {
        // inf over j >= i of the induced distances, then the tail
        Dist inf = stage.d(y, z);
        std::size_t a = y, b = z;
        for (std::size_t j = i; j < ch.links.size(); ++j) {
          a = ch.links[j][a];
          b = ch.links[j][b];
          inf = dmin(inf, ch.stages[j + 1].d(a, b));
        }
        if (declared) inf = dmin(inf, declared->limits[a * last + b]);
        if (colim.space.d(colim.cocone[i][y], colim.cocone[i][z]) != inf)
          return fail("distance of images of (" + stage.label(y) + "," + stage.label(z) +
                      ") at stage " + std::to_string(i) + " is not the infimum along the chain");
      }
  }
  return true;
}

namespace {

template <class Chain>
std::pair<Chain, Chain> padded(const Chain& a, const Chain& b) {
  Chain pa = a, pb = b;
  for (Chain* c : {&pa, &pb})
    while (c->stages.size() < std::max(a.stages.size(), b.stages.size())) {
      c->links.push_back(identity_map(c->stages.back().size()));
      c->stages.push_back(c->stages.back());
    }
  return {pa, pb};
}

template <class Chain>
std::vector<PointMap> product_links(const Chain& a, const Chain& b) {
  std::vector<PointMap> links;
  for (std::size_t i = 0; i < a.links.size(); ++i) {
    PointMap link;
    for (std::size_t y = 0; y < a.stages[i].size(); ++y)
      for (std::size_t z = 0; z < b.stages[i].size(); ++z)
        link.push_back(a.links[i][y] * b.stages[i + 1].size() + b.links[i][z]);
    links.push_back(std::move(link));
  }
  return links;
}

}  // namespace

OmegaChainMet product_chain(const OmegaChainMet& a, const OmegaChainMet& b) {
  a.validate();
  b.validate();
  auto [pa, pb] = padded(a, b);
  OmegaChainMet out;
  for (std::size_t i = 0; i < pa.stages.size(); ++i)
    out.stages.push_back(sup_product({pa.stages[i], pb.stages[i]}).space);
  out.links = product_links(pa, pb);
  if (std::holds_alternative<StableTail>(pa.tail) && std::holds_alternative<StableTail>(pb.tail)) {
    out.tail = StableTail{};
  } else {
    // Induced distance sequences are non-increasing, so the infimum of a
    // pointwise max is the max of the infima.
    auto la = limit_table(pa), lb = limit_table(pb);
    const std::size_t na = pa.stages.back().size(), nb = pb.stages.back().size();
    const std::size_t n = na * nb;
    DeclaredLimits lim{std::vector<Dist>(n * n)};
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        lim.limits[p * n + q] = dmax(la[(p / nb) * na + q / nb], lb[(p % nb) * nb + q % nb]);
    out.tail = std::move(lim);
  }
  return out;
}

OmegaChainPos product_chain(const OmegaChainPos& a, const OmegaChainPos& b) {
  a.validate();
  b.validate();
  auto [pa, pb] = padded(a, b);
  OmegaChainPos out;
  for (std::size_t i = 0; i < pa.stages.size(); ++i)
    out.stages.push_back(poset_product({pa.stages[i], pb.stages[i]}).poset);
  out.links = product_links(pa, pb);
  return out;
}

namespace {

// Builds the comparison map from a quotient of a product onto the product
// of quotients: class of (y, z) -> (qa y, qb z). Returns nullopt when it is
// not well defined or not total.
std::optional<PointMap> comparison_map(std::size_t quotient_size, const PointMap& quotient_of_pair,
                                       const PointMap& qa, const PointMap& qb, std::size_t nb_quot,
                                       std::size_t nb) {
  PointMap phi(quotient_size, SIZE_MAX);
  for (std::size_t p = 0; p < quotient_of_pair.size(); ++p) {
    std::size_t target = qa[p / nb] * nb_quot + qb[p % nb];
    auto& slot = phi[quotient_of_pair[p]];
    if (slot == SIZE_MAX) slot = target;
    else if (slot != target) return std::nullopt;
  }
  if (std::count(phi.begin(), phi.end(), SIZE_MAX)) return std::nullopt;
  return phi;
}

}  // namespace

CommutationReport check_product_commutation(const OmegaChainMet& a, const OmegaChainMet& b) {
  auto ca = omega_colimit_met(a);
  auto cb = omega_colimit_met(b);
  auto prod_chain = product_chain(a, b);
  auto cp = omega_colimit_met(prod_chain);
  auto rhs = sup_product({ca.space, cb.space}).space;
  CommutationReport r;
  r.product_of_colimits = rhs.size();
  r.colimit_of_product = cp.space.size();
  auto phi = comparison_map(cp.space.size(), cp.cocone.back(), ca.cocone.back(), cb.cocone.back(),
                            cb.space.size(), b.stages.back().size());
  if (!phi) {
    r.ok = false;
    r.failure = "comparison map is not well defined";
  } else if (!is_isometry(cp.space, rhs, *phi)) {
    r.ok = false;
    r.failure = "comparison map is not an isometry";
  }
  return r;
}

CommutationReport check_product_commutation(const OmegaChainPos& a, const OmegaChainPos& b) {
  auto ca = omega_colimit_pos(a);
  auto cb = omega_colimit_pos(b);
  auto cp = omega_colimit_pos(product_chain(a, b));
  auto rhs = poset_product({ca.poset, cb.poset}).poset;
  CommutationReport r;
  r.product_of_colimits = rhs.size();
  r.colimit_of_product = cp.poset.size();
  auto phi = comparison_map(cp.poset.size(), cp.cocone.back(), ca.cocone.back(), cb.cocone.back(),
                            cb.poset.size(), b.stages.back().size());
  if (!phi) {
    r.ok = false;
    r.failure = "comparison map is not well defined";
  } else if (!is_order_isomorphism(cp.poset, rhs, *phi)) {
    r.ok = false;
    r.failure = "comparison map is not an order isomorphism";
  }
  return r;
}

CommutationReport check_coinserter_products(const ParallelPair& a, const ParallelPair& b) {
  if (!is_reflexive(a)) throw NotReflexive("A");
  if (!is_reflexive(b)) throw NotReflexive("B");
  auto ca = coinserter(a);
  auto cb = coinserter(b);
  auto cp = coinserter(product_pair(a, b));
  auto rhs = poset_product({ca.poset, cb.poset}).poset;
  CommutationReport r;
  r.product_of_colimits = rhs.size();
  r.colimit_of_product = cp.poset.size();
  auto phi = comparison_map(cp.poset.size(), cp.map.table, ca.map.table, cb.map.table,
                            cb.poset.size(), b.b.size());
  if (!phi) {
    r.ok = false;
    r.failure = "comparison map is not well defined";
  } else if (!is_order_isomorphism(cp.poset, rhs, *phi)) {
    r.ok = false;
    r.failure = "comparison map is not an order isomorphism";
  }
  return r;
}

}  // namespace qaw
