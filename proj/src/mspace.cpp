#include "qaw/mspace.hpp"

#include "qaw/error.hpp"

#include <algorithm>
#include <numeric>

namespace qaw {

const char* to_string(MetricViolation::Kind kind) {
  switch (kind) {
    case MetricViolation::Kind::Diagonal: return "diagonal";
    case MetricViolation::Kind::Symmetry: return "symmetry";
    case MetricViolation::Kind::Separation: return "separation";
    case MetricViolation::Kind::Triangle: return "triangle";
  }
  return "?";
}

std::string MetricViolation::describe(const std::vector<Label>& points) const {
  std::string out = to_string(kind);
  out += " (";
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ',';
    out += points.at(witness[i]);
  }
  return out + ")";
}

MetricCheck validate_metric(const std::vector<Label>& points, const std::vector<Dist>& table) {
  const std::size_t n = points.size();
  if (table.size() != n * n)
    throw InputError("distance table has " + std::to_string(table.size()) +
                     " entries, expected " + std::to_string(n * n));
  Carrier{points};  // rejects duplicate labels
  auto d = [&](std::size_t i, std::size_t j) -> const Dist& { return table[i * n + j]; };

  MetricCheck check;
  using K = MetricViolation::Kind;
  for (std::size_t x = 0; x < n; ++x)
    if (!d(x, x).is_zero()) check.violations.push_back({K::Diagonal, {x}});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      if (d(x, y) != d(y, x)) check.violations.push_back({K::Symmetry, {x, y}});
      if (d(x, y).is_zero() || d(y, x).is_zero())
        check.violations.push_back({K::Separation, {x, y}});
    }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (d(x, y) + d(y, z) < d(x, z)) check.violations.push_back({K::Triangle, {x, y, z}});

  if (check.ok()) check.space = FinMetric::trusted(points, table);
  return check;
}

FinMetric::FinMetric(std::vector<Label> points, std::vector<Dist> table) {
  auto check = validate_metric(points, table);
  if (!check.ok())
    throw AxiomViolation("metric axiom violated: " + check.violations.front().describe(points));
  *this = std::move(*check.space);
}

FinMetric FinMetric::trusted(std::vector<Label> points, std::vector<Dist> table) {
  FinMetric m;
  m.carrier_ = Carrier(std::move(points));
  m.table_ = std::move(table);
  return m;
}

FinMetric discrete_space(const std::vector<Label>& labels) {
  const std::size_t n = labels.size();
  std::vector<Dist> table(n * n, Dist::inf());
  for (std::size_t i = 0; i < n; ++i) table[i * n + i] = Dist::zero();
  return FinMetric::trusted(labels, std::move(table));
}

MetricMap::MetricMap(FinMetric dom, FinMetric cod, PointMap tab)
    : domain(std::move(dom)), codomain(std::move(cod)), table(std::move(tab)) {
  if (table.size() != domain.size()) throw InputError("map table is not total on its domain");
  for (auto v : table)
    if (v >= codomain.size()) throw InputError("map table leaves the codomain");
}

SupProduct sup_product(const std::vector<FinMetric>& factors) {
  std::vector<std::size_t> radices;
  std::size_t total = 1;
  for (const auto& f : factors) {
    radices.push_back(f.size());
    total *= f.size();
  }
  const std::size_t k = factors.size();
  std::vector<std::vector<std::size_t>> coords(total, std::vector<std::size_t>(k));
  std::vector<Label> labels(total);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t code = p;
    for (std::size_t i = k; i-- > 0;) {
      coords[p][i] = code % radices[i];
      code /= radices[i];
    }
    std::vector<Label> parts;
    for (std::size_t i = 0; i < k; ++i) parts.push_back(factors[i].label(coords[p][i]));
    labels[p] = tuple_label(parts);
  }
  std::vector<Dist> table(total * total);
  for (std::size_t p = 0; p < total; ++p)
    for (std::size_t q = 0; q < total; ++q) {
      Dist best;
      for (std::size_t i = 0; i < k; ++i) best = dmax(best, factors[i].d(coords[p][i], coords[q][i]));
      table[p * total + q] = best;
    }
  SupProduct out{FinMetric::trusted(std::move(labels), std::move(table)), {}};
  for (std::size_t i = 0; i < k; ++i) {
    PointMap proj(total);
    for (std::size_t p = 0; p < total; ++p) proj[p] = coords[p][i];
    out.projections.emplace_back(out.space, factors[i], std::move(proj));
  }
  return out;
}

FinMetric tensor(const FinMetric& x, const FinMetric& y) {
  const std::size_t n = x.size() * y.size();
  std::vector<Label> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) labels.push_back(tuple_label({x.label(i), y.label(j)}));
  std::vector<Dist> table(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      table[p * n + q] = x.d(p / y.size(), q / y.size()) + y.d(p % y.size(), q % y.size());
  return FinMetric::trusted(std::move(labels), std::move(table));
}

namespace {

// Compares excesses d(f x, f x') - d(x, x') of violating pairs.
struct Excess {
  bool inf = false;
  Rational amount = 0;
  bool operator<(const Excess& o) const {
    if (inf || o.inf) return !inf && o.inf;
    return amount < o.amount;
  }
};

}  // namespace

NonexpandingCheck check_nonexpanding(const MetricMap& f) {
  NonexpandingCheck out;
  std::optional<Excess> worst;
  const auto& dom = f.domain;
  const auto& cod = f.codomain;
  for (std::size_t x = 0; x < dom.size(); ++x)
    for (std::size_t y = x + 1; y < dom.size(); ++y) {
      const Dist& before = dom.d(x, y);
      const Dist& after = cod.d(f(x), f(y));
      if (!(before < after)) continue;
      Excess e;
      if (after.is_inf()) e.inf = true;
      else e.amount = after.value() - before.value();
      if (!worst || *worst < e) {
        worst = e;
        out.worst = std::make_pair(x, y);
      }
      out.ok = false;
    }
  return out;
}

bool is_nonexpanding(const FinMetric& dom, const FinMetric& cod, const PointMap& table) {
  for (std::size_t x = 0; x < dom.size(); ++x)
    for (std::size_t y = x + 1; y < dom.size(); ++y)
      if (dom.d(x, y) < cod.d(table[x], table[y])) return false;
  return true;
}

Label map_label(const FinMetric& cod, const PointMap& table) {
  Label out = "[";
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i) out += ',';
    out += cod.label(table[i]);
  }
  return out + "]";
}

HomSpace hom_space(const FinMetric& x, const FinMetric& y, std::uint64_t max_maps) {
  HomSpace out;
  std::vector<Label> labels;
  for_each_function(x.size(), y.size(), max_maps, [&](const PointMap& f) {
    if (is_nonexpanding(x, y, f)) {
      out.maps.push_back(f);
      labels.push_back(map_label(y, f));
    }
    return true;
  });
  const std::size_t n = out.maps.size();
  std::vector<Dist> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Dist best;
      for (std::size_t p = 0; p < x.size(); ++p) best = dmax(best, y.d(out.maps[i][p], out.maps[j][p]));
      table[i * n + j] = best;
    }
  out.space = FinMetric::trusted(std::move(labels), std::move(table));
  return out;
}

bool isometric_by_labels(const FinMetric& x, const FinMetric& y) {
  if (x.size() != y.size()) return false;
  PointMap f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto j = y.carrier().find(x.label(i));
    if (!j) return false;
    f[i] = *j;
  }
  return is_isometry(x, y, f);
}

bool is_isometry(const FinMetric& dom, const FinMetric& cod, const PointMap& table) {
  if (dom.size() != cod.size() || table.size() != dom.size()) return false;
  std::vector<bool> hit(cod.size(), false);
  for (auto v : table) {
    if (v >= cod.size() || hit[v]) return false;
    hit[v] = true;
  }
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = 0; j < dom.size(); ++j)
      if (dom.d(i, j) != cod.d(table[i], table[j])) return false;
  return true;
}

namespace {

std::vector<Dist> sorted_row(const FinMetric& m, std::size_t i) {
  std::vector<Dist> row;
  for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m.d(i, j));
  std::sort(row.begin(), row.end());
  return row;
}

bool extend_isometry(const FinMetric& x, const FinMetric& y,
                     const std::vector<std::vector<std::size_t>>& candidates,
                     PointMap& f, std::vector<bool>& used, std::size_t i) {
  if (i == x.size()) return true;
  for (auto c : candidates[i]) {
    if (used[c]) continue;
    bool fits = true;
    for (std::size_t j = 0; j < i && fits; ++j)
      fits = x.d(i, j) == y.d(c, f[j]);
    if (!fits) continue;
    f[i] = c;
    used[c] = true;
    if (extend_isometry(x, y, candidates, f, used, i + 1)) return true;
    used[c] = false;
  }
  return false;
}

}  // namespace

std::optional<PointMap> find_isometry(const FinMetric& x, const FinMetric& y,
                                      std::size_t max_points) {
  if (x.size() != y.size()) return std::nullopt;
  if (isometric_by_labels(x, y)) {
    PointMap f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = y.index(x.label(i));
    return f;
  }
  if (x.size() > max_points) throw BoundExceeded("isometry search", x.size(), max_points);
  std::vector<std::vector<std::size_t>> candidates(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto row = sorted_row(x, i);
    for (std::size_t j = 0; j < y.size(); ++j)
      if (sorted_row(y, j) == row) candidates[i].push_back(j);
  }
  PointMap f(x.size());
  std::vector<bool> used(y.size(), false);
  if (extend_isometry(x, y, candidates, f, used, 0)) return f;
  return std::nullopt;
}

FinMetric subspace(const FinMetric& x, const std::vector<std::size_t>& keep) {
  std::vector<Label> labels;
  for (auto i : keep) labels.push_back(x.label(i));
  std::vector<Dist> table;
  table.reserve(keep.size() * keep.size());
  for (auto i : keep)
    for (auto j : keep) table.push_back(x.d(i, j));
  return FinMetric::trusted(std::move(labels), std::move(table));
}

}  // namespace qaw
