#include "qaw/poset.hpp"

#include "qaw/error.hpp"

#include <algorithm>

namespace qaw {

const char* to_string(OrderViolation::Kind kind) {
  switch (kind) {
    case OrderViolation::Kind::Reflexivity: return "reflexivity";
    case OrderViolation::Kind::Antisymmetry: return "antisymmetry";
    case OrderViolation::Kind::Transitivity: return "transitivity";
  }
  return "?";
}

std::string OrderViolation::describe(const std::vector<Label>& points) const {
  std::string out = to_string(kind);
  out += " (";
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ',';
    out += points.at(witness[i]);
  }
  return out + ")";
}

PosetCheck validate_poset(const std::vector<Label>& points, const std::vector<char>& leq) {
  const std::size_t n = points.size();
  if (leq.size() != n * n)
    throw InputError("order relation has " + std::to_string(leq.size()) + " entries, expected " +
                     std::to_string(n * n));
  Carrier{points};
  auto r = [&](std::size_t i, std::size_t j) { return leq[i * n + j] != 0; };
  PosetCheck check;
  using K = OrderViolation::Kind;
  for (std::size_t x = 0; x < n; ++x)
    if (!r(x, x)) check.violations.push_back({K::Reflexivity, {x}});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (r(x, y) && r(y, x)) check.violations.push_back({K::Antisymmetry, {x, y}});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (r(x, y) && r(y, z) && !r(x, z)) check.violations.push_back({K::Transitivity, {x, y, z}});
  if (check.ok()) check.poset = FinPoset::trusted(points, leq);
  return check;
}

FinPoset::FinPoset(std::vector<Label> points, std::vector<char> leq) {
  auto check = validate_poset(points, leq);
  if (!check.ok())
    throw AxiomViolation("order axiom violated: " + check.violations.front().describe(points));
  *this = std::move(*check.poset);
}

FinPoset FinPoset::trusted(std::vector<Label> points, std::vector<char> leq) {
  FinPoset p;
  p.carrier_ = Carrier(std::move(points));
  p.leq_ = std::move(leq);
  for (auto& c : p.leq_) c = c ? 1 : 0;
  return p;
}

std::size_t FinPoset::height() const {
  // Longest chain ending at each point, processed in an order compatible
  // with <= (by number of elements below).
  const std::size_t n = size();
  std::vector<std::size_t> order(n), below(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
    for (std::size_t j = 0; j < n; ++j) below[i] += leq(j, i) ? 1 : 0;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return below[a] < below[b]; });
  std::vector<std::size_t> longest(n, 1);
  std::size_t best = 0;
  for (std::size_t a = 0; a < n; ++a) {
    auto i = order[a];
    for (std::size_t b = 0; b < a; ++b) {
      auto j = order[b];
      if (leq(j, i) && j != i) longest[i] = std::max(longest[i], longest[j] + 1);
    }
    best = std::max(best, longest[i]);
  }
  return best;
}

FinPoset discrete_poset(const std::vector<Label>& labels) {
  const std::size_t n = labels.size();
  std::vector<char> leq(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = 1;
  return FinPoset::trusted(labels, std::move(leq));
}

FinPoset chain_poset(const std::vector<Label>& labels) {
  const std::size_t n = labels.size();
  std::vector<char> leq(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) leq[i * n + j] = 1;
  return FinPoset::trusted(labels, std::move(leq));
}

FinPoset poset_from_pairs(const std::vector<Label>& labels,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const std::size_t n = labels.size();
  std::vector<char> leq(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = 1;
  for (auto [a, b] : pairs) leq.at(a * n + b) = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k * n + j]) leq[i * n + j] = 1;
  return FinPoset(labels, std::move(leq));
}

MonotoneMap::MonotoneMap(FinPoset dom, FinPoset cod, PointMap tab)
    : domain(std::move(dom)), codomain(std::move(cod)), table(std::move(tab)) {
  if (table.size() != domain.size()) throw InputError("map table is not total on its domain");
  for (auto v : table)
    if (v >= codomain.size()) throw InputError("map table leaves the codomain");
}

PosetProduct poset_product(const std::vector<FinPoset>& factors) {
  const std::size_t k = factors.size();
  std::size_t total = 1;
  for (const auto& f : factors) total *= f.size();
  std::vector<std::vector<std::size_t>> coords(total, std::vector<std::size_t>(k));
  std::vector<Label> labels(total);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t code = p;
    for (std::size_t i = k; i-- > 0;) {
      coords[p][i] = code % factors[i].size();
      code /= factors[i].size();
    }
    std::vector<Label> parts;
    for (std::size_t i = 0; i < k; ++i) parts.push_back(factors[i].label(coords[p][i]));
    labels[p] = tuple_label(parts);
  }
  std::vector<char> leq(total * total, 0);
  for (std::size_t p = 0; p < total; ++p)
    for (std::size_t q = 0; q < total; ++q) {
      bool all = true;
      for (std::size_t i = 0; i < k && all; ++i) all = factors[i].leq(coords[p][i], coords[q][i]);
      leq[p * total + q] = all ? 1 : 0;
    }
  PosetProduct out{FinPoset::trusted(std::move(labels), std::move(leq)), {}};
  for (std::size_t i = 0; i < k; ++i) {
    PointMap proj(total);
    for (std::size_t p = 0; p < total; ++p) proj[p] = coords[p][i];
    out.projections.emplace_back(out.poset, factors[i], std::move(proj));
  }
  return out;
}

MonotoneCheck check_monotone(const MonotoneMap& f) {
  for (std::size_t x = 0; x < f.domain.size(); ++x)
    for (std::size_t y = 0; y < f.domain.size(); ++y)
      if (f.domain.leq(x, y) && !f.codomain.leq(f(x), f(y))) return {false, std::make_pair(x, y)};
  return {};
}

bool is_monotone(const FinPoset& dom, const FinPoset& cod, const PointMap& table) {
  for (std::size_t x = 0; x < dom.size(); ++x)
    for (std::size_t y = 0; y < dom.size(); ++y)
      if (x != y && dom.leq(x, y) && !cod.leq(table[x], table[y])) return false;
  return true;
}

std::size_t join_of_chain(const FinPoset& p, const std::vector<std::size_t>& seq) {
  if (seq.empty()) throw InputError("join of an empty sequence");
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (!p.leq(seq[i], seq[i + 1])) throw NotAChain(i);
  return seq.back();
}

bool is_order_isomorphism(const FinPoset& dom, const FinPoset& cod, const PointMap& table) {
  if (dom.size() != cod.size() || table.size() != dom.size()) return false;
  std::vector<bool> hit(cod.size(), false);
  for (auto v : table) {
    if (v >= cod.size() || hit[v]) return false;
    hit[v] = true;
  }
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = 0; j < dom.size(); ++j)
      if (dom.leq(i, j) != cod.leq(table[i], table[j])) return false;
  return true;
}

bool isomorphic_by_labels(const FinPoset& x, const FinPoset& y) {
  if (x.size() != y.size()) return false;
  PointMap f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto j = y.carrier().find(x.label(i));
    if (!j) return false;
    f[i] = *j;
  }
  return is_order_isomorphism(x, y, f);
}

namespace {

std::pair<std::size_t, std::size_t> degree(const FinPoset& p, std::size_t i) {
  std::size_t up = 0, down = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    up += p.leq(i, j) ? 1 : 0;
    down += p.leq(j, i) ? 1 : 0;
  }
  return {up, down};
}

bool extend_iso(const FinPoset& x, const FinPoset& y,
                const std::vector<std::vector<std::size_t>>& candidates, PointMap& f,
                std::vector<bool>& used, std::size_t i) {
  if (i == x.size()) return true;
  for (auto c : candidates[i]) {
    if (used[c]) continue;
    bool fits = true;
    for (std::size_t j = 0; j < i && fits; ++j)
      fits = x.leq(i, j) == y.leq(c, f[j]) && x.leq(j, i) == y.leq(f[j], c);
    if (!fits) continue;
    f[i] = c;
    used[c] = true;
    if (extend_iso(x, y, candidates, f, used, i + 1)) return true;
    used[c] = false;
  }
  return false;
}

}  // namespace

std::optional<PointMap> find_order_isomorphism(const FinPoset& x, const FinPoset& y,
                                               std::size_t max_points) {
  if (x.size() != y.size()) return std::nullopt;
  if (isomorphic_by_labels(x, y)) {
    PointMap f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = y.index(x.label(i));
    return f;
  }
  if (x.size() > max_points) throw BoundExceeded("isomorphism search", x.size(), max_points);
  std::vector<std::vector<std::size_t>> candidates(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      if (degree(x, i) == degree(y, j)) candidates[i].push_back(j);
  PointMap f(x.size());
  std::vector<bool> used(y.size(), false);
  if (extend_iso(x, y, candidates, f, used, 0)) return f;
  return std::nullopt;
}

FinPoset subposet(const FinPoset& x, const std::vector<std::size_t>& keep) {
  std::vector<Label> labels;
  for (auto i : keep) labels.push_back(x.label(i));
  std::vector<char> leq;
  for (auto i : keep)
    for (auto j : keep) leq.push_back(x.leq(i, j) ? 1 : 0);
  return FinPoset::trusted(std::move(labels), std::move(leq));
}

std::vector<FinPoset> posets_up_to_iso(std::size_t n) {
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) slots.emplace_back(i, j);
  if (slots.size() > 20) throw BoundExceeded("poset enumeration", n, 5);
  std::vector<FinPoset> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<char> leq(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = 1;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1) leq[slots[s].first * n + slots[s].second] = 1;
    auto check = validate_poset(labels, leq);
    if (!check.ok()) continue;
    bool fresh = true;
    for (const auto& seen : out)
      if (find_order_isomorphism(*check.poset, seen, n)) {
        fresh = false;
        break;
      }
    if (fresh) out.push_back(std::move(*check.poset));
  }
  return out;
}

}  // namespace qaw
