#include "qaw/cli.hpp"

#include "qaw/error.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace qaw {

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Options {
  std::string file;
  std::string format = "json";
  std::size_t max_carrier = 6;
  std::uint64_t max_maps = kDefaultMaxMaps;
  bool no_timing = false;

  std::string space, algebra, eq, term, pair, chain, constraints, with, equations, signature;
  std::string presentation, mode = "met", vars = "x", to = "qaw";
  std::size_t max_arity = 2, depth = 2, arity = 2, target_size = 3, max_target = 4;
};

// What a handler produces. `text` replaces the rendered report in text
// format (eqgen, free-terms); `raw` bypasses reports entirely (fmt).
struct Outcome {
  bool verdict = true;
  Json result = Json::object();
  std::optional<std::string> text;
  std::optional<std::string> raw;
};

class Context {
 public:
  explicit Context(const Options& o) : opt(o) {}

  void load() {
    if (opt.file.empty()) return;
    std::ifstream in(opt.file, std::ios::binary);
    if (!in) throw InputError("cannot read '" + opt.file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    source = ss.str();
    const bool json = opt.file.size() >= 5 && opt.file.compare(opt.file.size() - 5, 5, ".json") == 0;
    if (json) {
      Json j;
      try {
        j = Json::parse(source);
      } catch (const Json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
      }
      file = workbench_from_json(j);
    } else {
      file = parse_workbench(source);
    }
  }

  const WorkbenchFile& wb() const {
    if (!file) throw InputError("this command needs a workbench file (-f)");
    return *file;
  }

  void bound_carrier(std::size_t n, const std::string& what) const {
    if (n > opt.max_carrier) throw BoundExceeded(what + " carrier size", n, opt.max_carrier);
  }

  const Options& opt;
  std::string source;
  std::optional<WorkbenchFile> file;
};

void need(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing required option ") + flag);
}

Json labels(const Carrier& c, const PointMap& m) {
  Json out = Json::array();
  for (auto x : m) out.push_back(c.label(x));
  return out;
}

Json interpretation(const Carrier& c, const Interpretation& f) {
  Json out = Json::object();
  for (const auto& [v, x] : f) out[v] = c.label(x);
  return out;
}

Mode algebra_kind(const WorkbenchFile& wb, const std::string& name) {
  auto it = wb.algebras.find(name);
  if (it == wb.algebras.end()) throw InputError("no algebra named '" + name + "'");
  return it->second.carrier_kind;
}

std::string eq_name(const EquationDecl& e, const std::string& fallback, std::size_t i) {
  if (!e.name.empty()) return e.name;
  return fallback + "#" + std::to_string(i);
}

// --- check-metric / check-algebra ------------------------------------------

Outcome check_metric(Context& ctx) {
  need(ctx.opt.space, "--space");
  const auto& spaces = ctx.wb().spaces;
  auto it = spaces.find(ctx.opt.space);
  if (it == spaces.end()) throw InputError("no space named '" + ctx.opt.space + "'");
  const auto& s = it->second;
  auto chk = validate_metric(s.points, s.table);
  Outcome o;
  o.verdict = chk.ok();
  Json vs = Json::array();
  for (const auto& v : chk.violations) {
    Json pts = Json::array();
    for (auto x : v.witness) pts.push_back(s.points[x]);
    vs.push_back({{"axiom", to_string(v.kind)}, {"points", pts}, {"detail", v.describe(s.points)}});
  }
  o.result = {{"space", ctx.opt.space}, {"points", s.points.size()}, {"violations", vs}};
  return o;
}

template <class Space>
Json op_violations(const Algebra<Space>& a, const AlgebraCheck& chk) {
  Json vs = Json::array();
  for (const auto& v : chk.violations)
    vs.push_back({{"symbol", a.sig().at(v.symbol).name},
                  {"lhs", labels(a.carrier().carrier(), v.lhs)},
                  {"rhs", labels(a.carrier().carrier(), v.rhs)}});
  return vs;
}

Outcome check_algebra(Context& ctx) {
  need(ctx.opt.algebra, "--algebra");
  Outcome o;
  AlgebraCheck chk;
  if (algebra_kind(ctx.wb(), ctx.opt.algebra) == Mode::Metric) {
    auto a = ctx.wb().quant_algebra(ctx.opt.algebra);
    chk = validate_algebra(a);
    o.result = {{"kind", "quantitative"}, {"size", a.size()}, {"violations", op_violations(a, chk)}};
  } else {
    auto a = ctx.wb().cont_algebra(ctx.opt.algebra);
    chk = validate_algebra(a);
    o.result = {{"kind", "continuous"}, {"size", a.size()}, {"violations", op_violations(a, chk)}};
  }
  o.result["algebra"] = ctx.opt.algebra;
  o.verdict = chk.ok();
  return o;
}

// --- satisfies / definable -------------------------------------------------

Outcome satisfies(Context& ctx) {
  need(ctx.opt.algebra, "--algebra");
  need(ctx.opt.eq, "--eq");
  const auto& wb = ctx.wb();
  const auto decls = wb.equation_list(ctx.opt.eq);
  Outcome o;
  Json verdicts = Json::array();
  if (algebra_kind(wb, ctx.opt.algebra) == Mode::Metric) {
    auto a = wb.quant_algebra(ctx.opt.algebra);
    ctx.bound_carrier(a.size(), "algebra");
    const auto& c = a.carrier().carrier();
    for (std::size_t i = 0; i < decls.size(); ++i) {
      auto v = satisfies_quant(a, decls[i].as_quant(), ctx.opt.max_maps);
      Json j = {{"name", eq_name(decls[i], ctx.opt.eq, i)}, {"equation", serialize_equation(decls[i])}, {"ok", v.ok}};
      if (v.witness) {
        j["witness"] = interpretation(c, *v.witness);
        j["left"] = c.label(v.left_value);
        j["right"] = c.label(v.right_value);
        j["distance"] = v.achieved.to_string();
      }
      o.verdict = o.verdict && v.ok;
      verdicts.push_back(std::move(j));
    }
  } else {
    auto a = wb.cont_algebra(ctx.opt.algebra);
    ctx.bound_carrier(a.size(), "algebra");
    const auto& c = a.carrier().carrier();
    for (std::size_t i = 0; i < decls.size(); ++i) {
      auto v = satisfies_cont(a, decls[i].as_cont(), ctx.opt.max_maps);
      Json j = {{"name", eq_name(decls[i], ctx.opt.eq, i)}, {"equation", serialize_equation(decls[i])}, {"ok", v.ok}};
      if (v.witness) {
        j["witness"] = interpretation(c, *v.witness);
        if (v.left) j["left"] = v.left->to_string(c);
        if (v.right) j["right"] = v.right->to_string(c);
      }
      o.verdict = o.verdict && v.ok;
      verdicts.push_back(std::move(j));
    }
  }
  o.result = {{"algebra", ctx.opt.algebra}, {"equations", verdicts}};
  return o;
}

Outcome definable(Context& ctx) {
  need(ctx.opt.algebra, "--algebra");
  need(ctx.opt.term, "--term");
  auto a = ctx.wb().cont_algebra(ctx.opt.algebra);
  ctx.bound_carrier(a.size(), "algebra");
  auto t = parse_ext_term(ctx.opt.term);
  auto v = is_definable(a, t, ctx.opt.max_maps);
  Outcome o;
  o.verdict = v.ok;
  o.result = {{"algebra", ctx.opt.algebra}, {"term", t.to_string()}};
  if (v.witness) {
    o.result["witness"] = interpretation(a.carrier().carrier(), *v.witness);
    if (v.value) o.result["value"] = v.value->to_string(a.carrier().carrier());
  }
  return o;
}

// --- colimits --------------------------------------------------------------

Json quotient_json(const QuotientSpace& q) {
  return {{"colimit", to_json(q.space)}, {"unit", labels(q.space.carrier(), q.unit.table)}};
}

Outcome colimit_precongruence(Context& ctx) {
  need(ctx.opt.space, "--space");
  auto M = ctx.wb().space(ctx.opt.space);
  auto c = precongruence(M);
  auto q = basic_weight_colimit(c);
  bool iso = isometric_by_labels(q.space, M);
  Outcome o;
  o.verdict = iso;
  o.result = quotient_json(q);
  o.result["constraints"] = c.constraints.size();
  o.result["isometric"] = iso;
  return o;
}

Outcome colimit_constraints(Context& ctx) {
  need(ctx.opt.constraints, "--constraints");
  auto c = ctx.wb().constraint_set(ctx.opt.constraints);
  Outcome o;
  o.result = quotient_json(basic_weight_colimit(c));
  o.result["constraints"] = c.constraints.size();
  return o;
}

Outcome colimit_coinserter(Context& ctx) {
  need(ctx.opt.pair, "--pair");
  auto p = ctx.wb().pair(ctx.opt.pair);
  auto q = coinserter(p);
  auto r = check_coinserter_universal(p, q.poset, q.map.table, std::min(ctx.opt.max_target, ctx.opt.max_carrier),
                                      ctx.opt.max_maps);
  Outcome o;
  o.verdict = r.ok;
  o.result = {{"coinserter", to_json(q.poset)},
              {"map", labels(q.poset.carrier(), q.map.table)},
              {"reflexive", is_reflexive(p)},
              {"universal",
               {{"ok", r.ok},
                {"cocone", r.cocone},
                {"clause_a", r.clause_a},
                {"clause_b", r.clause_b},
                {"matches_construction", r.matches_construction}}}};
  if (!r.failure.empty()) o.result["universal"]["failure"] = r.failure;
  return o;
}

Outcome colimit_chain(Context& ctx) {
  need(ctx.opt.chain, "--chain");
  const auto& wb = ctx.wb();
  auto it = wb.chains.find(ctx.opt.chain);
  if (it == wb.chains.end()) throw InputError("no chain named '" + ctx.opt.chain + "'");
  Outcome o;
  Json cocone = Json::array();
  if (it->second.mode == Mode::Metric) {
    auto ch = wb.met_chain(ctx.opt.chain);
    auto colim = omega_colimit_met(ch);
    std::string failure;
    o.verdict = satisfies_met_colimit_characterization(ch, colim, &failure);
    for (const auto& m : colim.cocone) cocone.push_back(labels(colim.space.carrier(), m));
    o.result = {{"colimit", to_json(colim.space)}, {"cocone", cocone}};
    if (!failure.empty()) o.result["failure"] = failure;
  } else {
    auto ch = wb.pos_chain(ctx.opt.chain);
    auto colim = omega_colimit_pos(ch);
    for (const auto& m : colim.cocone) cocone.push_back(labels(colim.poset.carrier(), m));
    o.result = {{"colimit", to_json(colim.poset)}, {"cocone", cocone}};
  }
  return o;
}

Outcome commute_products(Context& ctx) {
  need(ctx.opt.with, "--with");
  const auto& wb = ctx.wb();
  CommutationReport r;
  Json args;
  if (!ctx.opt.chain.empty()) {
    auto it = wb.chains.find(ctx.opt.chain);
    if (it == wb.chains.end()) throw InputError("no chain named '" + ctx.opt.chain + "'");
    if (it->second.mode == Mode::Metric)
      r = check_product_commutation(wb.met_chain(ctx.opt.chain), wb.met_chain(ctx.opt.with));
    else
      r = check_product_commutation(wb.pos_chain(ctx.opt.chain), wb.pos_chain(ctx.opt.with));
    args = {{"kind", "chain"}, {"left", ctx.opt.chain}, {"right", ctx.opt.with}};
  } else if (!ctx.opt.pair.empty()) {
    r = check_coinserter_products(wb.pair(ctx.opt.pair), wb.pair(ctx.opt.with));
    args = {{"kind", "coinserter"}, {"left", ctx.opt.pair}, {"right", ctx.opt.with}};
  } else {
    throw InputError("commute products needs --chain or --pair");
  }
  Outcome o;
  o.verdict = r.ok;
  o.result = {{"diagrams", args},
              {"product_of_colimits", r.product_of_colimits},
              {"colimit_of_product", r.colimit_of_product}};
  if (!r.failure.empty()) o.result["failure"] = r.failure;
  return o;
}

// --- hsp close -------------------------------------------------------------

template <class Space, class Eq>
Json membership(const Algebra<Space>& a, const std::vector<Eq>& eqs, std::uint64_t max_maps, bool& member) {
  member = is_member(a, eqs, max_maps);
  Json j = {{"member", member}, {"size", a.size()}};
  if (member) return j;
  auto report = check_variety_membership(a, eqs, max_maps);
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (report.verdicts[i].ok) continue;
    j["failed_equation"] = eqs[i].name;
    if (report.verdicts[i].witness) j["witness"] = interpretation(a.carrier().carrier(), *report.verdicts[i].witness);
    break;
  }
  return j;
}

Algebra<FinMetric> lookup_algebra(const WorkbenchFile& wb, const std::string& n, const FinMetric*) {
  return wb.quant_algebra(n);
}
Algebra<FinPoset> lookup_algebra(const WorkbenchFile& wb, const std::string& n, const FinPoset*) {
  return wb.cont_algebra(n);
}

template <class Space, class Eq>
Outcome hsp_run(Context& ctx, const std::vector<std::string>& names, const std::vector<Eq>& eqs) {
  const auto& wb = ctx.wb();
  std::vector<Algebra<Space>> algs;
  for (const auto& n : names) {
    algs.push_back(lookup_algebra(wb, n, static_cast<const Space*>(nullptr)));
    ctx.bound_carrier(algs.back().size(), "algebra");
  }
  for (std::size_t i = 1; i < algs.size(); ++i)
    if (!(algs[i].sig() == algs[0].sig())) throw InputError("hsp close: algebras have different signatures");

  Outcome o;
  bool inputs_ok = true;
  Json inputs = Json::object();
  for (std::size_t i = 0; i < algs.size(); ++i) {
    bool m = true;
    inputs[names[i]] = membership(algs[i], eqs, ctx.opt.max_maps, m);
    inputs_ok = inputs_ok && m;
  }

  bool preserved = true;
  Json built = Json::array();
  auto record = [&](const std::string& kind, const std::string& name, const Algebra<Space>& a) {
    bool m = true;
    Json j = membership(a, eqs, ctx.opt.max_maps, m);
    j["construction"] = kind;
    j["name"] = name;
    preserved = preserved && m;
    built.push_back(std::move(j));
  };

  std::vector<Algebra<Space>> factors = algs;
  if (factors.size() == 1) factors.push_back(algs[0]);
  std::string pname = "product(";
  for (std::size_t i = 0; i < factors.size(); ++i) pname += (i ? "," : "") + names[std::min(i, names.size() - 1)];
  auto prod = product_algebra(algs[0].sig(), factors, ctx.opt.max_maps);
  record("product", pname + ")", prod.algebra);

  for (std::size_t i = 0; i < algs.size(); ++i)
    for (std::size_t p = 0; p < algs[i].size(); ++p) {
      auto sub = subalgebra_generated(algs[i], {p});
      record("subalgebra", "sub(" + names[i] + ",{" + algs[i].carrier().label(p) + "})", sub.algebra);
    }

  for (const auto& [hn, h] : wb.homos) {
    auto src = std::find(names.begin(), names.end(), h.source);
    if (src == names.end()) continue;
    if (algebra_kind(wb, h.target) != algebra_kind(wb, h.source)) throw InputError("homo '" + hn + "' mixes kinds");
    Homo<Space> hom{algs[src - names.begin()], lookup_algebra(wb, h.target, static_cast<const Space*>(nullptr)),
                    h.table};
    record("image", "image(" + hn + ")", homomorphic_image(hom).algebra);
  }

  // Endomorphism images depend only on the image set.
  for (std::size_t i = 0; i < algs.size(); ++i) {
    std::set<std::vector<std::size_t>> seen;
    for_each_function(algs[i].size(), algs[i].size(), ctx.opt.max_maps, [&](const PointMap& f) {
      std::vector<std::size_t> img(f.begin(), f.end());
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      if (seen.count(img)) return true;
      Homo<Space> hom{algs[i], algs[i], f};
      if (!check_homomorphism(hom).ok) return true;
      seen.insert(img);
      std::string label = "endo(" + names[i] + ",{";
      for (std::size_t k = 0; k < img.size(); ++k) label += (k ? "," : "") + algs[i].carrier().label(img[k]);
      record("image", label + "})", homomorphic_image(hom).algebra);
      return true;
    });
  }

  o.verdict = inputs_ok && preserved;
  o.result = {{"inputs", inputs}, {"constructions", built}, {"inputs_are_members", inputs_ok}, {"preserved", preserved}};
  return o;
}

Outcome hsp_close(Context& ctx) {
  need(ctx.opt.algebra, "--algebra");
  need(ctx.opt.equations, "--equations");
  const auto& wb = ctx.wb();
  std::vector<std::string> names{ctx.opt.algebra};
  if (!ctx.opt.with.empty()) names.push_back(ctx.opt.with);
  const auto decls = wb.equation_list(ctx.opt.equations);
  if (algebra_kind(wb, ctx.opt.algebra) == Mode::Metric) {
    std::vector<QuantEq> eqs;
    for (std::size_t i = 0; i < decls.size(); ++i) {
      eqs.push_back(decls[i].as_quant());
      eqs.back().name = eq_name(decls[i], ctx.opt.equations, i);
    }
    return hsp_run<FinMetric>(ctx, names, eqs);
  }
  std::vector<ContEq> eqs;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    eqs.push_back(decls[i].as_cont());
    eqs.back().name = eq_name(decls[i], ctx.opt.equations, i);
  }
  return hsp_run<FinPoset>(ctx, names, eqs);
}

// --- monads ----------------------------------------------------------------

MonadPresentation resolve_presentation(Context& ctx) {
  need(ctx.opt.presentation, "--presentation");
  if (ctx.file && ctx.file->presentations.count(ctx.opt.presentation)) return ctx.file->presentation(ctx.opt.presentation);
  const auto& kinds = builtin_kinds();
  if (std::find(kinds.begin(), kinds.end(), ctx.opt.presentation) == kinds.end())
    throw InputError("no presentation named '" + ctx.opt.presentation + "' and no builtin of that kind");
  return builtin_presentation(ctx.opt.presentation, ctx.opt.max_arity, parse_mode(ctx.opt.mode));
}

Json presentation_json(const MonadPresentation& P) {
  Json sizes = Json::array();
  for (std::size_t n = 0; n <= P.max_arity; ++n) sizes.push_back(P.size(n));
  return {{"name", P.name}, {"mode", mode_name(P.mode)}, {"max_arity", P.max_arity}, {"sizes", sizes}};
}

Outcome monad_laws(Context& ctx) {
  auto P = resolve_presentation(ctx);
  auto r = check_kleisli_laws(P, 100, std::max<std::uint64_t>(ctx.opt.max_maps, 50'000'000));
  Outcome o;
  o.verdict = r.ok;
  Json fails = Json::array();
  for (const auto& f : r.failures) fails.push_back({{"law", law_name(f.law)}, {"detail", f.describe(P)}});
  o.result = {{"presentation", presentation_json(P)}, {"failure_count", r.failure_count}, {"failures", fails}};
  return o;
}

Outcome monad_eqgen(Context& ctx) {
  auto P = resolve_presentation(ctx);
  auto v = generate_variety(P);
  std::string text = serialize(variety_file(v, P.name));
  std::map<std::string, std::size_t> counts;
  if (v.mode == Mode::Metric)
    for (const auto& e : v.quant) ++counts[e.name];
  else
    for (const auto& e : v.cont) ++counts[e.name];
  Outcome o;
  o.result = {{"presentation", presentation_json(P)},
              {"symbols", v.sig.size()},
              {"equations", counts},
              {"file", text}};
  o.text = text;
  return o;
}

template <class Space>
Outcome freeness_run(Context& ctx, const MonadPresentation& P) {
  auto v = generate_variety(P);
  ctx.bound_carrier(ctx.opt.target_size, "target");
  std::vector<Algebra<Space>> targets;
  for (std::size_t k = 1; k <= ctx.opt.target_size; ++k) {
    auto found = variety_algebras(P, v, discrete_arity<Space>(k), ctx.opt.max_maps);
    targets.insert(targets.end(), found.begin(), found.end());
  }
  auto r = check_freeness(P, ctx.opt.arity, v, targets, ctx.opt.max_maps);
  Outcome o;
  o.verdict = r.ok;
  o.result = {{"presentation", presentation_json(P)},
              {"n", ctx.opt.arity},
              {"targets", targets.size()},
              {"maps_checked", r.maps_checked},
              {"rejected", r.rejected.size()}};
  if (r.failure) {
    const auto& f = *r.failure;
    Json tab = Json::array();
    for (auto x : f.f) tab.push_back(targets[f.target].carrier().label(x));
    o.result["failure"] = {{"target", f.target}, {"map", tab}, {"reason", reason_name(f.reason)}, {"detail", f.detail}};
  }
  return o;
}

Outcome monad_freeness(Context& ctx) {
  auto P = resolve_presentation(ctx);
  if (P.mode == Mode::Metric) return freeness_run<FinMetric>(ctx, P);
  return freeness_run<FinPoset>(ctx, P);
}

Outcome kan_eval(Context& ctx) {
  need(ctx.opt.space, "--space");
  auto P = resolve_presentation(ctx);
  auto M = ctx.wb().space(ctx.opt.space);
  auto q = kan_evaluate(P, M);
  Outcome o;
  o.result = quotient_json(q);
  o.result["presentation"] = presentation_json(P);
  return o;
}

// --- terms and files -------------------------------------------------------

Outcome free_terms(Context& ctx) {
  need(ctx.opt.signature, "--signature");
  const auto& sig = ctx.wb().signature(ctx.opt.signature);
  std::vector<Label> gens;
  std::stringstream ss(ctx.opt.vars);
  for (std::string v; std::getline(ss, v, ',');)
    if (!v.empty()) gens.push_back(v);
  auto terms = enumerate_terms(sig, gens, ctx.opt.depth,
                               static_cast<std::size_t>(std::min<std::uint64_t>(ctx.opt.max_maps, SIZE_MAX)));
  Json list = Json::array();
  std::string text;
  for (const auto& t : terms) {
    list.push_back(t.to_string());
    text += t.to_string() + "\n";
  }
  Outcome o;
  o.result = {{"signature", ctx.opt.signature}, {"depth", ctx.opt.depth}, {"count", terms.size()}, {"terms", list}};
  o.text = text;
  return o;
}

Outcome fmt(Context& ctx) {
  Outcome o;
  if (ctx.opt.to == "json")
    o.raw = to_json(ctx.wb()).dump(2) + "\n";
  else if (ctx.opt.to == "qaw")
    o.raw = serialize(ctx.wb());
  else
    throw InputError("--to must be qaw or json");
  return o;
}

// --- rendering -------------------------------------------------------------

void render_text(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [&](const Json& v) {
    if (!v.is_array()) return false;
    return std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
  };
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      os << pad << k << ":\n";
      render_text(os, v, indent + 2);
    } else if (flat(v)) {
      os << pad << k << ": [";
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar(v[i]);
      os << "]\n";
    } else if (v.is_array()) {
      os << pad << k << ":\n";
      for (const auto& e : v) {
        if (e.is_object()) {
          os << pad << "  -\n";
          render_text(os, e, indent + 4);
        } else {
          os << pad << "  - " << (e.is_primitive() ? scalar(e) : e.dump()) << "\n";
        }
      }
    } else if (v.is_string() && v.get<std::string>().find('\n') != std::string::npos) {
      os << pad << k << ": |\n";
      std::stringstream lines(v.get<std::string>());
      for (std::string line; std::getline(lines, line);) os << pad << "  " << line << "\n";
    } else {
      os << pad << k << ": " << scalar(v) << "\n";
    }
  }
}

using Handler = std::function<Outcome(Context&)>;

}  // namespace

CliOutcome run_cli(const std::vector<std::string>& args) {
  Options opt;
  CLI::App app{"qaw: finite quantitative algebra workbench", "qaw"};
  app.set_version_flag("--version", kVersion);
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("-f,--file", opt.file, "workbench file (.qaw or .json)");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--max-carrier", opt.max_carrier, "largest carrier to enumerate over")
      ->envname("QAW_MAX_CARRIER");
  app.add_option("--max-maps", opt.max_maps, "largest function space to enumerate");
  app.add_flag("--no-timing", opt.no_timing, "report timing_ms as 0");

  std::map<CLI::App*, std::pair<std::string, Handler>> handlers;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, Handler h,
                  const std::string& path) {
    auto* s = parent->add_subcommand(name, desc);
    handlers[s] = {path, std::move(h)};
    return s;
  };
  auto group = [&](const std::string& name, const std::string& desc) {
    auto* s = app.add_subcommand(name, desc);
    s->require_subcommand(1);
    return s;
  };

  leaf(&app, "check-metric", "validate the metric axioms of a space", check_metric, "check-metric")
      ->add_option("--space", opt.space);
  leaf(&app, "check-algebra", "check that operations are nonexpanding / monotone", check_algebra, "check-algebra")
      ->add_option("--algebra", opt.algebra);
  {
    auto* s = leaf(&app, "satisfies", "check equations in an algebra", satisfies, "satisfies");
    s->add_option("--algebra", opt.algebra);
    s->add_option("--eq", opt.eq, "an eq/ineq declaration or an equations block");
  }
  {
    auto* s = leaf(&app, "definable", "check that an extended term is always defined", definable, "definable");
    s->add_option("--algebra", opt.algebra);
    s->add_option("--term", opt.term);
  }
  {
    auto* g = group("colimit", "compute colimits");
    leaf(g, "precongruence", "colimit of the precongruence of a space", colimit_precongruence, "colimit precongruence")
        ->add_option("--space", opt.space);
    auto* c = leaf(g, "coinserter", "coinserter of a parallel pair", colimit_coinserter, "colimit coinserter");
    c->add_option("--pair", opt.pair);
    c->add_option("--max-target", opt.max_target, "largest target poset for the universal check");
    leaf(g, "chain", "colimit of an omega-chain", colimit_chain, "colimit chain")->add_option("--chain", opt.chain);
    leaf(g, "constraints", "basic-weight colimit of a constraint set", colimit_constraints, "colimit constraints")
        ->add_option("--constraints", opt.constraints);
  }
  {
    auto* g = group("commute", "commutation of colimits with products");
    auto* s = leaf(g, "products", "compare colim(a x b) with colim a x colim b", commute_products, "commute products");
    s->add_option("--chain", opt.chain);
    s->add_option("--pair", opt.pair);
    s->add_option("--with", opt.with);
  }
  {
    auto* g = group("hsp", "closure under products, subalgebras and images");
    auto* s = leaf(g, "close", "check preservation of equations", hsp_close, "hsp close");
    s->add_option("--algebra", opt.algebra);
    s->add_option("--with", opt.with, "second factor");
    s->add_option("--equations", opt.equations);
  }
  auto presentation_opts = [&](CLI::App* s) {
    s->add_option("--presentation", opt.presentation, "declared presentation or builtin kind");
    s->add_option("--mode", opt.mode, "met or cpo (builtins)")->check(CLI::IsMember({"met", "cpo"}));
    s->add_option("--max-arity", opt.max_arity, "N (builtins)");
  };
  {
    auto* g = group("monad", "finitary monads at desk scale");
    presentation_opts(leaf(g, "laws", "check the Kleisli laws", monad_laws, "monad laws"));
    presentation_opts(leaf(g, "eqgen", "generate the presenting equations", monad_eqgen, "monad eqgen"));
    auto* f = leaf(g, "freeness", "check that T_n is free on n generators", monad_freeness, "monad freeness");
    presentation_opts(f);
    f->add_option("--arity", opt.arity, "n");
    f->add_option("--target-size", opt.target_size, "largest discrete target carrier");
  }
  {
    auto* g = group("kan", "extension to finite spaces");
    auto* s = leaf(g, "eval", "evaluate T on a finite space", kan_eval, "kan eval");
    presentation_opts(s);
    s->add_option("--space", opt.space);
  }
  {
    auto* s = leaf(&app, "free-terms", "enumerate terms by height", free_terms, "free-terms");
    s->add_option("--signature", opt.signature);
    s->add_option("--depth", opt.depth);
    s->add_option("--vars", opt.vars, "comma-separated generators");
  }
  leaf(&app, "fmt", "print the file in canonical form", fmt, "fmt")
      ->add_option("--to", opt.to)
      ->check(CLI::IsMember({"qaw", "json"}));

  CliOutcome out;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, err;
    int code = app.exit(e, o, err);
    out.out = o.str();
    out.err = err.str();
    out.exit_code = code == 0 ? 0 : 2;
    return out;
  }

  CLI::App* selected = &app;
  while (!selected->get_subcommands().empty()) selected = selected->get_subcommands().front();
  const auto& [path, handler] = handlers.at(selected);

  Json report = {{"command", path}, {"argv", args}, {"version", kVersion}};
  Context ctx(opt);
  auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    ctx.load();
    result = handler(ctx);
    out.exit_code = result.verdict ? 0 : 1;
    report["verdict"] = result.verdict;
    report["result"] = result.result;
  } catch (const BoundExceeded& e) {
    out.exit_code = 3;
    report["verdict"] = nullptr;
    report["result"] = {{"error", "bound exceeded"}, {"message", e.what()}};
    out.err = std::string("qaw: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    out.exit_code = 2;
    report["verdict"] = nullptr;
    report["result"] = {{"error", "input error"}, {"message", e.what()}};
    out.err = std::string("qaw: ") + e.what() + "\n";
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  report["timing_ms"] = opt.no_timing ? 0 : ms;
  report["exit_code"] = out.exit_code;
  report["input_hash"] = content_hash(ctx.source);

  if (result.raw && out.exit_code == 0) {
    out.out = *result.raw;
  } else if (opt.format == "json") {
    out.out = report.dump(2) + "\n";
  } else if (result.text && out.exit_code <= 1) {
    out.out = *result.text;
  } else {
    std::ostringstream os;
    render_text(os, report, 0);
    out.out = os.str();
  }
  return out;
}

}  // namespace qaw
