#include "qaw/json_io.hpp"

#include "qaw/error.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace qaw {

namespace {

Json labels(const std::vector<Label>& pts, const PointMap& m) {
  Json out = Json::array();
  for (auto x : m) out.push_back(pts[x]);
  return out;
}

Json dist_rows(std::size_t n, const std::vector<Dist>& t) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(to_json(t[i * n + j]));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json tail_json(std::size_t last, const ChainTail& tail) {
  if (const auto* lim = std::get_if<DeclaredLimits>(&tail)) return Json{{"limits", dist_rows(last, lim->limits)}};
  return "stable";
}

std::vector<Dist> table_from_rows(const Json& rows, std::size_t n) {
  if (!rows.is_array() || rows.size() != n) throw InputError("distance table must have one row per point");
  std::vector<Dist> t;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) throw InputError("distance rows must have one entry per point");
    for (const auto& v : row) t.push_back(dist_from_json(v));
  }
  return t;
}

std::vector<Label> point_list(const Json& j) {
  if (!j.is_array()) throw InputError("\"points\" must be an array of labels");
  return j.get<std::vector<Label>>();
}

template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed JSON input: ") + e.what());
  }
}

std::string mode_word(Mode m) { return m == Mode::Metric ? "met" : "cpo"; }

}  // namespace

Json to_json(const Dist& d) { return d.to_string(); }

Json to_json(const FinMetric& m) { return {{"points", m.points()}, {"dist", dist_rows(m.size(), m.table())}}; }

Json to_json(const FinPoset& p) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < p.size(); ++j) row.push_back(p.leq(i, j));
    rows.push_back(std::move(row));
  }
  return {{"points", p.points()}, {"leq", rows}};
}

Json to_json(const ConstraintSet& c) {
  Json cs = Json::array();
  for (const auto& k : c.constraints) cs.push_back({c.base.label(k.x), c.base.label(k.y), k.eps.to_string()});
  return {{"base", to_json(c.base)}, {"constraints", cs}};
}

Json to_json(const OmegaChainMet& c) {
  Json stages = Json::array(), links = Json::array();
  for (const auto& s : c.stages) stages.push_back(to_json(s));
  for (std::size_t i = 0; i < c.links.size(); ++i) links.push_back(labels(c.stages[i + 1].points(), c.links[i]));
  return {{"stages", stages}, {"links", links}, {"tail", tail_json(c.stages.empty() ? 0 : c.stages.back().size(), c.tail)}};
}

Json to_json(const OmegaChainPos& c) {
  Json stages = Json::array(), links = Json::array();
  for (const auto& s : c.stages) stages.push_back(to_json(s));
  for (std::size_t i = 0; i < c.links.size(); ++i) links.push_back(labels(c.stages[i + 1].points(), c.links[i]));
  return {{"stages", stages}, {"links", links}};
}

Dist dist_from_json(const Json& j) {
  if (j.is_string()) return Dist::parse(j.get<std::string>());
  if (j.is_number_unsigned()) return Dist(static_cast<long long>(j.get<unsigned long long>()));
  throw InputError("a distance must be a \"p/q\" string, \"inf\" or a natural number");
}

FinMetric metric_from_json(const Json& j) {
  return guarded([&] {
    auto pts = point_list(j.at("points"));
    auto t = table_from_rows(j.at("dist"), pts.size());
    return FinMetric(std::move(pts), std::move(t));
  });
}

FinPoset poset_from_json(const Json& j) {
  return guarded([&] {
    auto pts = point_list(j.at("points"));
    const auto& rows = j.at("leq");
    if (!rows.is_array() || rows.size() != pts.size()) throw InputError("\"leq\" must have one row per point");
    std::vector<char> leq;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != pts.size()) throw InputError("\"leq\" rows must have one entry per point");
      for (const auto& v : row) leq.push_back(v.get<bool>() ? 1 : 0);
    }
    return FinPoset(std::move(pts), std::move(leq));
  });
}

ConstraintSet constraints_from_json(const Json& j) {
  return guarded([&] {
    ConstraintSet c{metric_from_json(j.at("base")), {}};
    for (const auto& k : j.at("constraints")) {
      if (!k.is_array() || k.size() != 3) throw InputError("a constraint is [x, y, eps]");
      c.constraints.push_back({c.base.index(k[0].get<std::string>()), c.base.index(k[1].get<std::string>()),
                               dist_from_json(k[2])});
    }
    c.validate();
    return c;
  });
}

OmegaChainMet met_chain_from_json(const Json& j) {
  return guarded([&] {
    OmegaChainMet c;
    for (const auto& s : j.at("stages")) c.stages.push_back(metric_from_json(s));
    const auto& links = j.at("links");
    for (std::size_t i = 0; i < links.size(); ++i) {
      if (i + 1 >= c.stages.size()) throw InputError("more links than stage transitions");
      PointMap m;
      for (const auto& l : links[i]) m.push_back(c.stages[i + 1].index(l.get<std::string>()));
      c.links.push_back(std::move(m));
    }
    const auto& tail = j.value("tail", Json("stable"));
    if (tail.is_object()) {
      if (c.stages.empty()) throw InputError("declared limits need a stage");
      c.tail = DeclaredLimits{table_from_rows(tail.at("limits"), c.stages.back().size())};
    } else if (tail != "stable") {
      throw InputError("\"tail\" must be \"stable\" or {\"limits\": ..}");
    }
    c.validate();
    return c;
  });
}

// ---------------------------------------------------------------------------

Json to_json(const WorkbenchFile& f) {
  Json out = Json::object();
  auto carrier_points = [&](Mode kind, const std::string& name) -> const std::vector<Label>& {
    if (kind == Mode::Metric) return f.spaces.at(name).points;
    return f.posets.at(name).points();
  };
  for (const auto& [n, s] : f.spaces)
    out["spaces"][n] = {{"points", s.points}, {"dist", dist_rows(s.points.size(), s.table)}};
  for (const auto& [n, p] : f.posets) out["posets"][n] = to_json(p);
  for (const auto& [n, sig] : f.signatures) {
    Json ops = Json::array();
    for (const auto& s : sig.symbols()) ops.push_back({{"name", s.name}, {"arity", s.arity}});
    out["signatures"][n] = ops;
  }
  for (const auto& [n, a] : f.algebras) {
    const auto& sig = f.signatures.at(a.signature);
    const auto& pts = carrier_points(a.carrier_kind, a.carrier);
    Json ops = Json::object();
    for (std::size_t s = 0; s < a.ops.size(); ++s) ops[sig.at(s).name] = labels(pts, a.ops[s].values);
    out["algebras"][n] = {{"signature", a.signature},
                          {"carrier", {{"kind", a.carrier_kind == Mode::Metric ? "space" : "poset"}, {"name", a.carrier}}},
                          {"ops", ops}};
  }
  auto eq_json = [](const EquationDecl& e) {
    Json j = {{"kind", e.kind == EquationDecl::Kind::Equation ? "eq" : "ineq"},
              {"left", e.left.to_string()},
              {"right", e.right.to_string()}};
    if (!e.name.empty()) j["name"] = e.name;
    if (e.within) j["within"] = e.within->to_string();
    return j;
  };
  for (const auto& [n, e] : f.equations) out["equations"][n] = eq_json(e);
  for (const auto& [n, s] : f.equation_sets) {
    Json eqs = Json::array();
    for (const auto& e : s.equations) eqs.push_back(eq_json(e));
    Json j = {{"equations", eqs}};
    if (s.signature) j["signature"] = *s.signature;
    out["equation_sets"][n] = j;
  }
  for (const auto& [n, c] : f.constraints) {
    const auto& pts = f.spaces.at(c.base).points;
    Json cs = Json::array();
    for (const auto& k : c.constraints) cs.push_back({pts[k.x], pts[k.y], k.eps.to_string()});
    out["constraints"][n] = {{"base", c.base}, {"constraints", cs}};
  }
  for (const auto& [n, c] : f.chains) {
    Json links = Json::array();
    for (std::size_t i = 0; i < c.links.size(); ++i) links.push_back(labels(carrier_points(c.mode, c.stages[i + 1]), c.links[i]));
    Json j = {{"mode", c.mode == Mode::Metric ? "met" : "pos"}, {"stages", c.stages}, {"links", links}};
    if (c.mode == Mode::Metric) j["tail"] = tail_json(f.spaces.at(c.stages.back()).points.size(), c.tail);
    out["chains"][n] = j;
  }
  for (const auto& [n, p] : f.pairs) {
    const auto& b = f.posets.at(p.b).points();
    out["pairs"][n] = {{"a", p.a}, {"b", p.b}, {"f0", labels(b, p.f0)}, {"f1", labels(b, p.f1)}};
  }
  for (const auto& [n, decl] : f.presentations) {
    if (const auto* b = std::get_if<BuiltinPresentation>(&decl)) {
      out["presentations"][n] = {{"builtin", b->kind}, {"max_arity", b->max_arity}, {"mode", mode_word(b->mode)}};
      continue;
    }
    const auto& e = std::get<ExplicitPresentation>(decl);
    const auto& P = e.presentation;
    Json units = Json::array();
    for (std::size_t k = 0; k <= P.max_arity; ++k) units.push_back(labels(P.carrier(k).points(), P.unit[k]));
    Json j = {{"mode", mode_word(P.mode)}, {"max_arity", P.max_arity}, {"carriers", e.carriers}, {"units", units}};
    if (e.rule) {
      j["rule"] = *e.rule;
    } else {
      Json ext = Json::array();
      for (std::size_t a = 0; a <= P.max_arity; ++a)
        for (std::size_t b = 0; b <= P.max_arity; ++b) {
          PointMap k(a);
          for (std::size_t code = 0; code < P.ext[a][b].size(); ++code) {
            decode_tuple(code, P.size(b), k);
            ext.push_back({{"n", a},
                           {"m", b},
                           {"k", labels(P.carrier(b).points(), k)},
                           {"table", labels(P.carrier(b).points(), P.ext[a][b][code])}});
          }
        }
      j["ext"] = ext;
    }
    out["presentations"][n] = j;
  }
  for (const auto& [n, h] : f.homos) {
    const auto& t = f.algebras.at(h.target);
    out["homos"][n] = {{"source", h.source}, {"target", h.target}, {"table", labels(carrier_points(t.carrier_kind, t.carrier), h.table)}};
  }
  return out;
}

namespace {

// JSON input is rendered as DSL text and read by the DSL parser, so both
// surfaces share one validation path.
class TextWriter {
 public:
  std::string str() const { return os_.str(); }

  void write(const Json& root) {
    if (!root.is_object()) throw InputError("a workbench JSON document is an object");
    static const std::set<std::string> known = {"spaces", "posets", "signatures", "algebras", "equations",
                                                "equation_sets", "constraints", "chains", "pairs", "presentations",
                                                "homos"};
    for (const auto& [k, v] : root.items()) {
      if (!known.count(k)) throw InputError("unknown JSON section \"" + k + "\"");
      if (!v.is_object()) throw InputError("JSON section \"" + k + "\" must be an object");
    }
    section(root, "spaces", [&](const std::string& n, const Json& s) { space(n, s); });
    section(root, "posets", [&](const std::string& n, const Json& p) { poset(n, p); });
    section(root, "signatures", [&](const std::string& n, const Json& s) {
      os_ << "signature " << q(n) << " {\n";
      for (const auto& op : s) os_ << "  op " << q(op.at("name").get<std::string>()) << "/" << op.at("arity").get<std::size_t>() << ";\n";
      os_ << "}\n";
    });
    section(root, "algebras", [&](const std::string& n, const Json& a) {
      const auto& c = a.at("carrier");
      os_ << "algebra " << q(n) << " : " << q(a.at("signature").get<std::string>()) << " over "
          << c.at("kind").get<std::string>() << " " << q(c.at("name").get<std::string>()) << " {\n";
      for (const auto& [sym, t] : a.at("ops").items()) os_ << "  " << q(sym) << " = " << list(t) << ";\n";
      os_ << "}\n";
    });
    section(root, "equations", [&](const std::string& n, const Json& e) {
      os_ << e.at("kind").get<std::string>() << " " << q(n) << " : " << equation(e) << ";\n";
    });
    section(root, "equation_sets", [&](const std::string& n, const Json& s) {
      os_ << "equations " << q(n);
      if (s.contains("signature")) os_ << " : " << q(s.at("signature").get<std::string>());
      os_ << " {\n";
      for (const auto& e : s.at("equations")) {
        os_ << "  ";
        if (e.contains("name")) os_ << q(e.at("name").get<std::string>()) << " : ";
        os_ << equation(e) << ";\n";
      }
      os_ << "}\n";
    });
    section(root, "constraints", [&](const std::string& n, const Json& c) {
      os_ << "constraints " << q(n) << " over " << q(c.at("base").get<std::string>()) << " {\n";
      for (const auto& k : c.at("constraints"))
        os_ << "  " << q(k.at(0).get<std::string>()) << " " << q(k.at(1).get<std::string>()) << " "
            << dist_from_json(k.at(2)).to_string() << ";\n";
      os_ << "}\n";
    });
    section(root, "chains", [&](const std::string& n, const Json& c) { chain(root, n, c); });
    section(root, "pairs", [&](const std::string& n, const Json& p) {
      os_ << "pair " << q(n) << " : " << q(p.at("a").get<std::string>()) << " => " << q(p.at("b").get<std::string>())
          << " {\n  f0 = " << list(p.at("f0")) << ";\n  f1 = " << list(p.at("f1")) << ";\n}\n";
    });
    section(root, "presentations", [&](const std::string& n, const Json& p) { presentation(n, p); });
    section(root, "homos", [&](const std::string& n, const Json& h) {
      os_ << "homo " << q(n) << " : " << q(h.at("source").get<std::string>()) << " -> "
          << q(h.at("target").get<std::string>()) << " = " << list(h.at("table")) << ";\n";
    });
  }

 private:
  static std::string q(const std::string& s) { return quote_name(s); }

  static std::string list(const Json& a) {
    if (!a.is_array()) throw InputError("expected an array of labels");
    std::string out = "[";
    for (std::size_t i = 0; i < a.size(); ++i) out += (i ? ", " : "") + q(a[i].get<std::string>());
    return out + "]";
  }

  static std::string equation(const Json& e) {
    const bool eq = e.at("kind") == "eq";
    if (!eq && e.at("kind") != "ineq") throw InputError("equation kind must be \"eq\" or \"ineq\"");
    std::string out = e.at("left").get<std::string>() + (eq ? " == " : " <= ") + e.at("right").get<std::string>();
    if (e.contains("within")) out += " within " + dist_from_json(e.at("within")).to_string();
    return out;
  }

  template <class Fn>
  void section(const Json& root, const char* key, Fn&& fn) {
    if (!root.contains(key)) return;
    for (const auto& [n, v] : root.at(key).items()) fn(n, v);
  }

  void table(const std::vector<Label>& pts, const Json& rows, const std::string& prefix,
             const std::function<Dist(std::size_t, std::size_t)>& dflt) {
    auto t = table_from_rows(rows, pts.size());
    const std::size_t s = pts.size();
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        if (i == j ? !(t[i * s + i] == dflt(i, i)) : true)
          if (i == j || !(t[i * s + j] == dflt(i, j)) || !(t[j * s + i] == dflt(j, i)))
            os_ << "  " << prefix << q(pts[i]) << " " << q(pts[j]) << " = " << t[i * s + j].to_string() << ";\n";
  }

  void space(const std::string& n, const Json& s) {
    auto pts = point_list(s.at("points"));
    os_ << "space " << q(n) << " {\n  points";
    for (const auto& p : pts) os_ << " " << q(p);
    os_ << ";\n";
    table(pts, s.at("dist"), "d ", [](std::size_t i, std::size_t j) { return i == j ? Dist::zero() : Dist::inf(); });
    os_ << "}\n";
  }

  void poset(const std::string& n, const Json& p) {
    auto pts = point_list(p.at("points"));
    const auto& rows = p.at("leq");
    if (!rows.is_array() || rows.size() != pts.size()) throw InputError("\"leq\" must have one row per point");
    os_ << "poset " << q(n) << " {\n  points";
    for (const auto& x : pts) os_ << " " << q(x);
    os_ << ";\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != pts.size()) throw InputError("\"leq\" rows must have one entry per point");
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (i != j && rows[i][j].get<bool>()) os_ << "  leq " << q(pts[i]) << " " << q(pts[j]) << ";\n";
    }
    os_ << "}\n";
  }

  void chain(const Json& root, const std::string& n, const Json& c) {
    const std::string mode = c.at("mode").get<std::string>();
    os_ << "chain " << q(n) << " : " << mode << " {\n  stages";
    const auto stages = c.at("stages").get<std::vector<std::string>>();
    for (const auto& s : stages) os_ << " " << q(s);
    os_ << ";\n";
    const auto& links = c.at("links");
    for (std::size_t i = 0; i < links.size(); ++i) os_ << "  link " << i << " = " << list(links[i]) << ";\n";
    if (c.contains("tail") && c.at("tail").is_object()) {
      if (stages.empty() || !root.contains("spaces") || !root.at("spaces").contains(stages.back()))
        throw InputError("declared limits need the last stage among the spaces");
      const auto& last = root.at("spaces").at(stages.back());
      auto pts = point_list(last.at("points"));
      auto base = table_from_rows(last.at("dist"), pts.size());
      const std::size_t s = pts.size();
      os_ << "  tail limits {\n";
      table(pts, c.at("tail").at("limits"), "  ", [&](std::size_t i, std::size_t j) { return base[i * s + j]; });
      os_ << "  }\n";
    } else if (mode == "met") {
      os_ << "  tail stable;\n";
    }
    os_ << "}\n";
  }

  void presentation(const std::string& n, const Json& p) {
    if (p.contains("builtin")) {
      os_ << "presentation " << q(n) << " = builtin " << q(p.at("builtin").get<std::string>()) << " max-arity "
          << p.at("max_arity").get<std::size_t>() << " mode " << p.at("mode").get<std::string>() << ";\n";
      return;
    }
    const auto N = p.at("max_arity").get<std::size_t>();
    os_ << "presentation " << q(n) << " : " << p.at("mode").get<std::string>() << " max-arity " << N << " {\n";
    const auto carriers = p.at("carriers").get<std::vector<std::string>>();
    for (std::size_t k = 0; k < carriers.size(); ++k) os_ << "  carrier " << k << " = " << q(carriers[k]) << ";\n";
    const auto& units = p.at("units");
    for (std::size_t k = 1; k < units.size(); ++k) os_ << "  unit " << k << " = " << list(units[k]) << ";\n";
    if (p.contains("rule")) {
      os_ << "  ext = " << q(p.at("rule").get<std::string>()) << ";\n";
    } else {
      for (const auto& e : p.at("ext"))
        os_ << "  ext " << e.at("n").get<std::size_t>() << " " << e.at("m").get<std::size_t>() << " " << list(e.at("k"))
            << " = " << list(e.at("table")) << ";\n";
    }
    os_ << "}\n";
  }

  std::ostringstream os_;
};

}  // namespace

WorkbenchFile workbench_from_json(const Json& j) {
  return guarded([&] {
    TextWriter w;
    w.write(j);
    try {
      return parse_workbench(w.str());
    } catch (const DslError& e) {
      throw InputError(std::string("invalid JSON workbench: ") + e.what());
    }
  });
}

}  // namespace qaw
