#include "qaw/dsl.hpp"

#include "qaw/error.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace qaw {

// ---------------------------------------------------------------------------
// Declarations

FinMetric SpaceDecl::resolve() const { return FinMetric(points, table); }

namespace {

bool has_join(const ExtTerm& t) { return !t.is_base(); }

}  // namespace

QuantEq EquationDecl::as_quant() const {
  if (kind == Kind::Inequation) throw InputError("inequation '" + name + "' is not a metric equation");
  if (has_join(left) || has_join(right)) throw InputError("equation '" + name + "' contains a join");
  return {left.base(), right.base(), within.value_or(Dist::zero()), name};
}

ContEq EquationDecl::as_cont() const {
  if (within && !(*within == Dist::zero()))
    throw InputError("equation '" + name + "' has a nonzero bound; it is not a cpo equation");
  if (kind == Kind::Inequation) return inequation(left, right, name);
  return {left, right, name};
}

namespace {

template <class Map>
const auto& lookup(const Map& m, std::string_view name, const char* what) {
  auto it = m.find(std::string(name));
  if (it == m.end()) throw InputError(std::string("no ") + what + " named '" + std::string(name) + "'");
  return it->second;
}

}  // namespace

FinMetric WorkbenchFile::space(std::string_view name) const { return lookup(spaces, name, "space").resolve(); }

const FinPoset& WorkbenchFile::poset(std::string_view name) const { return lookup(posets, name, "poset"); }

const Signature& WorkbenchFile::signature(std::string_view name) const {
  return lookup(signatures, name, "signature");
}

QuantAlgebra WorkbenchFile::quant_algebra(std::string_view name) const {
  const auto& a = lookup(algebras, name, "algebra");
  if (a.carrier_kind != Mode::Metric) throw ModeMismatch("algebra '" + std::string(name) + "' is over a poset");
  return QuantAlgebra(signature(a.signature), space(a.carrier), a.ops);
}

ContAlgebra WorkbenchFile::cont_algebra(std::string_view name) const {
  const auto& a = lookup(algebras, name, "algebra");
  if (a.carrier_kind != Mode::Poset) throw ModeMismatch("algebra '" + std::string(name) + "' is over a space");
  return ContAlgebra(signature(a.signature), poset(a.carrier), a.ops);
}

ConstraintSet WorkbenchFile::constraint_set(std::string_view name) const {
  const auto& c = lookup(constraints, name, "constraint set");
  ConstraintSet out{space(c.base), c.constraints};
  out.validate();
  return out;
}

OmegaChainMet WorkbenchFile::met_chain(std::string_view name) const {
  const auto& c = lookup(chains, name, "chain");
  if (c.mode != Mode::Metric) throw ModeMismatch("chain '" + std::string(name) + "' is a poset chain");
  OmegaChainMet out;
  for (const auto& s : c.stages) out.stages.push_back(space(s));
  out.links = c.links;
  out.tail = c.tail;
  out.validate();
  return out;
}

OmegaChainPos WorkbenchFile::pos_chain(std::string_view name) const {
  const auto& c = lookup(chains, name, "chain");
  if (c.mode != Mode::Poset) throw ModeMismatch("chain '" + std::string(name) + "' is a metric chain");
  OmegaChainPos out;
  for (const auto& s : c.stages) out.stages.push_back(poset(s));
  out.links = c.links;
  out.validate();
  return out;
}

ParallelPair WorkbenchFile::pair(std::string_view name) const {
  const auto& p = lookup(pairs, name, "pair");
  ParallelPair out{poset(p.a), poset(p.b), p.f0, p.f1};
  out.validate();
  return out;
}

MonadPresentation WorkbenchFile::presentation(std::string_view name) const {
  const auto& p = lookup(presentations, name, "presentation");
  if (const auto* b = std::get_if<BuiltinPresentation>(&p)) return builtin_presentation(b->kind, b->max_arity, b->mode);
  return std::get<ExplicitPresentation>(p).presentation;
}

std::vector<EquationDecl> WorkbenchFile::equation_list(std::string_view name) const {
  if (auto it = equations.find(std::string(name)); it != equations.end()) return {it->second};
  return lookup(equation_sets, name, "equation").equations;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Pos {
  std::size_t line = 1, col = 1;
};

struct Token {
  enum class Kind { Ident, Quoted, Number, Punct, End };
  Kind kind;
  std::string text;
  Pos pos;
};

struct Located {
  std::string text;
  Pos pos;
};

// Diagnostic kinds map onto exception types.
struct Failure {
  std::string kind;
  Pos pos;
  std::string message;
};

[[noreturn]] void syntax(Pos p, const std::string& msg) { throw Failure{"syntax", p, msg}; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  Pos p;
  std::size_t i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++p.line;
      p.col = 1;
    } else {
      ++p.col;
    }
    ++i;
  };
  auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    Token t{Token::Kind::Punct, {}, p};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (i < src.size()) {
        if (ident_char(src[i])) {
          t.text += src[i];
          advance();
        } else if (src[i] == '-' && i + 1 < src.size() && ident_char(src[i + 1])) {
          t.text += '-';
          advance();
        } else {
          break;
        }
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Number;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t.text += src[i];
        advance();
      }
    } else if (c == '"') {
      t.kind = Token::Kind::Quoted;
      advance();
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '\n') break;
        advance();
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\') {
          if (i >= src.size()) break;
          d = src[i];
          advance();
        }
        t.text += d;
      }
      if (!closed) syntax(t.pos, "unterminated quoted name");
    } else {
      static constexpr std::string_view two[] = {"==", "<=", "->", "=>"};
      bool matched = false;
      for (auto op : two)
        if (src.substr(i, 2) == op) {
          t.text = std::string(op);
          advance();
          advance();
          matched = true;
          break;
        }
      if (!matched) {
        if (std::string_view("{}()[];,:=/-").find(c) == std::string_view::npos)
          syntax(p, std::string("unexpected character '") + c + "'");
        t.text = std::string(1, c);
        advance();
      }
    }
    out.push_back(std::move(t));
  }
  out.push_back({Token::Kind::End, {}, p});
  return out;
}

// ---------------------------------------------------------------------------
// Raw declarations, before names are resolved

struct RawEntry {  // `d a b = v`, constraint `a b v`, limit `a b = v`
  Located a, b;
  Dist value;
};

struct RawSpace {
  std::vector<Located> points;
  std::vector<RawEntry> entries;
};

struct RawPoset {
  std::vector<Located> points;
  std::vector<std::pair<Located, Located>> pairs;
};

struct RawTable {
  Located symbol;
  std::vector<Located> values;
};

struct RawAlgebra {
  Located signature, carrier;
  Mode kind;
  std::vector<RawTable> tables;
};

struct RawEquations {
  std::optional<Located> signature;
  std::vector<std::pair<EquationDecl, Pos>> equations;
};

struct RawConstraints {
  Located base;
  std::vector<RawEntry> items;
};

struct RawLink {
  std::size_t index;
  Pos pos;
  std::vector<Located> values;
};

struct RawChain {
  Mode mode;
  Pos pos;
  std::vector<Located> stages;
  std::vector<RawLink> links;
  bool limits = false;
  std::vector<RawEntry> limit_entries;
};

struct RawPair {
  Located a, b;
  std::optional<std::vector<Located>> f0, f1;
  Pos pos;
};

struct RawExt {
  std::size_t n, m;
  Pos pos;
  std::vector<Located> k, values;
};

struct RawPresentation {
  Pos pos;
  bool builtin = false;
  Located kind;
  std::size_t max_arity = 0;
  Mode mode = Mode::Metric;
  std::map<std::size_t, Located> carriers;
  std::map<std::size_t, std::pair<Pos, std::vector<Located>>> units;
  std::optional<Located> rule;
  std::vector<RawExt> ext;
};

struct RawHomo {
  Located source, target;
  std::vector<Located> values;
};

template <class T>
using Named = std::map<std::string, std::pair<Pos, T>>;

struct RawFile {
  Named<RawSpace> spaces;
  Named<RawPoset> posets;
  Named<std::vector<std::pair<Located, std::size_t>>> signatures;
  Named<RawAlgebra> algebras;
  Named<std::pair<EquationDecl, Pos>> equations;
  Named<RawEquations> equation_sets;
  Named<RawConstraints> constraints;
  Named<RawChain> chains;
  Named<RawPair> pairs;
  Named<RawPresentation> presentations;
  Named<RawHomo> homos;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Failure>& diags) : toks_(std::move(tokens)), diags_(diags) {}

  void file(RawFile& f) {
    while (!at_end()) declaration(f);
  }

  ExtTerm ext_term() {
    if (is_word("join")) {
      next();
      if (is_punct("[")) {
        next();
        std::vector<ExtTerm> fam;
        if (!is_punct("]")) {
          fam.push_back(ext_term());
          while (is_punct(",")) {
            next();
            fam.push_back(ext_term());
          }
        }
        const Pos p = peek().pos;
        expect("]");
        if (fam.empty()) syntax(p, "a join needs at least one member");
        return ExtTerm::join(std::move(fam));
      }
      expect_word("from");
      const Pos p = peek().pos;
      ExtTerm seed = ext_term();
      expect_word("step");
      Term step = term();
      try {
        return ExtTerm::generated(std::move(seed), std::move(step));
      } catch (const InputError& e) {
        syntax(p, e.what());
      }
    }
    return term();
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Ident && !is_identifier(t.text)) syntax(t.pos, "'" + t.text + "' cannot start a term");
    auto head = name("a term");
    if (!is_punct("(")) return Term::var(head.text);
    next();
    std::vector<Term> args;
    if (!is_punct(")")) {
      args.push_back(term());
      while (is_punct(",")) {
        next();
        args.push_back(term());
      }
    }
    expect(")");
    return Term::app(head.text, std::move(args));
  }

  void expect_end() {
    if (!at_end()) syntax(peek().pos, "unexpected '" + peek().text + "'");
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Punct && peek(ahead).text == p;
  }
  bool is_word(std::string_view w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Token::Kind::End: return "end of input";
      case Token::Kind::Quoted: return "\"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  void expect(std::string_view p) {
    if (!is_punct(p)) syntax(peek().pos, "expected '" + std::string(p) + "', found " + describe(peek()));
    next();
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) syntax(peek().pos, "expected '" + std::string(w) + "', found " + describe(peek()));
    next();
  }

  Located name(const char* what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident && t.kind != Token::Kind::Quoted)
      syntax(t.pos, std::string("expected ") + what + ", found " + describe(t));
    next();
    return {t.text, t.pos};
  }

  Located label() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) {
      next();
      return {t.text, t.pos};
    }
    return name("a point label");
  }

  std::size_t natural() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Number) syntax(t.pos, "expected a natural number, found " + describe(t));
    next();
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      syntax(t.pos, "number out of range");
    }
  }

  Dist rational() {
    const Token& t = peek();
    if (is_punct("-")) syntax(t.pos, "negative distance");
    if (is_word("inf")) {
      next();
      return Dist::inf();
    }
    if (t.kind != Token::Kind::Number) syntax(t.pos, "expected a distance, found " + describe(t));
    std::string text = next().text;
    if (is_punct("/")) {
      next();
      const Token& d = peek();
      if (d.kind != Token::Kind::Number) syntax(d.pos, "expected a denominator, found " + describe(d));
      if (d.text.find_first_not_of('0') == std::string::npos) syntax(d.pos, "zero denominator");
      text += "/" + next().text;
    }
    return Dist::parse(text);
  }

  Mode mode() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) syntax(t.pos, "expected a mode, found " + describe(t));
    next();
    if (t.text == "met") return Mode::Metric;
    if (t.text == "cpo" || t.text == "pos") return Mode::Poset;
    syntax(t.pos, "unknown mode '" + t.text + "'");
  }

  std::vector<Located> label_list() {
    expect("[");
    std::vector<Located> out;
    if (!is_punct("]")) {
      out.push_back(label());
      while (is_punct(",")) {
        next();
        out.push_back(label());
      }
    }
    expect("]");
    return out;
  }

  template <class T>
  T& declare(Named<T>& m, const Located& n, const char* kind) {
    std::string key = n.text;
    if (m.count(key)) {
      diags_.push_back({"duplicate", n.pos, std::string(kind) + " '" + n.text + "' is already declared"});
      key += '\x01' + std::to_string(duplicates_++);
    }
    return m.try_emplace(key, n.pos, T{}).first->second.second;
  }

  void declaration(RawFile& f);
  EquationDecl equation(EquationDecl::Kind kind);
  EquationDecl block_equation();

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Failure>& diags_;
  std::size_t duplicates_ = 0;
};

EquationDecl Parser::equation(EquationDecl::Kind kind) {
  EquationDecl e;
  e.kind = kind;
  e.left = ext_term();
  const Pos rel = peek().pos;
  expect(kind == EquationDecl::Kind::Equation ? "==" : "<=");
  e.right = ext_term();
  if (kind == EquationDecl::Kind::Equation && is_word("within")) {
    next();
    e.within = rational();
    if (e.within->is_inf()) syntax(rel, "an equation bound must be finite");
    if (has_join(e.left) || has_join(e.right)) syntax(rel, "a metric equation cannot contain joins");
  }
  return e;
}

EquationDecl Parser::block_equation() {
  std::string label;
  if ((peek().kind == Token::Kind::Ident || peek().kind == Token::Kind::Quoted) && is_punct(":", 1)) {
    label = next().text;
    next();
  }
  // the relation decides the kind; parse the left side first
  const std::size_t start = pos_;
  ext_term();
  const bool ineq = is_punct("<=");
  pos_ = start;
  auto e = equation(ineq ? EquationDecl::Kind::Inequation : EquationDecl::Kind::Equation);
  e.name = label;
  return e;
}

void Parser::declaration(RawFile& f) {
  const Token& kw = peek();
  if (kw.kind != Token::Kind::Ident) syntax(kw.pos, "expected a declaration, found " + describe(kw));
  const std::string word = kw.text;
  next();
  if (word == "space") {
    auto n = name("a space name");
    auto& d = declare(f.spaces, n, "space");
    expect("{");
    while (!is_punct("}")) {
      if (is_word("points")) {
        next();
        while (!is_punct(";")) d.points.push_back(label());
      } else if (is_word("d")) {
        next();
        RawEntry e{label(), label(), {}};
        expect("=");
        e.value = rational();
        d.entries.push_back(std::move(e));
      } else {
        syntax(peek().pos, "expected 'points' or 'd', found " + describe(peek()));
      }
      expect(";");
    }
    next();
  } else if (word == "poset") {
    auto n = name("a poset name");
    auto& d = declare(f.posets, n, "poset");
    expect("{");
    while (!is_punct("}")) {
      if (is_word("points")) {
        next();
        while (!is_punct(";")) d.points.push_back(label());
      } else if (is_word("leq")) {
        next();
        auto a = label();
        d.pairs.push_back({a, label()});
      } else {
        syntax(peek().pos, "expected 'points' or 'leq', found " + describe(peek()));
      }
      expect(";");
    }
    next();
  } else if (word == "signature") {
    auto n = name("a signature name");
    auto& d = declare(f.signatures, n, "signature");
    expect("{");
    while (!is_punct("}")) {
      expect_word("op");
      auto sym = name("a symbol name");
      expect("/");
      d.push_back({sym, natural()});
      expect(";");
    }
    next();
  } else if (word == "algebra") {
    auto n = name("an algebra name");
    auto& d = declare(f.algebras, n, "algebra");
    expect(":");
    d.signature = name("a signature name");
    expect_word("over");
    if (is_word("space")) d.kind = Mode::Metric;
    else if (is_word("poset")) d.kind = Mode::Poset;
    else syntax(peek().pos, "expected 'space' or 'poset', found " + describe(peek()));
    next();
    d.carrier = name("a carrier name");
    expect("{");
    while (!is_punct("}")) {
      RawTable t{name("a symbol name"), {}};
      expect("=");
      t.values = label_list();
      expect(";");
      d.tables.push_back(std::move(t));
    }
    next();
  } else if (word == "eq" || word == "ineq") {
    Located n;
    if ((peek().kind == Token::Kind::Ident || peek().kind == Token::Kind::Quoted) && is_punct(":", 1)) {
      n = name("an equation name");
      next();
    } else {
      // unnamed: named after its position
      n.pos = peek().pos;
      n.text = std::to_string(n.pos.line) + ":" + std::to_string(n.pos.col);
    }
    auto& d = declare(f.equations, n, "equation");
    d.second = peek().pos;
    d.first = equation(word == "eq" ? EquationDecl::Kind::Equation : EquationDecl::Kind::Inequation);
    d.first.name = n.text;
    expect(";");
  } else if (word == "equations") {
    auto n = name("an equations name");
    auto& d = declare(f.equation_sets, n, "equations block");
    if (is_punct(":")) {
      next();
      d.signature = name("a signature name");
    }
    expect("{");
    while (!is_punct("}")) {
      const Pos p = peek().pos;
      d.equations.push_back({block_equation(), p});
      expect(";");
    }
    next();
  } else if (word == "constraints") {
    auto n = name("a constraint set name");
    auto& d = declare(f.constraints, n, "constraint set");
    expect_word("over");
    d.base = name("a space name");
    expect("{");
    while (!is_punct("}")) {
      RawEntry e{label(), label(), {}};
      e.value = rational();
      expect(";");
      d.items.push_back(std::move(e));
    }
    next();
  } else if (word == "chain") {
    auto n = name("a chain name");
    auto& d = declare(f.chains, n, "chain");
    d.pos = n.pos;
    expect(":");
    d.mode = mode();
    expect("{");
    while (!is_punct("}")) {
      if (is_word("stages")) {
        next();
        while (!is_punct(";")) d.stages.push_back(name("a stage name"));
        expect(";");
      } else if (is_word("link")) {
        const Pos p = next().pos;
        RawLink l{natural(), p, {}};
        expect("=");
        l.values = label_list();
        expect(";");
        d.links.push_back(std::move(l));
      } else if (is_word("tail")) {
        const Pos p = next().pos;
        if (d.mode != Mode::Metric) syntax(p, "only metric chains have a tail");
        if (is_word("stable")) {
          next();
          d.limits = false;
          expect(";");
        } else {
          expect_word("limits");
          d.limits = true;
          expect("{");
          while (!is_punct("}")) {
            RawEntry e{label(), label(), {}};
            expect("=");
            e.value = rational();
            expect(";");
            d.limit_entries.push_back(std::move(e));
          }
          next();
        }
      } else {
        syntax(peek().pos, "expected 'stages', 'link' or 'tail', found " + describe(peek()));
      }
    }
    next();
  } else if (word == "pair") {
    auto n = name("a pair name");
    auto& d = declare(f.pairs, n, "pair");
    d.pos = n.pos;
    expect(":");
    d.a = name("a poset name");
    expect("=>");
    d.b = name("a poset name");
    expect("{");
    while (!is_punct("}")) {
      const Token& w = peek();
      if (w.kind != Token::Kind::Ident || (w.text != "f0" && w.text != "f1"))
        syntax(w.pos, "expected 'f0' or 'f1', found " + describe(w));
      const bool first = w.text == "f0";
      next();
      expect("=");
      (first ? d.f0 : d.f1) = label_list();
      expect(";");
    }
    next();
  } else if (word == "presentation") {
    auto n = name("a presentation name");
    auto& d = declare(f.presentations, n, "presentation");
    d.pos = n.pos;
    if (is_punct("=")) {
      next();
      expect_word("builtin");
      d.builtin = true;
      d.kind = name("a presentation kind");
      expect_word("max-arity");
      d.max_arity = natural();
      expect_word("mode");
      d.mode = mode();
      expect(";");
    } else {
      expect(":");
      d.mode = mode();
      expect_word("max-arity");
      d.max_arity = natural();
      expect("{");
      while (!is_punct("}")) {
        if (is_word("carrier")) {
          next();
          std::size_t k = natural();
          expect("=");
          d.carriers[k] = name("a carrier name");
        } else if (is_word("unit")) {
          const Pos p = next().pos;
          std::size_t k = natural();
          expect("=");
          d.units[k] = {p, label_list()};
        } else if (is_word("ext")) {
          const Pos p = next().pos;
          if (is_punct("=")) {
            next();
            d.rule = name("an ext rule");
          } else {
            RawExt e{natural(), 0, p, {}, {}};
            e.m = natural();
            e.k = label_list();
            expect("=");
            e.values = label_list();
            d.ext.push_back(std::move(e));
          }
        } else {
          syntax(peek().pos, "expected 'carrier', 'unit' or 'ext', found " + describe(peek()));
        }
        expect(";");
      }
      next();
    }
  } else if (word == "homo") {
    auto n = name("a homomorphism name");
    auto& d = declare(f.homos, n, "homomorphism");
    expect(":");
    d.source = name("an algebra name");
    expect("->");
    d.target = name("an algebra name");
    expect("=");
    d.values = label_list();
    expect(";");
  } else {
    syntax(kw.pos, "unknown declaration '" + word + "'");
  }
}

// ---------------------------------------------------------------------------
// Resolution

class Resolver {
 public:
  Resolver(const RawFile& raw, std::vector<Failure>& diags) : raw_(raw), diags_(diags) {}

  WorkbenchFile run() {
    WorkbenchFile out;
    each(raw_.spaces, [&](const std::string& n, Pos, const RawSpace& r) { space(out, n, r); });
    each(raw_.posets, [&](const std::string& n, Pos p, const RawPoset& r) { poset(out, n, p, r); });
    each(raw_.signatures, [&](const std::string& n, Pos, const auto& r) { signature(out, n, r); });
    each(raw_.algebras, [&](const std::string& n, Pos p, const RawAlgebra& r) { algebra(out, n, p, r); });
    each(raw_.equations, [&](const std::string& n, Pos, const auto& r) { out.equations[n] = r.first; });
    each(raw_.equation_sets, [&](const std::string& n, Pos, const RawEquations& r) { equations(out, n, r); });
    each(raw_.constraints, [&](const std::string& n, Pos, const RawConstraints& r) { constraints(out, n, r); });
    each(raw_.chains, [&](const std::string& n, Pos, const RawChain& r) { chain(out, n, r); });
    each(raw_.pairs, [&](const std::string& n, Pos, const RawPair& r) { pair(out, n, r); });
    each(raw_.presentations, [&](const std::string& n, Pos, const RawPresentation& r) { presentation(out, n, r); });
    each(raw_.homos, [&](const std::string& n, Pos p, const RawHomo& r) { homo(out, n, p, r); });
    return out;
  }

 private:
  // Resolution failures abandon the current declaration only.
  struct Abandon {};

  template <class T, class Fn>
  void each(const Named<T>& m, Fn&& fn) {
    for (const auto& [n, v] : m) {
      if (n.find('\x01') != std::string::npos) continue;
      try {
        fn(n, v.first, v.second);
      } catch (const Abandon&) {
      }
    }
  }

  [[noreturn]] void fail(const char* kind, Pos p, const std::string& msg) {
    diags_.push_back({kind, p, msg});
    throw Abandon{};
  }

  const std::vector<Label>* carrier_of(Mode kind, const Located& ref) {
    if (kind == Mode::Metric) {
      auto it = raw_.spaces.find(ref.text);
      if (it == raw_.spaces.end()) fail("unresolved", ref.pos, "no space named '" + ref.text + "'");
      return &labels(it->second.second.points);
    }
    auto it = raw_.posets.find(ref.text);
    if (it == raw_.posets.end()) fail("unresolved", ref.pos, "no poset named '" + ref.text + "'");
    return &labels(it->second.second.points);
  }

  const std::vector<Label>& labels(const std::vector<Located>& pts) {
    auto [it, fresh] = label_cache_.try_emplace(&pts);
    if (fresh)
      for (const auto& p : pts) it->second.push_back(p.text);
    return it->second;
  }

  std::size_t index(const std::vector<Label>& pts, const Located& l, const char* where) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i] == l.text) return i;
    fail("unresolved", l.pos, "no point '" + l.text + "' in " + where);
  }

  PointMap table(const std::vector<Label>& pts, const std::vector<Located>& values, const char* where) {
    PointMap out;
    for (const auto& v : values) out.push_back(index(pts, v, where));
    return out;
  }

  void unique_points(const std::vector<Located>& pts) {
    std::set<std::string> seen;
    for (const auto& p : pts)
      if (!seen.insert(p.text).second) fail("duplicate", p.pos, "point '" + p.text + "' is listed twice");
  }

  void space(WorkbenchFile& out, const std::string& n, const RawSpace& r) {
    unique_points(r.points);
    const auto& pts = labels(r.points);
    const std::size_t s = pts.size();
    std::vector<Dist> t(s * s, Dist::inf());
    for (std::size_t i = 0; i < s; ++i) t[i * s + i] = Dist::zero();
    std::set<std::pair<std::size_t, std::size_t>> given;
    std::vector<std::tuple<std::size_t, std::size_t, Dist>> entries;
    for (const auto& e : r.entries) {
      auto a = index(pts, e.a, "the space"), b = index(pts, e.b, "the space");
      if (!given.insert({a, b}).second) fail("duplicate", e.a.pos, "distance given twice");
      entries.emplace_back(a, b, e.value);
    }
    for (const auto& [a, b, v] : entries) {
      t[a * s + b] = v;
      if (!given.count({b, a})) t[b * s + a] = v;
    }
    out.spaces[n] = {pts, std::move(t)};
  }

  void poset(WorkbenchFile& out, const std::string& n, Pos p, const RawPoset& r) {
    unique_points(r.points);
    const auto& pts = labels(r.points);
    const std::size_t s = pts.size();
    std::vector<char> leq(s * s, 0);
    for (std::size_t i = 0; i < s; ++i) leq[i * s + i] = 1;
    for (const auto& [a, b] : r.pairs) leq[index(pts, a, "the poset") * s + index(pts, b, "the poset")] = 1;
    for (std::size_t k = 0; k < s; ++k)
      for (std::size_t i = 0; i < s; ++i)
        if (leq[i * s + k])
          for (std::size_t j = 0; j < s; ++j)
            if (leq[k * s + j]) leq[i * s + j] = 1;
    try {
      out.posets[n] = FinPoset(pts, std::move(leq));
    } catch (const AxiomViolation& e) {
      fail("axiom", p, std::string("poset '") + n + "': " + e.what());
    }
  }

  void signature(WorkbenchFile& out, const std::string& n, const std::vector<std::pair<Located, std::size_t>>& r) {
    Signature sig;
    for (const auto& [sym, arity] : r) {
      if (sig.find(sym.text)) fail("duplicate", sym.pos, "symbol '" + sym.text + "' is declared twice");
      sig.add(sym.text, arity);
    }
    out.signatures[n] = std::move(sig);
  }

  const std::vector<std::pair<Located, std::size_t>>& raw_signature(const Located& ref) {
    auto it = raw_.signatures.find(ref.text);
    if (it == raw_.signatures.end()) fail("unresolved", ref.pos, "no signature named '" + ref.text + "'");
    return it->second.second;
  }

  void algebra(WorkbenchFile& out, const std::string& n, Pos p, const RawAlgebra& r) {
    const auto& sig = raw_signature(r.signature);
    const auto& pts = *carrier_of(r.kind, r.carrier);
    std::vector<std::optional<OpTable>> ops(sig.size());
    for (const auto& t : r.tables) {
      std::size_t s = 0;
      while (s < sig.size() && sig[s].first.text != t.symbol.text) ++s;
      if (s == sig.size()) fail("unresolved", t.symbol.pos, "no symbol '" + t.symbol.text + "' in the signature");
      if (ops[s]) fail("duplicate", t.symbol.pos, "table for '" + t.symbol.text + "' given twice");
      const std::size_t arity = sig[s].second;
      const std::size_t cells = tuple_count(pts.size(), arity);
      if (t.values.size() != cells)
        fail("arity", t.symbol.pos,
             "table for '" + t.symbol.text + "' of arity " + std::to_string(arity) + " needs " + std::to_string(cells) +
                 " entries, has " + std::to_string(t.values.size()));
      ops[s] = OpTable{arity, table(pts, t.values, "the carrier")};
    }
    AlgebraDecl d{r.signature.text, r.kind, r.carrier.text, {}};
    for (std::size_t s = 0; s < sig.size(); ++s) {
      if (!ops[s]) fail("arity", p, "algebra '" + n + "' has no table for '" + sig[s].first.text + "'");
      d.ops.push_back(std::move(*ops[s]));
    }
    out.algebras[n] = std::move(d);
  }

  void check_against(const Signature& sig, const EquationDecl& e, Pos p) {
    try {
      check_term(sig, e.left);
      check_term(sig, e.right);
    } catch (const InputError& err) {
      fail("arity", p, err.what());
    }
  }

  void equations(WorkbenchFile& out, const std::string& n, const RawEquations& r) {
    EquationSetDecl d;
    if (r.signature) {
      const auto& raw = raw_signature(*r.signature);
      Signature sig;
      for (const auto& [sym, arity] : raw)
        if (!sig.find(sym.text)) sig.add(sym.text, arity);
      for (const auto& [e, p] : r.equations) check_against(sig, e, p);
      d.signature = r.signature->text;
    }
    for (const auto& [e, p] : r.equations) d.equations.push_back(e);
    out.equation_sets[n] = std::move(d);
  }

  const RawSpace& raw_space(const Located& ref) {
    auto it = raw_.spaces.find(ref.text);
    if (it == raw_.spaces.end()) fail("unresolved", ref.pos, "no space named '" + ref.text + "'");
    return it->second.second;
  }

  void constraints(WorkbenchFile& out, const std::string& n, const RawConstraints& r) {
    const auto& pts = labels(raw_space(r.base).points);
    ConstraintsDecl d{r.base.text, {}};
    for (const auto& e : r.items)
      d.constraints.push_back({index(pts, e.a, "the base"), index(pts, e.b, "the base"), e.value});
    out.constraints[n] = std::move(d);
  }

  void chain(WorkbenchFile& out, const std::string& n, const RawChain& r) {
    if (r.stages.empty()) fail("arity", r.pos, "chain '" + n + "' has no stages");
    std::vector<const std::vector<Label>*> stages;
    for (const auto& s : r.stages) stages.push_back(carrier_of(r.mode, s));
    ChainDecl d{r.mode, {}, std::vector<PointMap>(r.stages.size() - 1), StableTail{}};
    for (const auto& s : r.stages) d.stages.push_back(s.text);
    std::vector<char> seen(d.links.size(), 0);
    for (const auto& l : r.links) {
      if (l.index >= d.links.size())
        fail("arity", l.pos, "link " + std::to_string(l.index) + " has no following stage");
      if (seen[l.index]) fail("duplicate", l.pos, "link " + std::to_string(l.index) + " given twice");
      seen[l.index] = 1;
      if (l.values.size() != stages[l.index]->size())
        fail("arity", l.pos, "link " + std::to_string(l.index) + " needs " + std::to_string(stages[l.index]->size()) +
                                 " entries");
      d.links[l.index] = table(*stages[l.index + 1], l.values, "the next stage");
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) fail("arity", r.pos, "chain '" + n + "' is missing link " + std::to_string(i));
    if (r.limits) {
      const auto& last = raw_space(r.stages.back());
      const auto& pts = labels(last.points);
      RawSpace copy = last;
      Named<RawSpace> tmp;
      WorkbenchFile scratch;
      space(scratch, "last", copy);
      auto limits = scratch.spaces["last"].table;
      const std::size_t s = pts.size();
      std::set<std::pair<std::size_t, std::size_t>> given;
      std::vector<std::tuple<std::size_t, std::size_t, Dist>> entries;
      for (const auto& e : r.limit_entries) {
        auto a = index(pts, e.a, "the last stage"), b = index(pts, e.b, "the last stage");
        if (!given.insert({a, b}).second) fail("duplicate", e.a.pos, "limit given twice");
        entries.emplace_back(a, b, e.value);
      }
      for (const auto& [a, b, v] : entries) {
        limits[a * s + b] = v;
        if (!given.count({b, a})) limits[b * s + a] = v;
      }
      d.tail = DeclaredLimits{std::move(limits)};
    }
    out.chains[n] = std::move(d);
  }

  void pair(WorkbenchFile& out, const std::string& n, const RawPair& r) {
    const auto& a = *carrier_of(Mode::Poset, r.a);
    const auto& b = *carrier_of(Mode::Poset, r.b);
    if (!r.f0 || !r.f1) fail("arity", r.pos, "pair '" + n + "' needs both f0 and f1");
    for (const auto* f : {&*r.f0, &*r.f1})
      if (f->size() != a.size())
        fail("arity", r.pos, "maps of pair '" + n + "' need " + std::to_string(a.size()) + " entries");
    out.pairs[n] = {r.a.text, r.b.text, table(b, *r.f0, "the codomain"), table(b, *r.f1, "the codomain")};
  }

  void presentation(WorkbenchFile& out, const std::string& n, const RawPresentation& r) {
    if (r.builtin) {
      const auto& kinds = builtin_kinds();
      if (std::find(kinds.begin(), kinds.end(), r.kind.text) == kinds.end())
        fail("unresolved", r.kind.pos, "no builtin presentation '" + r.kind.text + "'");
      out.presentations[n] = BuiltinPresentation{r.kind.text, r.max_arity, r.mode};
      return;
    }
    const std::size_t N = r.max_arity;
    ExplicitPresentation d;
    MonadPresentation& P = d.presentation;
    P.name = n;
    P.mode = r.mode;
    P.max_arity = N;
    std::vector<const std::vector<Label>*> carriers;
    for (std::size_t k = 0; k <= N; ++k) {
      auto it = r.carriers.find(k);
      if (it == r.carriers.end()) fail("arity", r.pos, "presentation '" + n + "' has no carrier " + std::to_string(k));
      carriers.push_back(carrier_of(r.mode, it->second));
      d.carriers.push_back(it->second.text);
    }
    for (const auto& [k, c] : r.carriers)
      if (k > N) fail("arity", c.pos, "carrier " + std::to_string(k) + " is beyond max-arity");
    WorkbenchFile scratch;
    for (std::size_t k = 0; k <= N; ++k) {
      if (r.mode == Mode::Metric) {
        space(scratch, d.carriers[k], raw_space(r.carriers.at(k)));
        try {
          P.metric.push_back(scratch.spaces[d.carriers[k]].resolve());
        } catch (const AxiomViolation& e) {
          fail("axiom", r.carriers.at(k).pos, e.what());
        }
      } else {
        auto it = raw_.posets.find(d.carriers[k]);
        poset(scratch, d.carriers[k], it->second.first, it->second.second);
        P.order.push_back(scratch.posets[d.carriers[k]]);
      }
    }
    P.unit.resize(N + 1);
    for (const auto& [k, u] : r.units) {
      if (k > N) fail("arity", u.first, "unit " + std::to_string(k) + " is beyond max-arity");
      if (u.second.size() != k) fail("arity", u.first, "unit " + std::to_string(k) + " needs " + std::to_string(k) + " entries");
      P.unit[k] = table(*carriers[k], u.second, "the carrier");
    }
    for (std::size_t k = 1; k <= N; ++k)
      if (!r.units.count(k)) fail("arity", r.pos, "presentation '" + n + "' has no unit " + std::to_string(k));
    if (r.rule) {
      if (!r.ext.empty()) fail("syntax", r.ext.front().pos, "ext tables given together with an ext rule");
      std::string kind;
      for (const auto& k : builtin_kinds())
        if (builtin_ext_rule(k) == r.rule->text) kind = k;
      if (kind.empty()) fail("unresolved", r.rule->pos, "no ext rule '" + r.rule->text + "'");
      MonadPresentation B;
      try {
        B = builtin_presentation(kind, N, r.mode);
      } catch (const Error& e) {
        fail("arity", r.rule->pos, e.what());
      }
      if (B.metric != P.metric || B.order != P.order || B.unit != P.unit)
        fail("arity", r.rule->pos, "rule '" + r.rule->text + "' needs the carriers and units of the " + kind +
                                       " presentation");
      P.ext = std::move(B.ext);
      d.rule = r.rule->text;
    } else {
      P.ext.assign(N + 1, std::vector<std::vector<PointMap>>(N + 1));
      for (std::size_t a = 0; a <= N; ++a)
        for (std::size_t b = 0; b <= N; ++b)
          P.ext[a][b].assign(tuple_count(carriers[b]->size(), a), PointMap{});
      std::vector<std::vector<std::vector<char>>> seen(N + 1, std::vector<std::vector<char>>(N + 1));
      for (std::size_t a = 0; a <= N; ++a)
        for (std::size_t b = 0; b <= N; ++b) seen[a][b].assign(P.ext[a][b].size(), 0);
      for (const auto& e : r.ext) {
        if (e.n > N || e.m > N) fail("arity", e.pos, "ext arities beyond max-arity");
        if (e.k.size() != e.n) fail("arity", e.pos, "ext " + std::to_string(e.n) + " needs " + std::to_string(e.n) + " points in k");
        if (e.values.size() != carriers[e.n]->size())
          fail("arity", e.pos, "ext table needs " + std::to_string(carriers[e.n]->size()) + " entries");
        auto k = table(*carriers[e.m], e.k, "the target carrier");
        auto code = encode_tuple(k, carriers[e.m]->size());
        if (seen[e.n][e.m][code]) fail("duplicate", e.pos, "ext table given twice");
        seen[e.n][e.m][code] = 1;
        P.ext[e.n][e.m][code] = table(*carriers[e.m], e.values, "the target carrier");
      }
      for (std::size_t a = 0; a <= N; ++a)
        for (std::size_t b = 0; b <= N; ++b)
          for (std::size_t code = 0; code < seen[a][b].size(); ++code)
            if (!seen[a][b][code]) {
              PointMap k(a);
              decode_tuple(code, carriers[b]->size(), k);
              std::string ks;
              for (auto x : k) ks += (ks.empty() ? "" : ", ") + quote_name((*carriers[b])[x]);
              fail("arity", r.pos, "presentation '" + n + "' has no ext " + std::to_string(a) + " " +
                                       std::to_string(b) + " [" + ks + "]");
            }
    }
    out.presentations[n] = std::move(d);
  }

  void homo(WorkbenchFile& out, const std::string& n, Pos p, const RawHomo& r) {
    auto find = [&](const Located& ref) -> const RawAlgebra& {
      auto it = raw_.algebras.find(ref.text);
      if (it == raw_.algebras.end()) fail("unresolved", ref.pos, "no algebra named '" + ref.text + "'");
      return it->second.second;
    };
    const auto& s = find(r.source);
    const auto& t = find(r.target);
    const auto& src = *carrier_of(s.kind, s.carrier);
    const auto& dst = *carrier_of(t.kind, t.carrier);
    if (r.values.size() != src.size())
      fail("arity", p, "homomorphism '" + n + "' needs " + std::to_string(src.size()) + " entries");
    out.homos[n] = {r.source.text, r.target.text, table(dst, r.values, "the target carrier")};
  }

  const RawFile& raw_;
  std::vector<Failure>& diags_;
  std::map<const std::vector<Located>*, std::vector<Label>> label_cache_;
};

struct Outcome {
  WorkbenchFile file;
  std::vector<Failure> diags;
};

Outcome run_parser(std::string_view source) {
  Outcome out;
  RawFile raw;
  try {
    Parser(lex(source), out.diags).file(raw);
  } catch (const Failure& f) {
    out.diags.push_back(f);
    return out;
  }
  out.file = Resolver(raw, out.diags).run();
  return out;
}

[[noreturn]] void raise(const Failure& f) {
  if (f.kind == "syntax") throw SyntaxError(f.message, f.pos.line, f.pos.col);
  if (f.kind == "unresolved") throw UnresolvedName(f.message, f.pos.line, f.pos.col);
  if (f.kind == "duplicate") throw DuplicateName(f.message, f.pos.line, f.pos.col);
  if (f.kind == "arity") throw ArityMismatch(f.message, f.pos.line, f.pos.col);
  throw AxiomViolation(std::to_string(f.pos.line) + ":" + std::to_string(f.pos.col) + ": " + f.message);
}

template <class T, class Fn>
T parse_single(std::string_view source, Fn&& fn) {
  std::vector<Failure> diags;
  try {
    Parser p(lex(source), diags);
    T out = fn(p);
    p.expect_end();
    return out;
  } catch (const Failure& f) {
    raise(f);
  }
}

}  // namespace

WorkbenchFile parse_workbench(std::string_view source) {
  auto out = run_parser(source);
  if (!out.diags.empty()) {
    std::stable_sort(out.diags.begin(), out.diags.end(), [](const Failure& a, const Failure& b) {
      return std::pair(a.pos.line, a.pos.col) < std::pair(b.pos.line, b.pos.col);
    });
    raise(out.diags.front());
  }
  return std::move(out.file);
}

std::vector<Diagnostic> diagnose(std::string_view source) {
  auto out = run_parser(source);
  std::vector<Diagnostic> diags;
  for (const auto& f : out.diags) diags.push_back({f.kind, f.pos.line, f.pos.col, f.message});
  std::stable_sort(diags.begin(), diags.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return std::pair(a.line, a.col) < std::pair(b.line, b.col); });
  return diags;
}

Term parse_term(std::string_view source) {
  return parse_single<Term>(source, [](Parser& p) { return p.term(); });
}

ExtTerm parse_ext_term(std::string_view source) {
  return parse_single<ExtTerm>(source, [](Parser& p) { return p.ext_term(); });
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string label_list(const std::vector<Label>& pts, const PointMap& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) out += (i ? ", " : "") + quote_name(pts[m[i]]);
  return out + "]";
}

std::string points_line(const std::vector<Label>& pts) {
  std::string out = "  points";
  for (const auto& p : pts) out += " " + quote_name(p);
  return out + ";\n";
}

// Entries of a table that differ from a default, in the form the parser reads back.
void table_entries(std::ostringstream& os, const std::vector<Label>& pts, const std::vector<Dist>& t,
                   const std::function<Dist(std::size_t, std::size_t)>& dflt, const std::string& prefix) {
  const std::size_t s = pts.size();
  auto line = [&](std::size_t i, std::size_t j) {
    os << "  " << prefix << quote_name(pts[i]) << " " << quote_name(pts[j]) << " = " << t[i * s + j].to_string() << ";\n";
  };
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i; j < s; ++j) {
      if (i == j) {
        if (!(t[i * s + i] == dflt(i, i))) line(i, i);
        continue;
      }
      if (t[i * s + j] == t[j * s + i]) {
        if (!(t[i * s + j] == dflt(i, j)) || !(t[j * s + i] == dflt(j, i))) line(i, j);
      } else {
        line(i, j);
        line(j, i);
      }
    }
}

const std::vector<Label>& carrier_labels(const WorkbenchFile& f, Mode kind, const std::string& name) {
  if (kind == Mode::Metric) return f.spaces.at(name).points;
  return f.posets.at(name).points();
}

std::string mode_word(Mode m) { return m == Mode::Metric ? "met" : "cpo"; }

}  // namespace

std::string serialize_equation(const EquationDecl& e) {
  std::string out = e.left.to_string() + (e.kind == EquationDecl::Kind::Equation ? " == " : " <= ") + e.right.to_string();
  if (e.within) out += " within " + e.within->to_string();
  return out;
}

std::string serialize(const WorkbenchFile& f) {
  std::ostringstream os;
  bool first = true;
  auto begin = [&] {
    if (!first) os << "\n";
    first = false;
  };
  for (const auto& [n, s] : f.spaces) {
    begin();
    os << "space " << quote_name(n) << " {\n" << points_line(s.points);
    table_entries(os, s.points, s.table, [](std::size_t i, std::size_t j) { return i == j ? Dist::zero() : Dist::inf(); }, "d ");
    os << "}\n";
  }
  for (const auto& [n, p] : f.posets) {
    begin();
    os << "poset " << quote_name(n) << " {\n" << points_line(p.points());
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j)
        if (i != j && p.leq(i, j)) os << "  leq " << quote_name(p.label(i)) << " " << quote_name(p.label(j)) << ";\n";
    os << "}\n";
  }
  for (const auto& [n, sig] : f.signatures) {
    begin();
    os << "signature " << quote_name(n) << " {\n";
    for (const auto& s : sig.symbols()) os << "  op " << quote_name(s.name) << "/" << s.arity << ";\n";
    os << "}\n";
  }
  for (const auto& [n, a] : f.algebras) {
    begin();
    const auto& sig = f.signatures.at(a.signature);
    const auto& pts = carrier_labels(f, a.carrier_kind, a.carrier);
    os << "algebra " << quote_name(n) << " : " << quote_name(a.signature) << " over "
       << (a.carrier_kind == Mode::Metric ? "space " : "poset ") << quote_name(a.carrier) << " {\n";
    for (std::size_t s = 0; s < a.ops.size(); ++s)
      os << "  " << quote_name(sig.at(s).name) << " = " << label_list(pts, a.ops[s].values) << ";\n";
    os << "}\n";
  }
  for (const auto& [n, e] : f.equations) {
    begin();
    os << (e.kind == EquationDecl::Kind::Equation ? "eq " : "ineq ") << quote_name(n) << " : " << serialize_equation(e)
       << ";\n";
  }
  for (const auto& [n, s] : f.equation_sets) {
    begin();
    os << "equations " << quote_name(n);
    if (s.signature) os << " : " << quote_name(*s.signature);
    os << " {\n";
    for (const auto& e : s.equations) {
      os << "  ";
      if (!e.name.empty()) os << quote_name(e.name) << " : ";
      os << serialize_equation(e) << ";\n";
    }
    os << "}\n";
  }
  for (const auto& [n, c] : f.constraints) {
    begin();
    const auto& pts = f.spaces.at(c.base).points;
    os << "constraints " << quote_name(n) << " over " << quote_name(c.base) << " {\n";
    for (const auto& k : c.constraints)
      os << "  " << quote_name(pts[k.x]) << " " << quote_name(pts[k.y]) << " " << k.eps.to_string() << ";\n";
    os << "}\n";
  }
  for (const auto& [n, c] : f.chains) {
    begin();
    os << "chain " << quote_name(n) << " : " << (c.mode == Mode::Metric ? "met" : "pos") << " {\n  stages";
    for (const auto& s : c.stages) os << " " << quote_name(s);
    os << ";\n";
    for (std::size_t i = 0; i < c.links.size(); ++i)
      os << "  link " << i << " = " << label_list(carrier_labels(f, c.mode, c.stages[i + 1]), c.links[i]) << ";\n";
    if (c.mode == Mode::Metric) {
      if (const auto* lim = std::get_if<DeclaredLimits>(&c.tail)) {
        const auto& last = f.spaces.at(c.stages.back());
        const std::size_t s = last.points.size();
        os << "  tail limits {\n";
        std::ostringstream inner;
        table_entries(inner, last.points, lim->limits,
                      [&](std::size_t i, std::size_t j) { return last.table[i * s + j]; }, "  ");
        os << inner.str() << "  }\n";
      } else {
        os << "  tail stable;\n";
      }
    }
    os << "}\n";
  }
  for (const auto& [n, p] : f.pairs) {
    begin();
    const auto& b = f.posets.at(p.b).points();
    os << "pair " << quote_name(n) << " : " << quote_name(p.a) << " => " << quote_name(p.b) << " {\n"
       << "  f0 = " << label_list(b, p.f0) << ";\n  f1 = " << label_list(b, p.f1) << ";\n}\n";
  }
  for (const auto& [n, decl] : f.presentations) {
    begin();
    if (const auto* b = std::get_if<BuiltinPresentation>(&decl)) {
      os << "presentation " << quote_name(n) << " = builtin " << quote_name(b->kind) << " max-arity " << b->max_arity
         << " mode " << mode_word(b->mode) << ";\n";
      continue;
    }
    const auto& e = std::get<ExplicitPresentation>(decl);
    const auto& P = e.presentation;
    os << "presentation " << quote_name(n) << " : " << mode_word(P.mode) << " max-arity " << P.max_arity << " {\n";
    for (std::size_t k = 0; k <= P.max_arity; ++k) os << "  carrier " << k << " = " << quote_name(e.carriers[k]) << ";\n";
    for (std::size_t k = 1; k <= P.max_arity; ++k)
      os << "  unit " << k << " = " << label_list(P.carrier(k).points(), P.unit[k]) << ";\n";
    if (e.rule) {
      os << "  ext = " << quote_name(*e.rule) << ";\n";
    } else {
      for (std::size_t a = 0; a <= P.max_arity; ++a)
        for (std::size_t b = 0; b <= P.max_arity; ++b) {
          PointMap k(a);
          for (std::size_t code = 0; code < P.ext[a][b].size(); ++code) {
            decode_tuple(code, P.size(b), k);
            os << "  ext " << a << " " << b << " " << label_list(P.carrier(b).points(), k) << " = "
               << label_list(P.carrier(b).points(), P.ext[a][b][code]) << ";\n";
          }
        }
    }
    os << "}\n";
  }
  for (const auto& [n, h] : f.homos) {
    begin();
    const auto& t = f.algebras.at(h.target);
    os << "homo " << quote_name(n) << " : " << quote_name(h.source) << " -> " << quote_name(h.target) << " = "
       << label_list(carrier_labels(f, t.carrier_kind, t.carrier), h.table) << ";\n";
  }
  return os.str();
}

WorkbenchFile variety_file(const GeneratedVariety& v, const std::string& name) {
  WorkbenchFile f;
  f.signatures[name] = v.sig;
  EquationSetDecl set{name, {}};
  if (v.mode == Mode::Metric) {
    for (const auto& e : v.quant) set.equations.push_back({EquationDecl::Kind::Equation, e.name, e.left, e.right, e.eps});
  } else {
    for (const auto& e : v.cont) set.equations.push_back({EquationDecl::Kind::Equation, e.name, e.left, e.right, {}});
  }
  f.equation_sets[name] = std::move(set);
  return f;
}

}  // namespace qaw
