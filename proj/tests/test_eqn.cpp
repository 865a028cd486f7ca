#include "doctest.h"
#include "support.hpp"

#include "qaw/eqn.hpp"
#include "qaw/error.hpp"

using namespace qaw;

namespace {

Term v(const char* x) { return Term::var(x); }
Term mul(Term a, Term b) { return Term::app("mul", {std::move(a), std::move(b)}); }

Signature mul_sig() {
  Signature s;
  s.add("mul", 2);
  return s;
}

Signature monoid_sig() {
  Signature s;
  s.add("mul", 2);
  s.add("e", 0);
  return s;
}

// {e, a, b}: e the unit, {a, b} left-zero (xy = x).
std::vector<std::size_t> left_zero_with_unit() {
  std::vector<std::size_t> t(9);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y) t[x * 3 + y] = x == 0 ? y : y == 0 ? x : x;
  return t;
}

// {1, a, b}: a.a = b, b absorbing for a and b; order a <= b only.
ContAlgebra absorbing_monoid() {
  auto p = poset_from_pairs({"1", "a", "b"}, {{1, 2}});
  return ContAlgebra(mul_sig(), p, {{2, {0, 1, 2, 1, 2, 2, 2, 2, 2}}});
}

ExtTerm powers() { return ExtTerm::generated(v("x0"), mul(v("z"), v("x0"))); }

// Direct double loop over all interpretations.
bool quant_oracle(const QuantAlgebra& a, const QuantEq& e) {
  auto names = equation_vars(e);
  const std::size_t n = a.size(), k = names.size();
  for (std::size_t code = 0; code < qtest::power(n, k); ++code) {
    auto vals = qtest::decode(code, n, k);
    std::map<Label, std::size_t> f;
    for (std::size_t i = 0; i < k; ++i) f[names[i]] = vals[i];
    if (!(a.carrier().d(qtest::eval_oracle(a, f, e.left), qtest::eval_oracle(a, f, e.right)) <= e.eps)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("eqn") {
  TEST_CASE("reflexive equations hold") {
    qtest::Rng r(1);
    for (int i = 0; i < 20; ++i) {
      auto sig = qtest::small_signature(r);
      auto a = qtest::random_quant_algebra(r, sig, 3);
      auto t = qtest::random_term(r, sig, {"x0", "x1"}, 3);
      CHECK(satisfies_quant(a, {t, t, Dist(0)}).ok);
    }
  }

  TEST_CASE("almost commutativity") {
    auto m = FinMetric({"e", "a"}, {0, 1, 1, 0});
    QuantAlgebra mon(mul_sig(), m, {{2, {0, 1, 1, 1}}});
    QuantEq comm{mul(v("x0"), v("x1")), mul(v("x1"), v("x0")), Dist(1)};
    CHECK(quant_oracle(mon, comm));
    CHECK(satisfies_quant(mon, comm).ok);

    QuantAlgebra nc(mul_sig(), discrete_space({"e", "a", "b"}), {{2, left_zero_with_unit()}});
    CHECK_FALSE(quant_oracle(nc, comm));
    auto res = satisfies_quant(nc, comm);
    REQUIRE_FALSE(res.ok);
    CHECK(*res.witness == Interpretation{{"x0", 1}, {"x1", 2}});
    CHECK(res.left_value == 1);
    CHECK(res.right_value == 2);
    CHECK(res.achieved.is_inf());
  }

  TEST_CASE("satisfaction agrees with the double-loop oracle") {
    qtest::Rng r(2);
    int positive = 0;
    for (int iter = 0; iter < 150; ++iter) {
      auto sig = qtest::small_signature(r);
      auto a = qtest::random_quant_algebra(r, sig, 4);
      std::vector<Label> xs = {"x0", "x1", "x2"};
      QuantEq e{qtest::random_term(r, sig, xs, 2), qtest::random_term(r, sig, xs, 2),
                r.coin(0.3) ? Dist(0) : Dist(long(r.between(0, 12)), 4)};
      bool expected = quant_oracle(a, e);
      CHECK(satisfies_quant(a, e).ok == expected);
      positive += expected;
    }
    CHECK(positive > 10);
  }

  TEST_CASE("epsilon monotonicity and the classical case") {
    qtest::Rng r(3);
    for (int iter = 0; iter < 60; ++iter) {
      auto sig = qtest::small_signature(r);
      auto a = qtest::random_quant_algebra(r, sig, 3);
      std::vector<Label> xs = {"x0", "x1"};
      auto l = qtest::random_term(r, sig, xs, 2), rt = qtest::random_term(r, sig, xs, 2);
      Dist e1(long(r.between(0, 8)), 4);
      Dist e2 = e1 + Dist(long(r.between(0, 8)), 4);
      if (satisfies_quant(a, {l, rt, e1}).ok) CHECK(satisfies_quant(a, {l, rt, e2}).ok);
      bool equal = true;
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < a.size(); ++y)
          equal = equal && eval_term(a, {{"x0", x}, {"x1", y}}, l) == eval_term(a, {{"x0", x}, {"x1", y}}, rt);
      CHECK(satisfies_quant(a, {l, rt, Dist(0)}).ok == equal);
    }
  }

  TEST_CASE("renaming variables does not change satisfaction") {
    qtest::Rng r(4);
    for (int iter = 0; iter < 40; ++iter) {
      auto sig = qtest::small_signature(r);
      auto a = qtest::random_quant_algebra(r, sig, 3);
      auto l = qtest::random_term(r, sig, {"x0", "x1"}, 2), rt = qtest::random_term(r, sig, {"x0", "x1"}, 2);
      Substitution ren = {{"x0", v("y7")}, {"x1", v("a")}};
      CHECK(satisfies_quant(a, {l, rt, Dist(1, 2)}).ok ==
            satisfies_quant(a, {substitute(l, ren), substitute(rt, ren), Dist(1, 2)}).ok);
    }
  }

  TEST_CASE("interpret_extended") {
    auto a = absorbing_monoid();
    CHECK(interpret_extended(a, {{"x0", 1}}, v("x0")) == PartialValue::defined(1));
    // orbit a, a.a = b, b.a = b
    CHECK(interpret_extended(a, {{"x0", 1}}, powers()) == PartialValue::defined(2));

    ContAlgebra disc(mul_sig(), discrete_poset({"a", "b"}), {{2, {1, 1, 1, 1}}});
    CHECK(interpret_extended(disc, {{"x0", 0}}, powers()) == PartialValue::chain_failed(0));

    auto list = ExtTerm::join({v("x0"), mul(v("x0"), v("x0"))});
    CHECK(interpret_extended(a, {{"x0", 1}}, list) == PartialValue::defined(2));
    CHECK(interpret_extended(disc, {{"x0", 0}}, list) == PartialValue::chain_failed(0));
    CHECK_THROWS_AS(interpret_extended(a, {}, v("x0")), UnmappedVariable);
  }

  TEST_CASE("interpret_extended agrees with the member-by-member oracle") {
    qtest::Rng r(5);
    int defined = 0, undefined = 0;
    for (int iter = 0; iter < 150; ++iter) {
      auto sig = qtest::small_signature(r);
      auto a = qtest::random_cont_algebra(r, sig, 4);
      auto t = qtest::random_ext_term(r, sig, {"x0", "x1"}, 2);
      std::map<Label, std::size_t> f = {{"x0", r.below(a.size())}, {"x1", r.below(a.size())}};
      auto got = interpret_extended(a, f, t);
      auto want = qtest::ext_oracle(a, f, t);
      CHECK(got.is_defined() == want.defined);
      if (got.is_defined() && want.defined) CHECK(got.value() == want.value);
      (want.defined ? defined : undefined)++;
    }
    CHECK(defined > 10);
    CHECK(undefined > 10);
  }

  TEST_CASE("continuous satisfaction") {
    Signature sig = monoid_sig();
    // 2-chain bot < e with meet; e is the unit
    ContAlgebra chain(sig, chain_poset({"bot", "e"}), {{2, {0, 0, 0, 1}}, {0, {1}}});
    ContEq e{powers(), Term::app("e")};
    auto res = satisfies_cont(chain, e);
    REQUIRE_FALSE(res.ok);
    CHECK(*res.witness == Interpretation{{"x0", 0}});
    CHECK(*res.left == PartialValue::defined(0));

    ContAlgebra one(sig, chain_poset({"e"}), {{2, {0}}, {0, {0}}});
    CHECK(satisfies_cont(one, e).ok);
    CHECK(satisfies_cont(chain, {v("x0"), v("x0")}).ok);
  }

  TEST_CASE("inequations") {
    qtest::Rng r(6);
    for (int i = 0; i < 10; ++i) {
      auto a = qtest::random_cont_algebra(r, mul_sig(), 3);
      CHECK(satisfies_cont(a, inequation(v("x0"), v("x0"))).ok);
    }
    ContAlgebra meet(mul_sig(), chain_poset({"bot", "top"}), {{2, {0, 0, 0, 1}}});
    CHECK(satisfies_cont(meet, inequation(v("x0"), mul(v("x0"), v("x0")))).ok);

    ContAlgebra low(mul_sig(), chain_poset({"bot", "top"}), {{2, {0, 0, 0, 0}}});
    CHECK(satisfies_cont(low, inequation(mul(v("x0"), v("x0")), v("x0"))).ok);
    CHECK_FALSE(satisfies_cont(low, inequation(v("x0"), mul(v("x0"), v("x0")))).ok);
  }

  TEST_CASE("definability") {
    auto a = absorbing_monoid();
    CHECK(is_definable(a, mul(v("x0"), v("x1"))).ok);
    CHECK(is_definable(a, powers()).ok);

    // the group of order 2: a, a.a = 1, 1.a = a cycles
    ContAlgebra z2(mul_sig(), discrete_poset({"1", "a"}), {{2, {0, 1, 1, 0}}});
    auto res = is_definable(z2, powers());
    REQUIRE_FALSE(res.ok);
    CHECK(*res.witness == Interpretation{{"x0", 1}});
    CHECK(res.value->status() == PartialValue::Status::ChainConditionFailed);
  }

  TEST_CASE("variety membership") {
    auto sig = monoid_sig();
    QuantAlgebra mon(sig, discrete_space({"e", "a", "b"}), {{2, left_zero_with_unit()}, {0, {0}}});
    CHECK(check_variety_membership(mon, std::vector<QuantEq>{}).member);

    std::vector<QuantEq> axioms = {
        {mul(mul(v("x"), v("y")), v("z")), mul(v("x"), mul(v("y"), v("z"))), Dist(0), "assoc"},
        {mul(Term::app("e"), v("x")), v("x"), Dist(0), "left-unit"},
        {mul(v("x"), Term::app("e")), v("x"), Dist(0), "right-unit"},
    };
    auto ok = check_variety_membership(mon, axioms);
    CHECK(ok.member);
    CHECK(ok.verdicts.size() == 3);

    auto tables = mon.ops();
    tables[0].values[1 * 3 + 2] = 0;  // a.b := e
    QuantAlgebra magma(sig, mon.carrier(), tables);
    auto bad = check_variety_membership(magma, axioms);
    CHECK_FALSE(bad.member);
    CHECK_FALSE(bad.verdicts[0].ok);
    CHECK(bad.verdicts[0].witness.has_value());
    CHECK_FALSE(is_member(magma, axioms));
  }

  TEST_CASE("naturality of f^@ along homomorphisms") {
    qtest::Rng r(7);
    int checked = 0;
    for (int iter = 0; iter < 300 && checked < 40; ++iter) {
      auto sig = mul_sig();
      auto a = qtest::random_cont_algebra(r, sig, 3);
      auto b = qtest::random_cont_algebra(r, sig, 3);
      PointMap h(a.size());
      for (auto& x : h) x = r.below(b.size());
      if (!check_homomorphism(Homo<FinPoset>{a, b, h}).ok) continue;
      ++checked;
      auto t = qtest::random_ext_term(r, sig, {"x0"}, 2);
      for (std::size_t x = 0; x < a.size(); ++x) {
        auto va = interpret_extended(a, {{"x0", x}}, t);
        if (va.is_defined()) CHECK(interpret_extended(b, {{"x0", h[x]}}, t) == PartialValue::defined(h[va.value()]));
      }
    }
    CHECK(checked > 5);
  }
}
