// Copyright 2026 The MDM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"
#include "helpers.hpp"
#include "mdm/corpus.hpp"
#include "mdm/semantics.hpp"

using namespace mdm;
using mdm::test::theory;

namespace {

// Breaks the glb law: returns the union instead of the intersection.
class UnionAlgebra : public PowersetAlgebra {
 public:
  using PowersetAlgebra::PowersetAlgebra;
  Element glb(const std::set<Element>& family) const override {
    Element out = 0;
    for (Element a : family) out |= a;
    return out;
  }
};

// Admits only families of size at most one, so a ⇒̃ S can leave 𝒜 only if
// the pointwise image grows, which it cannot: the law still holds.
class SmallFamilies : public PowersetAlgebra {
 public:
  using PowersetAlgebra::PowersetAlgebra;
  bool admissible(const std::set<Element>& family) const override { return family.size() <= 1; }
};

// Only families containing the bottom element are admissible; ⇒̃ moves
// bottom to a ⇒̃ ∅ which is not bottom for a ≠ top, so stability fails.
class BottomFamilies : public PowersetAlgebra {
 public:
  using PowersetAlgebra::PowersetAlgebra;
  bool admissible(const std::set<Element>& family) const override { return family.count(0) > 0; }
};

std::vector<Term> cd() { return {Term::app("c"), Term::app("d")}; }

Prop rename_binders(const Prop& p, int& k) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      return p;
    case Prop::Kind::Imp: {
      Prop l = rename_binders(p.lhs(), k);
      return Prop::imp(l, rename_binders(p.rhs(), k));
    }
    case Prop::Kind::Forall: {
      std::string v = "v" + std::to_string(k++);
      return Prop::forall(v, rename_binders(subst_term_in_prop(p.body(), p.name(), Term::var(v)), k));
    }
  }
  return p;
}

}  // namespace

TEST_CASE("powerset_algebra: examples") {
  PowersetAlgebra b1(1);
  CHECK(b1.domain().size() == 2);
  PowersetAlgebra b3(3);
  CHECK(b3.glb({}) == b3.top());
  for (Element b : b3.domain()) CHECK(b3.imp(b3.top(), b) == b);
  CHECK(b3.imp(0b001, 0b010) == 0b110);
  CHECK(b3.show(0b101) == "{0,2}");
  CHECK_THROWS_AS(PowersetAlgebra(0), std::invalid_argument);
  CHECK_THROWS_AS(PowersetAlgebra(6), std::invalid_argument);
}

TEST_CASE("pre-Heyting laws hold exhaustively for n <= 3") {
  for (unsigned n = 1; n <= 3; ++n) {
    auto rep = check_algebra_laws(PowersetAlgebra(n));
    CHECK(rep.ok);
    CHECK(rep.families == (std::size_t{1} << (std::size_t{1} << n)));
  }
  CHECK(check_algebra_laws(SmallFamilies(2)).ok);
}

TEST_CASE("law checker catches broken algebras") {
  auto u = check_algebra_laws(UnionAlgebra(2));
  CHECK_FALSE(u.ok);
  REQUIRE_FALSE(u.violations.empty());
  CHECK(u.violations[0].law == "glb");
  auto b = check_algebra_laws(BottomFamilies(2));
  CHECK_FALSE(b.ok);
  bool stability = false;
  for (const auto& v : b.violations) stability |= v.law == "imp-stability";
  CHECK(stability);
}

TEST_CASE("interpret: examples") {
  auto t = theory("empty");
  PowersetAlgebra alg(2);
  auto top = ValuedStructure::constant(alg, t.sig, alg.top());
  CHECK(interpret(top, parse_prop("P", &t.sig), {}, cd()) == alg.top());
  auto mid = ValuedStructure::constant(alg, t.sig, 0b01);
  CHECK(interpret(mid, parse_prop("P => P", &t.sig), {}, cd()) == alg.top());
  auto q = ValuedStructure::table(alg, t.sig, {{"Q(c)", alg.top()}, {"Q(d)", 0}}, alg.top());
  CHECK(interpret(q, parse_prop("!x. Q(x)", &t.sig), {}, cd()) == 0);
  CHECK(interpret(q, parse_prop("Q(x)", &t.sig), {{"x", Term::app("c")}}, cd()) == alg.top());
  CHECK_THROWS_AS(interpret(q, parse_prop("Q(x)", &t.sig), {}, cd()), SemanticsError);
  CHECK_THROWS_AS(interpret(q, parse_prop("P", &t.sig), {}, {}), SemanticsError);
}

TEST_CASE("check_lsub: examples") {
  auto t = theory("empty");
  PowersetAlgebra alg(2);
  auto vs = ValuedStructure::hashed(alg, t.sig, 7);
  Environment env{{"y", Term::app("d")}};
  CHECK(check_lsub(vs, parse_prop("Q(x)", &t.sig), "x", Term::app("c"), env, cd()));
  CHECK(check_lsub(vs, parse_prop("!y. R(x, y)", &t.sig), "x", Term::app("c"), env, cd()));
  // The substituted term mentions the bound variable: capture must be avoided.
  CHECK(check_lsub(vs, parse_prop("!y. R(x, y)", &t.sig), "x", Term::var("y"), env, cd()));
  CHECK(check_lsub(vs, parse_prop("P => Q(c)", &t.sig), "x", Term::app("d"), env, cd()));
}

TEST_CASE("check_lsub holds on generated samples") {
  auto t = parse_theory("pred P/0.\npred Q/1.\npred R/2.\nfun c/0.\nfun d/0.\nfun f/1.");
  PowersetAlgebra alg(2);
  auto universe = cd();
  auto samples = lsub_samples(t.sig, universe, 400, 4, 11);
  REQUIRE(samples.size() == 400);
  std::size_t failures = 0;
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    auto vs = ValuedStructure::hashed(alg, t.sig, seed);
    for (const auto& s : samples) failures += !check_lsub(vs, s.prop, s.var, s.term, s.env, universe);
  }
  CHECK(failures == 0);
}

TEST_CASE("interpret is invariant under alpha and irrelevant bindings") {
  auto t = parse_theory("pred P/0.\npred Q/1.\npred R/2.\nfun c/0.\nfun d/0.");
  PowersetAlgebra alg(3);
  auto vs = ValuedStructure::hashed(alg, t.sig, 5);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    Prop p = random_prop(t.sig, 4, {"x", "y"}, {"x"}, rng);
    Environment env{{"x", Term::app("d")}};
    Element v = interpret(vs, p, env, cd());
    int k = 0;
    Prop renamed = rename_binders(p, k);
    REQUIRE(alpha_eq(renamed, p));
    CHECK(interpret(vs, renamed, env, cd()) == v);
    Prop alpha = parse_prop(to_string(p), &t.sig);
    CHECK(interpret(vs, alpha, env, cd()) == v);
    Environment extended = env;
    extended.emplace("unused", Term::app("c"));
    CHECK(interpret(vs, p, extended, cd()) == v);
  }
  auto a = parse_prop("!x. R(x, y)", &t.sig);
  auto b = parse_prop("!z. R(z, y)", &t.sig);
  Environment env{{"y", Term::app("c")}};
  CHECK(interpret(vs, a, env, cd()) == interpret(vs, b, env, cd()));
}

TEST_CASE("is_model_inductive: examples") {
  auto e = theory("empty");
  PowersetAlgebra alg(2);
  auto vs = ValuedStructure::hashed(alg, e.sig, 1);
  auto props = enumerate_props(e.sig, 3, {"x"}, 1);
  auto ok = is_model_inductive(vs, e, props, all_environments({"x"}, cd()), cd(), 100);
  CHECK(ok.ok);
  CHECK(ok.unknown_pairs == 0);

  auto s = theory("selfapp");
  std::vector<Prop> pair = {parse_prop("A", &s.sig), parse_prop("A => A", &s.sig)};
  auto top = ValuedStructure::table(alg, s.sig, {{"A", alg.top()}}, 0);
  auto good = is_model_inductive(top, s, pair, {Environment{}}, cd(), 100);
  CHECK(good.ok);
  CHECK(good.pairs_checked == 1);
  auto bottom = ValuedStructure::table(alg, s.sig, {{"A", 0}}, 0);
  auto bad = is_model_inductive(bottom, s, pair, {Environment{}}, cd(), 100);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.failures.size() == 1);
  CHECK(bad.failures[0].va == 0);
  CHECK(bad.failures[0].vb == alg.top());
}

TEST_CASE("check_model2: examples") {
  auto s = theory("confusion");
  PowersetAlgebra alg(2);
  auto universe = std::vector<Term>{Term::app("c")};
  auto vs = ValuedStructure::table(alg, s.sig, {{"A", 0b01}}, alg.top());
  std::vector<Prop> props = {parse_prop("A", &s.sig), parse_prop("B(x)", &s.sig), parse_prop("A => B(x)", &s.sig),
                             parse_prop("!x. (A => B(x))", &s.sig), parse_prop("A => !x. B(x)", &s.sig)};
  auto tab = InterpretationTable::from_structure(vs, props, universe);
  auto rep = check_model2(tab, alg, s, universe, 200);
  CHECK(rep.ok());
  CHECK(rep.connectives.checked > 0);
  CHECK(rep.substitution.checked > 0);
  CHECK(rep.congruence.checked > 0);

  // Corrupt one implication entry.
  InterpretationTable bad = tab;
  bad.set(parse_prop("A => B(x)", &s.sig), {{"x", Term::app("c")}}, 0b10);
  auto rep2 = check_model2(bad, alg, s, universe, 200);
  CHECK_FALSE(rep2.connectives.ok());
  CHECK(rep2.connectives.failures[0].find("A => B(c)") == std::string::npos);
  CHECK(rep2.connectives.failures[0].find("A => B(x)") != std::string::npos);
}

TEST_CASE("check_model2 reports each condition independently") {
  auto s = theory("selfapp");
  PowersetAlgebra alg(1);
  InterpretationTable tab;
  tab.set(parse_prop("A", &s.sig), {}, 0);
  tab.set(parse_prop("A => A", &s.sig), {}, 1);
  auto rep = check_model2(tab, alg, s, {Term::var("x")}, 50);
  CHECK(rep.connectives.ok());
  CHECK_FALSE(rep.congruence.ok());
  CHECK(rep.substitution.ok());

  auto e = theory("empty");
  InterpretationTable sub;
  sub.set(parse_prop("Q(x)", &e.sig), {{"x", Term::app("c")}}, 1);
  sub.set(parse_prop("Q(c)", &e.sig), {}, 0);
  auto rep2 = check_model2(sub, alg, e, {Term::app("c")}, 50);
  CHECK_FALSE(rep2.substitution.ok());
  CHECK(rep2.congruence.ok());
}

TEST_CASE("interpretation table file format") {
  auto e = theory("empty");
  auto tab = parse_interpretation_table("# comment\nQ(x) | x:=c | 3\nP | | 1\n", e.sig);
  CHECK(tab.size() == 2);
  CHECK(tab.lookup(parse_prop("Q(x)", &e.sig), {{"x", Term::app("c")}}) == Element{3});
  CHECK(tab.lookup(parse_prop("P", &e.sig), {{"x", Term::app("c")}}) == Element{1});
  CHECK_FALSE(tab.lookup(parse_prop("Q(c)", &e.sig), {}));
  CHECK_THROWS_AS(parse_interpretation_table("P | | x\n", e.sig), SyntaxError);
  CHECK_THROWS_AS(parse_interpretation_table("P | 1\n", e.sig), SyntaxError);
  auto env = parse_environment("y:=d, x:=c", &e.sig);
  CHECK(to_string(env) == "x:=c, y:=d");
  CHECK_THROWS_AS(parse_environment("x:=y", &e.sig), SyntaxError);
  CHECK_THROWS_AS(parse_environment("x:=c, x:=d", &e.sig), SyntaxError);
}
