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

#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mdm/syntax.hpp"

using namespace mdm;
using mdm::test::curry;

namespace {

Signature sig() {
  Signature s;
  s.add_predicate("P", 0);
  s.add_predicate("Q", 1);
  s.add_predicate("R", 2);
  s.add_predicate("A", 0);
  s.add_predicate("B", 0);
  s.add_function("c", 0);
  s.add_function("f", 1);
  return s;
}

Term rand_term(std::mt19937_64& rng, int depth) {
  static const char* vars[] = {"x", "y", "z"};
  int k = static_cast<int>(rng() % 4);
  if (depth == 0 || k < 2) return Term::var(vars[rng() % 3]);
  if (k == 2) return Term::app("c");
  return Term::app("f", {rand_term(rng, depth - 1)});
}

Prop rand_prop(std::mt19937_64& rng, int depth) {
  int k = static_cast<int>(rng() % 5);
  if (depth == 0 || k < 2) {
    switch (rng() % 3) {
      case 0:
        return Prop::atom("P");
      case 1:
        return Prop::atom("Q", {rand_term(rng, 2)});
      default:
        return Prop::atom("R", {rand_term(rng, 1), rand_term(rng, 1)});
    }
  }
  if (k < 4) return Prop::imp(rand_prop(rng, depth - 1), rand_prop(rng, depth - 1));
  static const char* vars[] = {"x", "y", "z"};
  return Prop::forall(vars[rng() % 3], rand_prop(rng, depth - 1));
}

Proof rand_proof(std::mt19937_64& rng, int depth, bool church) {
  static const char* vars[] = {"a", "b", "g"};
  static const char* tvars[] = {"x", "y"};
  int k = static_cast<int>(rng() % (church ? 7 : 5));
  if (depth == 0 || k < 2) return Proof::var(vars[rng() % 3]);
  if (k < 3) return Proof::lam(vars[rng() % 3], rand_proof(rng, depth - 1, church));
  if (k < 5) return Proof::app(rand_proof(rng, depth - 1, church), rand_proof(rng, depth - 1, church));
  if (k < 6) return Proof::tlam(tvars[rng() % 2], rand_proof(rng, depth - 1, church));
  return Proof::tapp(rand_proof(rng, depth - 1, church), rand_term(rng, 1));
}

}  // namespace

TEST_CASE("parse: examples") {
  Signature s = sig();
  CHECK(parse_prop("P", &s) == Prop::atom("P"));
  CHECK(curry("\\a. a a") == Proof::lam("a", Proof::app(Proof::var("a"), Proof::var("a"))));
  CHECK(parse_prop("!x. (A => B)", &s) == Prop::forall("x", Prop::imp(Prop::atom("A"), Prop::atom("B"))));
}

TEST_CASE("parse: precedence and errors") {
  Signature s = sig();
  CHECK(alpha_eq(parse_prop("A => B => A", &s), Prop::imp(Prop::atom("A"), Prop::imp(Prop::atom("B"), Prop::atom("A")))));
  CHECK(curry("a b g") == Proof::app(Proof::app(Proof::var("a"), Proof::var("b")), Proof::var("g")));
  CHECK(curry("a \\b. b g") == Proof::app(Proof::var("a"), Proof::lam("b", Proof::app(Proof::var("b"), Proof::var("g")))));
  CHECK(parse_term("c", &s) == Term::app("c"));
  CHECK(parse_term("c") == Term::var("c"));
  CHECK(parse_term("c()") == Term::app("c"));
  CHECK(parse_proof("a [f(c)]", Style::Church, &s) == Proof::tapp(Proof::var("a"), Term::app("f", {Term::app("c")})));
  CHECK_THROWS_AS(parse_prop("Q", &s), SyntaxError);
  CHECK_THROWS_AS(parse_prop("Q(c, c)", &s), SyntaxError);
  CHECK_THROWS_AS(parse_prop("Nope", &s), SyntaxError);
  CHECK_THROWS_AS(parse_proof("^x. a", Style::Curry), SyntaxError);
  CHECK_THROWS_AS(parse_proof("a [x]", Style::Curry), SyntaxError);
  CHECK_THROWS_AS(parse_prop("A =>", &s), SyntaxError);
  try {
    parse_prop("A => => B", &s);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("free_term_vars: examples") {
  auto Qx = Prop::atom("Q", {Term::var("x")});
  CHECK(free_term_vars(Prop::forall("x", Qx)).empty());
  CHECK(free_term_vars(Prop::imp(Qx, Prop::forall("x", Qx))) == std::set<std::string>{"x"});
  CHECK(free_term_vars(Prop::atom("R", {Term::var("x"), Term::var("y")})) == std::set<std::string>{"x", "y"});
}

TEST_CASE("subst_term_in_prop: examples") {
  auto c = Term::app("c");
  CHECK(subst_term_in_prop(Prop::atom("Q", {Term::var("x")}), "x", c) == Prop::atom("Q", {c}));
  auto p = Prop::forall("y", Prop::atom("R", {Term::var("x"), Term::var("y")}));
  auto r = subst_term_in_prop(p, "x", Term::var("y"));
  REQUIRE(r.is_forall());
  CHECK(r.name() != "y");
  CHECK(alpha_eq(r, Prop::forall("w", Prop::atom("R", {Term::var("y"), Term::var("w")}))));
  Signature s = sig();
  auto a = parse_prop("!x. Q(x) => R(x, y)", &s);
  CHECK(alpha_eq(subst_term_in_prop(a, "x", Term::var("x")), a));
}

TEST_CASE("subst_proof: examples") {
  auto r = subst_proof(Proof::lam("b", Proof::var("a")), "a", Proof::var("b"));
  REQUIRE(r.is_lam());
  CHECK(r.name() != "b");
  CHECK(r.body() == Proof::var("b"));
  auto mu = curry("m n");
  CHECK(subst_proof(Proof::var("a"), "a", mu) == mu);
  auto id = Proof::lam("a", Proof::var("a"));
  CHECK(subst_proof(id, "a", mu) == id);
}

TEST_CASE("subst_term_in_proof: examples") {
  auto c = Term::app("c");
  CHECK(subst_term_in_proof(Proof::tapp(Proof::var("a"), Term::var("x")), "x", c) == Proof::tapp(Proof::var("a"), c));
  auto t = Proof::tlam("x", Proof::var("a"));
  CHECK(subst_term_in_proof(t, "x", c) == t);
  CHECK(subst_term_in_proof(Proof::var("a"), "x", c) == Proof::var("a"));
  CHECK_THROWS_AS(subst_term_in_proof(Proof::var("a"), "x", c, Style::Curry), std::invalid_argument);
  // Capture avoidance on term binders.
  auto u = Proof::tlam("y", Proof::tapp(Proof::var("a"), Term::var("x")));
  auto r = subst_term_in_proof(u, "x", Term::var("y"));
  CHECK(r.name() != "y");
  CHECK(r.body().term_arg() == Term::var("y"));
}

TEST_CASE("apply_capture_subst: examples") {
  CaptureSubstitution s{{{"a", Proof::var("b")}}};
  CHECK(apply_capture_subst(s, Proof::lam("b", Proof::var("a"))) == Proof::lam("b", Proof::var("b")));
  auto m1 = curry("(\\z. z) u");
  auto m2 = curry("v v");
  CaptureSubstitution s2{{{"a1", m1}, {"a2", m2}}};
  CHECK(apply_capture_subst(s2, curry("a1 a2")) == Proof::app(m1, m2));
  auto nu = curry("\\b. b c");
  CHECK(apply_capture_subst(CaptureSubstitution{{{"a", m1}}}, nu) == nu);
  // Order matters: the first pair is applied first.
  CaptureSubstitution s3{{{"a", Proof::var("b")}, {"b", Proof::var("c")}}};
  CHECK(apply_capture_subst(s3, Proof::var("a")) == Proof::var("c"));
  CaptureSubstitution s4{{{"b", Proof::var("c")}, {"a", Proof::var("b")}}};
  CHECK(apply_capture_subst(s4, Proof::var("a")) == Proof::var("b"));
}

TEST_CASE("is_neutral: examples") {
  CHECK(is_neutral(Proof::var("a")));
  CHECK_FALSE(is_neutral(Proof::lam("a", Proof::var("a"))));
  CHECK(is_neutral(curry("(\\a. a) b")));
  CHECK_FALSE(is_neutral(Proof::tlam("x", Proof::var("a"))));
}

TEST_CASE("alpha_eq: examples") {
  auto Q = [](const char* v) { return Prop::atom("Q", {Term::var(v)}); };
  CHECK(alpha_eq(Prop::forall("x", Q("x")), Prop::forall("y", Q("y"))));
  CHECK_FALSE(alpha_eq(Q("x"), Q("y")));
  CHECK(alpha_eq(curry("\\a. a"), curry("\\b. b")));
  CHECK_FALSE(alpha_eq(curry("\\a. b"), curry("\\b. b")));
  CHECK_FALSE(alpha_eq(Prop::forall("x", Prop::forall("y", Prop::atom("R", {Term::var("x"), Term::var("y")}))),
                       Prop::forall("x", Prop::forall("y", Prop::atom("R", {Term::var("y"), Term::var("x")})))));
}

TEST_CASE("property: free variables after substitution") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 400; ++i) {
    Prop p = rand_prop(rng, 4);
    Term t = rand_term(rng, 2);
    auto fv = free_term_vars(p);
    bool was_free = fv.erase("x") > 0;
    if (was_free) fv.merge(free_term_vars(t));
    CHECK(free_term_vars(subst_term_in_prop(p, "x", t)) == fv);
  }
}

TEST_CASE("property: printer and parser round-trip") {
  Signature s = sig();
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    Prop p = rand_prop(rng, 4);
    if (p.size() > 12) continue;
    ++checked;
    CHECK(alpha_eq(parse_prop(to_string(p), &s), p));
  }
  CHECK(checked > 100);
  for (int i = 0; i < 500; ++i) {
    bool church = i % 2;
    Proof q = rand_proof(rng, 5, church);
    if (q.size() > 12) continue;
    Style st = church ? Style::Church : Style::Curry;
    CHECK(alpha_eq(parse_proof(to_string(q), st, &s), q));
  }
}

TEST_CASE("property: capture substitution differs only under capturing binders") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    Proof nu = rand_proof(rng, 4, false);
    Proof mu = rand_proof(rng, 2, false);
    Proof cap = apply_capture_subst(CaptureSubstitution{{{"a", mu}}}, nu);
    Proof avoid = subst_proof(nu, "a", mu);
    // With no binder of a free variable of mu above an occurrence of a, the
    // two substitutions agree up to alpha.
    auto fv = free_proof_vars(mu);
    std::function<bool(const Proof&, bool)> risky = [&](const Proof& p, bool under) -> bool {
      switch (p.kind()) {
        case Proof::Kind::Var:
          return under && p.name() == "a";
        case Proof::Kind::Lam:
          if (p.name() == "a") return false;
          return risky(p.body(), under || fv.count(p.name()) > 0);
        case Proof::Kind::App:
          return risky(p.fun(), under) || risky(p.arg(), under);
        default:
          return false;
      }
    };
    if (!risky(nu, false))
      CHECK(alpha_eq(cap, avoid));
    else
      CHECK_FALSE(alpha_eq(cap, avoid));
  }
}
