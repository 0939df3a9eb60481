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
#include "mdm/rewriting.hpp"

using namespace mdm;
using mdm::test::theory;

namespace {

std::set<std::string> keys(const std::vector<Prop>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(alpha_key(p));
  return out;
}

}  // namespace

TEST_CASE("theory files load") {
  auto e = theory("empty");
  CHECK(e.rules.empty());
  CHECK(e.sig.predicate_arity("Q") == 1u);
  auto s = theory("selfapp");
  REQUIRE(s.rules.size() == 1);
  CHECK(s.rules[0].oriented);
  auto c = theory("confusion");
  REQUIRE(c.rules.size() == 1);
  CHECK(c.rules[0].lhs.is_forall());
  CHECK(c.rules[0].rhs.is_imp());
  CHECK_FALSE(c.rules[0].oriented);
  auto a = theory("arith-toy");
  CHECK(a.rules.size() == 1);
  CHECK_THROWS_AS(parse_theory("pred P/0.\nrule P --> Q(x).\npred Q/1."), TheoryError);
  CHECK_THROWS_AS(parse_theory("fun f/1."), TheoryError);
  CHECK_THROWS_AS(parse_theory("pred P/0\n"), TheoryError);
  CHECK_THROWS_AS(parse_theory("pred P/0.\npred P/1."), TheoryError);
}

TEST_CASE("term rules") {
  auto t = parse_theory("pred N/1.\nfun z/0.\nfun s/1.\nfun p/1.\nrule p(s(x)) --> x.");
  REQUIRE(t.term_rules.size() == 1);
  auto n = rewrite_neighbors(t, parse_prop("N(p(s(z)))", &t.sig));
  REQUIRE(n.size() == 1);
  CHECK(alpha_eq(n[0], parse_prop("N(z)", &t.sig)));
  CHECK(congruent(t, parse_prop("N(p(s(p(s(z)))))", &t.sig), parse_prop("N(z)", &t.sig), 100).yes());
}

TEST_CASE("rewrite_neighbors: examples") {
  auto t = theory("selfapp");
  auto A = parse_prop("A", &t.sig);
  CHECK(keys(rewrite_neighbors(t, A)) == keys({parse_prop("A => A", &t.sig)}));
  auto AA = parse_prop("A => A", &t.sig);
  CHECK(keys(rewrite_neighbors(t, AA)) ==
        keys({A, parse_prop("(A => A) => A", &t.sig), parse_prop("A => A => A", &t.sig)}));
  auto e = theory("empty");
  CHECK(rewrite_neighbors(e, parse_prop("P => !x. Q(x)", &e.sig)).empty());
}

TEST_CASE("rewriting under binders respects alpha and capture") {
  auto t = theory("confusion");
  auto lhs = parse_prop("!y. (A => B(y))", &t.sig);
  auto n = rewrite_neighbors(t, lhs);
  REQUIRE(n.size() == 1);
  CHECK(alpha_eq(n[0], parse_prop("A => !z. B(z)", &t.sig)));
  // B(x) with x bound from outside the rule is not an instance.
  auto open = parse_prop("!x. (A => B(c))", &t.sig);
  CHECK(rewrite_neighbors(t, open).empty());
  // Rewriting below an enclosing quantifier.
  auto deep = parse_prop("A => !x. (A => B(x))", &t.sig);
  CHECK(keys(rewrite_neighbors(t, deep)).count(alpha_key(parse_prop("A => A => !x. B(x)", &t.sig))));
}

TEST_CASE("metavariables do not capture bound variables") {
  auto t = parse_theory("pred R/2.\npred S/1.\nrule S(x) --> !y. R(x, y).");
  // Forward: S(y) becomes ∀y'.R(y, y').
  auto n = rewrite_neighbors(t, parse_prop("S(y)", &t.sig));
  REQUIRE(n.size() == 1);
  CHECK(alpha_eq(n[0], parse_prop("!w. R(y, w)", &t.sig)));
  // Backward from ∀y.R(y, y): x would have to be the bound y, so no match.
  CHECK(rewrite_neighbors(t, parse_prop("!y. R(y, y)", &t.sig)).empty());
}

TEST_CASE("congruent: examples") {
  auto t = theory("selfapp");
  auto v = congruent(t, parse_prop("A", &t.sig), parse_prop("A => A", &t.sig), 10);
  CHECK(v.yes());
  CHECK(v.path_length == 1);
  auto e = theory("empty");
  CHECK(congruent(e, parse_prop("P", &e.sig), parse_prop("Q(c)", &e.sig), 10).no());
  auto r = congruent(t, parse_prop("A => B", &t.sig), parse_prop("A => B", &t.sig), 0);
  CHECK(r.yes());
  CHECK(r.path_length == 0);
  // B's class is {B}: saturation proves No.
  CHECK(congruent(t, parse_prop("A", &t.sig), parse_prop("B", &t.sig), 200).no());
  // Two infinite classes cannot be separated by bounded search.
  CHECK(congruent(t, parse_prop("A", &t.sig), parse_prop("A => B", &t.sig), 200).unknown());
  auto a = theory("arith-toy");
  CHECK(congruent(a, parse_prop("Geq0(s(s(zero)))", &a.sig), parse_prop("Geq0(zero)", &a.sig), 100).yes());
  CHECK(congruent(a, parse_prop("Geq0(s(zero))", &a.sig), parse_prop("P", &a.sig), 100).no());
}

TEST_CASE("congruent: equivalence and closure properties") {
  auto t = theory("selfapp");
  auto props = enumerate_props(t.sig, 5, {}, 1);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 60; ++i) {
    const Prop& a = props[rng() % props.size()];
    const Prop& b = props[rng() % props.size()];
    const Prop& c = props[rng() % props.size()];
    CHECK(congruent(t, a, a, 0).yes());
    auto ab = congruent(t, a, b, 2000);
    auto ba = congruent(t, b, a, 2000);
    CHECK(ab.kind == ba.kind);
    if (ab.yes() && congruent(t, b, c, 2000).yes()) {
      CongruenceVerdict ac;
      for (std::size_t f = 1000; f <= 64000 && !ac.yes(); f *= 2) ac = congruent(t, a, c, f);
      CHECK(ac.yes());
    }
    if (ab.yes()) {
      CHECK(congruent(t, Prop::imp(a, c), Prop::imp(b, c), 4000).yes());
      CHECK(congruent(t, Prop::imp(c, a), Prop::imp(c, b), 4000).yes());
      CHECK(congruent(t, Prop::forall("x", a), Prop::forall("x", b), 4000).yes());
    }
  }
}

TEST_CASE("rewrite_neighbors is symmetric") {
  for (const char* name : {"selfapp", "confusion", "arith-toy"}) {
    auto t = theory(name);
    auto props = enumerate_props(t.sig, 4, {"x"}, 2);
    for (const auto& p : props) {
      for (const auto& q : rewrite_neighbors(t, p)) {
        CHECK(keys(rewrite_neighbors(t, q)).count(alpha_key(p)) == 1);
      }
    }
  }
}

TEST_CASE("detect_confusion: examples") {
  auto c = detect_confusion(theory("confusion"), 5, 100000);
  CHECK(c.verdict.yes());
  REQUIRE(c.imp_witness);
  CHECK(c.imp_witness->is_imp());
  CHECK(c.forall_witness->is_forall());
  CHECK(detect_confusion(theory("empty"), 4, 100000).verdict.no());
  auto s = detect_confusion(theory("selfapp"), 4, 100000);
  CHECK(s.verdict.no());
  CHECK(s.verdict.capped);
  CHECK(detect_confusion(theory("arith-toy"), 4, 100000).verdict.no());
}

TEST_CASE("enumeration") {
  Signature s;
  s.add_predicate("P", 0);
  s.add_function("c", 0);
  s.add_function("f", 1);
  auto terms = enumerate_terms(s, 3, {"x"});
  CHECK(terms.size() == 6);  // x c f(x) f(c) f(f(x)) f(f(c))
  auto props = enumerate_props(s, 3, {"x"});
  // P, !x. P, P => P and !x. !x. P.
  CHECK(props.size() == 4);
}
