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
#include "mdm/typing.hpp"

using namespace mdm;
using mdm::test::data;
using mdm::test::theory;

namespace {

constexpr std::size_t kFuel = 1000;

Derivation drv(const Theory& t, const std::string& text, Style style = Style::Curry) {
  return parse_derivation(text, style, &t.sig);
}

bool ok(const Theory& t, const Derivation& d) {
  auto r = check_derivation(t, d, kFuel);
  if (!r.ok) MESSAGE(r.path << ": " << r.reason << "\n" << to_drv(d));
  return r.ok;
}

}  // namespace

TEST_CASE("check: axiom") {
  auto t = theory("empty");
  CHECK(ok(t, drv(t, R"d((axiom ctx:"a:P" subj:"a" prop:"P"))d")));
  auto bad = check_derivation(t, drv(t, R"d((axiom ctx:"a:P" subj:"a" prop:"Q(c)"))d"), kFuel);
  CHECK_FALSE(bad.ok);
  CHECK(bad.reason.find("side condition") != std::string::npos);
  auto missing = check_derivation(t, drv(t, R"d((axiom ctx:"a:P" subj:"b" prop:"P"))d"), kFuel);
  CHECK_FALSE(missing.ok);
}

TEST_CASE("check: the self-application derivation") {
  auto t = theory("selfapp");
  auto d = load_derivation(data("deltadelta.drv"), Style::Curry, &t.sig);
  auto r = check_derivation(t, d, 50);
  CHECK(r.ok);
  CHECK(r.max_fuel() <= 50);
  CHECK(alpha_eq(d.subject, mdm::test::curry("(\\a. a a) (\\a. a a)")));
  CHECK(to_string(d.ctx) == "a:A");
  // Without the rewrite rule the same tree is rejected.
  CHECK_FALSE(check_derivation(theory("empty"), d, 50).ok);
}

TEST_CASE("check: unknown congruence is a failure") {
  auto t = theory("selfapp");
  // A => B vs A: both classes infinite, never meet.
  auto d = drv(t, R"d((axiom ctx:"a:A => B" subj:"a" prop:"A"))d");
  auto r = check_derivation(t, d, 30);
  CHECK_FALSE(r.ok);
  CHECK(r.reason.find("congruence not established") != std::string::npos);
}

TEST_CASE("check: forall-intro side condition") {
  auto t = theory("empty");
  auto good = drv(t, R"d((forall-intro ctx:"" prop:"!x. Q(x) => Q(x)"
                        (imp-intro ctx:"" subj:"\a. a" prop:"Q(x) => Q(x)"
                          (axiom ctx:"a:Q(x)" subj:"a" prop:"Q(x)"))))d");
  CHECK(ok(t, good));
  auto bad = drv(t, R"d((forall-intro ctx:"h:Q(x)" prop:"!x. Q(x)" (axiom ctx:"h:Q(x)" subj:"h" prop:"Q(x)")))d");
  auto r = check_derivation(t, bad, kFuel);
  CHECK_FALSE(r.ok);
  CHECK(r.reason.find("∉ FV(Γ)") != std::string::npos);
}

TEST_CASE("check: Church quantifier rules and failure paths") {
  auto t = theory("empty");
  auto d = drv(t, R"d((forall-elim ctx:"h:!x. Q(x)" prop:"Q(c)" term:"c" (axiom ctx:"h:!x. Q(x)" subj:"h" prop:"!x. Q(x)")))d",
               Style::Church);
  CHECK(ok(t, d));
  CHECK(alpha_eq(d.subject, mdm::test::church("h [c]", &t.sig)));
  auto i = drv(t, R"d((forall-intro ctx:"" prop:"!x. Q(x) => Q(x)"
                     (imp-intro ctx:"" subj:"\a. a" prop:"Q(x) => Q(x)" (axiom ctx:"a:Q(x)" subj:"a" prop:"Q(x)"))))d",
               Style::Church);
  CHECK(ok(t, i));
  CHECK(i.subject.is_tlam());
  // Leftmost-innermost failure is reported first.
  auto e = drv(t, R"d((imp-elim ctx:"a:P" prop:"P" wit:"P => P"
                       (axiom ctx:"a:P" subj:"a" prop:"Q(c)")
                       (axiom ctx:"a:P" subj:"b" prop:"P")))d");
  auto r = check_derivation(t, e, kFuel);
  CHECK_FALSE(r.ok);
  CHECK(r.path == "root.0");
}

TEST_CASE("weaken: examples") {
  auto t = theory("empty");
  auto ax = drv(t, R"d((axiom ctx:"a:P" subj:"a" prop:"P"))d");
  auto big = parse_context("a:P, b:Q(c)", &t.sig);
  auto w = weaken(ax, big);
  CHECK(ok(t, w));
  CHECK(w.ctx.same_as(big));
  auto id = drv(t, R"d((imp-intro ctx:"" subj:"\a. a" prop:"P => P" (axiom ctx:"a:P" subj:"a" prop:"P")))d");
  auto w2 = weaken(id, parse_context("b:Q(c)", &t.sig));
  CHECK(ok(t, w2));
  CHECK(alpha_eq(w2.subject, id.subject));
  // Weakening by a declaration with the binder's own name renames the binder.
  auto w3 = weaken(id, parse_context("a:Q(c)", &t.sig));
  CHECK(ok(t, w3));
  CHECK(w3.subject.name() != "a");
  CHECK(alpha_eq(w3.subject, id.subject));
  CHECK_THROWS_AS(weaken(ax, parse_context("b:P", &t.sig)), TransformError);
  // Eigenvariable clash: x becomes free in the context.
  auto g = drv(t, R"d((forall-intro ctx:"" prop:"!x. Q(x) => Q(x)"
                     (imp-intro ctx:"" subj:"\a. a" prop:"Q(x) => Q(x)" (axiom ctx:"a:Q(x)" subj:"a" prop:"Q(x)"))))d");
  CHECK(ok(t, weaken(g, parse_context("h:Q(x)", &t.sig))));
}

TEST_CASE("subst_derivation_proof: examples") {
  auto t = theory("empty");
  auto ax = drv(t, R"d((axiom ctx:"a:P" subj:"a" prop:"P"))d");
  auto arg = drv(t, R"d((axiom ctx:"h:P" subj:"h" prop:"P"))d");
  auto out = subst_derivation_proof(ax, "a", arg);
  CHECK(ok(t, out));
  CHECK(alpha_eq(out.subject, arg.subject));
  CHECK(out.ctx.same_as(arg.ctx));

  auto k = drv(t, R"d((imp-intro ctx:"a:P" subj:"\b. a" prop:"Q(c) => P" (axiom ctx:"a:P, b:Q(c)" subj:"a" prop:"P")))d");
  auto pi = drv(t, R"d((imp-intro ctx:"" subj:"\z. z" prop:"P => P" (axiom ctx:"z:P" subj:"z" prop:"P")))d");
  // A proof of P from h:P => P, g:P.
  auto app = drv(t, R"d((imp-elim ctx:"h:P => P, g:P" prop:"P" (axiom ctx:"h:P => P, g:P" subj:"h" prop:"P => P")
                                                      (axiom ctx:"h:P => P, g:P" subj:"g" prop:"P")))d");
  auto out2 = subst_derivation_proof(k, "a", app);
  CHECK(ok(t, out2));
  CHECK(alpha_eq(out2.subject, mdm::test::curry("\\b. h g")));

  // Vacuous: the subject does not mention a.
  auto vac = drv(t, R"d((imp-intro ctx:"a:P" subj:"\z. z" prop:"P => P" (axiom ctx:"a:P, z:P" subj:"z" prop:"P")))d");
  auto out3 = subst_derivation_proof(vac, "a", pi);
  CHECK(ok(t, out3));
  CHECK(alpha_eq(out3.subject, vac.subject));
  CHECK(out3.ctx.empty());

  // Capture: substituting b into \b. a renames the binder.
  auto capt = drv(t, R"d((axiom ctx:"b:Q(c)" subj:"b" prop:"Q(c)"))d");
  auto k2 = drv(t, R"d((imp-intro ctx:"a:Q(c)" subj:"\b. a" prop:"P => Q(c)" (axiom ctx:"a:Q(c), b:P" subj:"a" prop:"Q(c)")))d");
  auto out4 = subst_derivation_proof(k2, "a", capt);
  CHECK(ok(t, out4));
  CHECK(out4.subject.name() != "b");
  CHECK(out4.subject.body() == Proof::var("b"));

  CHECK_THROWS_AS(subst_derivation_proof(ax, "zz", arg), TransformError);
  auto clash = drv(t, R"d((axiom ctx:"a:Q(c)" subj:"a" prop:"Q(c)"))d");
  auto k3 = drv(t, R"d((axiom ctx:"a:P, a2:P" subj:"a" prop:"P"))d");
  CHECK_THROWS_AS(subst_derivation_proof(k3, "a2", clash), TransformError);
}

TEST_CASE("subst_derivation_term: examples") {
  auto t = theory("empty");
  auto c = Term::app("c");
  auto d = drv(t, R"d((axiom ctx:"h:Q(x)" subj:"h" prop:"Q(x)"))d");
  auto out = subst_derivation_term(d, "x", c);
  CHECK(ok(t, out));
  CHECK(alpha_eq(out.prop, parse_prop("Q(c)", &t.sig)));
  CHECK(out.subject == d.subject);

  auto ch = drv(t, R"d((forall-elim ctx:"h:!y. R(x, y)" prop:"R(x, x)" term:"x" (axiom ctx:"h:!y. R(x, y)" subj:"h" prop:"!y. R(x, y)")))d",
                Style::Church);
  CHECK(ok(t, ch));
  auto out2 = subst_derivation_term(ch, "x", c);
  CHECK(ok(t, out2));
  CHECK(alpha_eq(out2.subject, mdm::test::church("h [c]", &t.sig)));

  CHECK(to_drv(subst_derivation_term(d, "z", c)) == to_drv(d));

  // Capture under a quantifier introduction: y is free in the substituted term.
  auto gen = drv(t, R"d((forall-intro ctx:"" prop:"!y. R(x, y) => R(x, y)"
                       (imp-intro ctx:"" subj:"\a. a" prop:"R(x, y) => R(x, y)" (axiom ctx:"a:R(x, y)" subj:"a" prop:"R(x, y)"))))d",
                 Style::Church);
  CHECK(ok(t, gen));
  auto out3 = subst_derivation_term(gen, "x", Term::var("y"));
  CHECK(ok(t, out3));
  CHECK(alpha_eq(out3.prop, parse_prop("!z. R(y, z) => R(y, z)", &t.sig)));
}

TEST_CASE("erase: examples") {
  auto t = theory("empty");
  CHECK(erase(Proof::tlam("x", Proof::var("a"))) == Proof::var("a"));
  auto p = Proof::app(Proof::tapp(Proof::var("a"), Term::app("c")), Proof::var("b"));
  CHECK(erase(p) == Proof::app(Proof::var("a"), Proof::var("b")));
  auto q = mdm::test::curry("\\a. a b");
  CHECK(erase(q) == q);
  CHECK(erase(erase(p)) == erase(p));
  // erase commutes with proof substitution.
  auto body = parse_proof("\\b. a [c] b", Style::Church, &t.sig);
  auto arg = parse_proof("^x. g", Style::Church, &t.sig);
  CHECK(alpha_eq(erase(subst_proof(body, "a", arg)), subst_proof(erase(body), "a", erase(arg))));
}

TEST_CASE("erase_derivation: examples") {
  auto t = theory("empty");
  auto g = drv(t, R"d((forall-intro ctx:"" prop:"!x. Q(x) => Q(x)"
                     (imp-intro ctx:"" subj:"\a. a" prop:"Q(x) => Q(x)" (axiom ctx:"a:Q(x)" subj:"a" prop:"Q(x)"))))d",
               Style::Church);
  auto e = erase_derivation(g);
  CHECK(e.style == Style::Curry);
  CHECK(ok(t, e));
  CHECK(alpha_eq(e.subject, mdm::test::curry("\\a. a")));
  auto s = theory("selfapp");
  auto dd = load_derivation(data("deltadelta.drv"), Style::Church, &s.sig);
  CHECK(ok(s, dd));
  auto de = erase_derivation(dd);
  CHECK(ok(s, de));
  CHECK(de.subject == dd.subject);
  auto id = drv(t, R"d((imp-intro ctx:"" subj:"\a. a" prop:"P => P" (axiom ctx:"a:P" subj:"a" prop:"P")))d", Style::Church);
  CHECK(to_drv(erase_derivation(id)) == to_drv(id));
}

TEST_CASE("confusion transport") {
  auto c = theory("confusion");
  auto e = theory("empty");
  // h : ∀x.B(x) ⊢ λa.h : A => ∀x.B(x)
  auto d = drv(c, R"d((imp-intro ctx:"h:!x. B(x)" subj:"\a. h" prop:"A => !x. B(x)" (axiom ctx:"h:!x. B(x), a:A" subj:"h" prop:"!x. B(x)")))d");
  CHECK(ok(c, d));
  auto r = confusion_transport(d);
  REQUIRE(r);
  CHECK(r->structural);
  CHECK(ok(c, r->derivation));
  CHECK(ok(e, r->derivation));  // no congruence step is needed at all
  CHECK(alpha_eq(r->derivation.prop, parse_prop("!x. (A => B(x))", &c.sig)));
  CHECK(alpha_eq(r->derivation.subject, d.subject));
  // An opaque hypothesis falls back to one congruence step.
  auto ax = drv(c, R"d((axiom ctx:"f:A => !x. B(x)" subj:"f" prop:"A => !x. B(x)"))d");
  auto r2 = confusion_transport(ax);
  REQUIRE(r2);
  CHECK_FALSE(r2->structural);
  CHECK(ok(c, r2->derivation));
  CHECK_FALSE(check_derivation(e, r2->derivation, kFuel).ok);
}

TEST_CASE("drv round trip") {
  auto s = theory("selfapp");
  auto dd = load_derivation(data("deltadelta.drv"), Style::Curry, &s.sig);
  auto again = parse_derivation(to_drv(dd), Style::Curry, &s.sig);
  CHECK(to_drv(again) == to_drv(dd));
  CHECK_THROWS_AS(parse_derivation("(axiom ctx:\"a:A\" prop:\"A\"", Style::Curry, &s.sig), SyntaxError);
  CHECK_THROWS_AS(parse_derivation("(bogus prop:\"A\")", Style::Curry, &s.sig), SyntaxError);
  CHECK_THROWS_AS(parse_derivation("(axiom ctx:\"a:A\" subj:\"a\" prop:\"Nope\")", Style::Curry, &s.sig), SyntaxError);
}
