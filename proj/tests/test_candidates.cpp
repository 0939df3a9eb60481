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

#include <doctest.h>

#include "helpers.hpp"
#include "mdm/candidates.hpp"
#include "mdm/reduction.hpp"
#include "mdm/termbank.hpp"

using namespace mdm;
using namespace mdm::test;

namespace {

TermId id(TermBank& b, const std::string& text) { return b.from_proof(curry(text)); }

// Δ-slice {h0:P, h1:P, h2:P=>P} under the empty theory.
struct EmptyLab {
  Theory t = theory("empty");
  TermBank bank;
  UniversalContext delta;
  Context slice = delta.slice({{P("P"), 2}, {P("P => P"), 1}});
  std::vector<Term> terms{Term::app("c"), Term::app("d")};
  Universe u{bank, {5, {"h0", "h1", "h2"}}};
  ClosureEngine engine{t, bank, slice, terms, ClosureBounds{}};
};

}  // namespace

TEST_CASE("term bank agrees with the named reduction module") {
  TermBank b;
  Universe u(b, {6, {"x", "y"}});
  std::size_t checked = 0;
  for (std::size_t i = 0; i < u.size(); i += 7) {
    TermId t = u.members()[i];
    Proof p = b.to_proof(t);
    CHECK(b.from_proof(p) == t);
    std::set<std::string> mine;
    for (TermId r : b.reducts(t)) mine.insert(alpha_key(b.to_proof(r)));
    std::set<std::string> theirs;
    for (const auto& r : beta_reducts(p)) theirs.insert(alpha_key(r));
    CHECK(mine == theirs);
    auto sn = b.sn(t);
    auto v = sn_verdict(p, 5000);
    REQUIRE(v.sn());
    REQUIRE(sn.sn());
    CHECK(sn.max_length == v.max_length);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("term bank sizes, alpha classes and divergence") {
  TermBank b;
  CHECK(id(b, "\\a. a") == id(b, "\\z. z"));
  CHECK(b.size(id(b, "(\\a. a) h")) == 4);
  TermId dd = id(b, "(\\a. a a) (\\a. a a)");
  CHECK(b.sn(dd).kind == TermBank::SN::Kind::Diverges);
  CHECK(b.reducts(dd) == std::vector<TermId>{dd});
  Universe u(b, {3, {"x"}});
  // x; \.x, \.#0; x x, \.\.x, \.\.#0, \.\.#1
  CHECK(u.size() == 7);
  Universe u7(b, {7, {"h0", "h1", "h2"}});
  CHECK(u7.size() > 3000);
}

TEST_CASE("term bank gives up on growing terms") {
  TermBank b(20000, 60);
  TermId grow = id(b, "(\\a. a a a) (\\a. a a a)");
  CHECK(b.sn(grow).kind == TermBank::SN::Kind::Unknown);
  std::size_t interned = b.count();
  CHECK(b.sn(grow).kind == TermBank::SN::Kind::Unknown);
  CHECK(b.count() == interned);
  CHECK(b.sn(id(b, "(\\a. a a) (\\b. b)")).max_length == 2);
}

TEST_CASE("capture substitution by in-place replacement") {
  TermBank b;
  TermId t = id(b, "\\a. (\\b. b) a");
  Path p{0};
  TermId mu = b.at(t, p);
  CHECK(b.loose(mu) == 1);
  REQUIRE(b.reducts(mu).size() == 1);
  CHECK(b.replace(t, p, b.reducts(mu)[0]) == id(b, "\\a. a"));
}

TEST_CASE("cr2 examples") {
  TermBank b;
  Universe u(b, {5, {"g", "h"}});
  auto s = FiniteCandidate::of(u, {id(b, "(\\a. a) g"), id(b, "g")});
  CHECK(cr2(s).pass());
  auto t = FiniteCandidate::of(u, {id(b, "(\\a. a) g")});
  CHECK(cr2(t).fail());
  std::vector<TermId> all = u.members();
  CHECK(cr2(FiniteCandidate::of(u, all)).pass());
}

TEST_CASE("cr3 needs the neutral normal terms, cr3aux does not") {
  TermBank b;
  Universe u(b, {4, {"a"}});
  FiniteCandidate empty(u);
  auto v = cr3(empty);
  CHECK(v.fail());
  CHECK(cr3aux(empty).pass());
  // (\b. a) a and (\b. b) a only reduce to a, which is left out.
  auto aa = FiniteCandidate::of(u, {id(b, "a a")});
  CHECK(cr3(aa).fail());
  CHECK(cr3aux(aa).pass());
  CHECK(cr3aux(FiniteCandidate::of(u, {id(b, "a")})).fail());
}

TEST_CASE("cr3prime single hole forces the redex in") {
  TermBank b;
  Universe u(b, {6, {"g"}});
  auto s = FiniteCandidate::of(u, {id(b, "g")});
  auto v = cr3prime(s, 1);
  CHECK(v.fail());
  auto closed = cr_closure(u, {id(b, "g")}, 2);
  CHECK(closed.status(id(b, "(\\b. b) g")) == Tri::In);
  CHECK(cr3prime(closed, 2).pass());
  CHECK(cr2(closed).pass());
  CHECK(cr1(closed).pass());
}

TEST_CASE("omega") {
  TermBank b;
  CHECK(omega(b, id(b, "(\\a. a) g")) == Tri::In);
  CHECK(omega(b, id(b, "a a")) == Tri::Out);
  CHECK(omega(b, id(b, "(\\a. a a) (\\a. a a)")) == Tri::Out);
  CHECK(omega(b, id(b, "\\x. (\\a. a) x")) == Tri::Out);
  CHECK(omega(curry("(\\a. a) g"), 100) == Tri::In);
  CHECK(omega(curry("(\\a. a a) (\\a. a a)"), 100) == Tri::Out);
}

TEST_CASE("imp and forall candidates") {
  TermBank b;
  Universe u(b, {4, {"g", "h"}});
  FiniteCandidate full(u, Tri::In);
  full.set_oracle([](TermId) { return Tri::In; });
  auto a = FiniteCandidate::of(u, {id(b, "g")});
  auto r = imp_candidate(a, full);
  CHECK(r.count(Tri::In) == u.size());

  auto gg = id(b, "h g");
  auto bset = FiniteCandidate::of(u, {gg});
  auto r2 = imp_candidate(a, bset);
  CHECK(r2.status(id(b, "h")) == Tri::In);
  CHECK(r2.status(id(b, "g")) == Tri::Out);

  auto s1 = FiniteCandidate::of(u, {id(b, "g"), id(b, "h")});
  auto s2 = FiniteCandidate::of(u, {id(b, "h"), id(b, "g g")});
  CHECK(forall_candidate({&s1}).same_statuses(s1));
  auto i = forall_candidate({&s1, &s2});
  CHECK(i.members() == std::vector<TermId>{id(b, "h")});
}

TEST_CASE("restriction reads the larger universe") {
  TermBank b;
  Universe big(b, {7, {"g", "h"}});
  Universe small(b, {3, {"g", "h"}});
  auto c = cr_closure(big, {id(b, "g"), id(b, "h g")}, 2);
  auto r = restrict_to(c, small);
  CHECK(r.status(id(b, "g")) == Tri::In);
  CHECK(r.status(id(b, "h")) == Tri::Out);
  // Outside the small universe the larger candidate answers.
  CHECK(r.status(id(b, "(\\a. a) (h g)")) == Tri::In);
  auto a = restrict_to(cr_closure(big, {id(b, "g")}, 2), small);
  auto arrow = imp_candidate(a, r);
  CHECK(arrow.status(id(b, "h")) == Tri::In);
  CHECK(arrow.count(Tri::Unknown) == 0);
  CHECK(arrow.verdicts(2).cr2.pass());
  CHECK(arrow.verdicts(2).cr3prime.pass());
}

TEST_CASE("universal context is deterministic and injective") {
  UniversalContext d;
  CHECK(d.name(P("P"), 0) == "h0");
  CHECK(d.name(P("P => P"), 0) == "h1");
  CHECK(d.name(P("P"), 1) == "h2");
  CHECK(d.name(P("P"), 0) == "h0");
  CHECK(d.name(P("!x. Q(x)"), 0) == d.name(P("!y. Q(y)"), 0));
  auto s = d.slice({{P("P"), 2}});
  CHECK(to_string(s) == "h0:P, h2:P");
  CHECK(d.materialized().size() == 4);
}

TEST_CASE("cl0 examples") {
  EmptyLab lab;
  auto c = lab.engine.cl0(lab.u, P("P"), {});
  CHECK(c.status(id(lab.bank, "h0")) == Tri::In);
  CHECK(c.status(id(lab.bank, "h1")) == Tri::In);
  CHECK(c.status(id(lab.bank, "h2")) == Tri::Out);
  CHECK(c.status(id(lab.bank, "h2 h0")) == Tri::In);
  auto pp = lab.engine.cl0(lab.u, P("P => P"), {});
  CHECK(pp.status(id(lab.bank, "\\a. a")) == Tri::In);
  CHECK(pp.status(id(lab.bank, "\\a. h0")) == Tri::In);
  CHECK(pp.status(id(lab.bank, "(\\a. a) h2")) == Tri::In);

  Theory sa = theory("selfapp");
  TermBank b;
  UniversalContext d;
  ClosureEngine e(sa, b, d.slice({{P("A"), 1}}), {}, ClosureBounds{});
  CHECK(e.in_cl0(id(b, "\\a. a a"), P("A")));
  CHECK(e.in_cl0(id(b, "(\\a. a a) (\\a. a a)"), P("A")));
  CHECK(e.member(id(b, "(\\a. a a) (\\a. a a)"), P("A"), 2) == Tri::In);
}

TEST_CASE("cl0 finds quantifier steps") {
  Theory t = theory("empty");
  TermBank b;
  UniversalContext d;
  Context slice = d.slice({{P("!x. Q(x)", &t.sig), 1}, {P("Q(c)", &t.sig), 1}});
  ClosureEngine e(t, b, slice, {Term::app("c"), Term::app("d")}, ClosureBounds{});
  CHECK(e.in_cl0(id(b, "h0"), P("Q(d)", &t.sig)));
  CHECK(e.in_cl0(id(b, "h0"), P("!y. Q(y)", &t.sig)));
  CHECK(e.in_cl0(id(b, "\\a. a"), P("!x. Q(x) => Q(x)", &t.sig)));
  CHECK(e.in_cl0(id(b, "(\\a. a) h0"), P("Q(c)", &t.sig)));
  CHECK_FALSE(e.in_cl0(id(b, "h1"), P("Q(d)", &t.sig)));
  CHECK_FALSE(e.in_cl0(id(b, "h1"), P("!x. Q(x)", &t.sig)));
}

TEST_CASE("search certificates pass the kernel") {
  EmptyLab lab;
  std::size_t n = 0;
  for (const char* goal : {"P", "P => P", "(P => P) => P"}) {
    auto c = lab.engine.cl0(lab.u, P(goal), {});
    for (TermId m : c.members()) {
      auto d = lab.engine.certificate(m, P(goal));
      REQUIRE(d.has_value());
      auto rep = check_derivation(lab.t, *d, 200);
      CHECK_MESSAGE(rep.ok, rep.reason);
      CHECK(alpha_eq(d->subject, lab.bank.to_proof(m)));
      ++n;
    }
  }
  CHECK(n > 20);
}

TEST_CASE("cl_step examples") {
  TermBank b;
  Universe u(b, {5, {"g"}});
  auto prev = FiniteCandidate::of(u, {id(b, "g")});
  auto next = cl_step(prev, 2);
  CHECK(next.status(id(b, "(\\a. a) g")) == Tri::In);
  CHECK(next.status(id(b, "g")) == Tri::In);
}

TEST_CASE("closure stages agree with universe steps") {
  EmptyLab lab;
  auto tab = lab.engine.closure(lab.u, P("P => P"), {}, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    auto step = cl_step(tab.stages[k], 2);
    CHECK(step.same_statuses(tab.stages[k + 1]));
  }
  auto t0 = lab.engine.closure(lab.u, P("P => P"), {}, 0);
  CHECK(t0.stages.size() == 1);
  CHECK(t0.stages[0].same_statuses(lab.engine.cl0(lab.u, P("P => P"), {})));
  // Cuts already put every redex of this small universe into stage 0.
  CHECK(tab.stage_size(1) == tab.stage_size(0));
}

TEST_CASE("closure lemmas on a small universe") {
  EmptyLab lab;
  for (const char* a : {"P", "P => P"}) {
    auto tab = lab.engine.closure(lab.u, P(a), {}, 3);
    CHECK(check_monotone(tab).pass());
    CHECK(check_mink(tab).pass());
    CHECK(check_normal_stage0(tab).pass());
    auto clc = check_clc(lab.engine, tab);
    CHECK_MESSAGE(clc.pass(), (clc.examples.empty() ? "" : clc.examples[0]));
  }
  auto ram = check_clramorph(lab.engine, lab.u, P("P"), P("P"), {}, 3);
  CHECK_MESSAGE(ram.pass(), (ram.examples.empty() ? "" : ram.examples[0]));
  CHECK(ram.checked == lab.u.size());
  auto lam = check_lambdacl(lab.engine, lab.u, P("P"), P("P"), {}, 3);
  CHECK(lam.pass());
  CHECK(lam.checked > 0);
}

TEST_CASE("lambda identity belongs to the arrow of a closure") {
  EmptyLab lab;
  auto tab = lab.engine.closure(lab.u, P("P"), {}, 3);
  auto arrow = imp_candidate(tab.stages[3], tab.stages[3]);
  CHECK(arrow.status(id(lab.bank, "\\a. a")) == Tri::In);
  CHECK(arrow.status(id(lab.bank, "h2")) == Tri::In);
  CHECK(arrow.status(id(lab.bank, "h0")) == Tri::Out);
}

TEST_CASE("clsubst and clfamorph over a quantified slice") {
  Theory t = theory("empty");
  TermBank b;
  UniversalContext d;
  Context slice = d.slice({{P("!x. Q(x)", &t.sig), 1}, {P("Q(c)", &t.sig), 1}, {P("Q(d) => Q(d)", &t.sig), 1}});
  std::vector<Term> terms{Term::app("c"), Term::app("d")};
  ClosureEngine e(t, b, slice, terms, ClosureBounds{});
  Universe u(b, {5, {"h0", "h1", "h2"}});
  auto sub = check_clsubst(e, u, P("Q(x) => Q(y)", &t.sig), "x", Term::app("c"), parse_environment("y:=d", &t.sig), 2);
  CHECK(sub.pass());
  auto fa = check_clfamorph(e, u, P("!x. Q(x)", &t.sig), {}, terms, 3);
  CHECK_MESSAGE(fa.pass(), (fa.examples.empty() ? "" : fa.examples[0]));
  auto fa2 = check_clfamorph(e, u, P("!x. (Q(x) => Q(x))", &t.sig), {}, terms, 3);
  CHECK_MESSAGE(fa2.pass(), (fa2.examples.empty() ? "" : fa2.examples[0]));
}

TEST_CASE("adequacy") {
  Theory t = theory("empty");
  TermBank b;
  ClosureEngine e(t, b, Context{}, {Term::app("c")}, ClosureBounds{});
  auto d = parse_derivation(
      R"d((imp-intro ctx:"" subj:"\a. a" prop:"P => P" (axiom ctx:"a:P" subj:"a" prop:"P")))d", Style::Curry,
      &t.sig);
  auto res = adequacy_check(e, d, {}, {}, 3, 12);
  CHECK(res.verdict == Tri::In);

  AdequacyOptions opts;
  opts.derivations = 15;
  auto rep = adequacy_suite(t, {Term::app("c"), Term::app("d")}, opts);
  CHECK_MESSAGE(rep.pass(), (rep.examples.empty() ? "" : rep.examples[0]));
  CHECK(rep.checked == 45);
}

TEST_CASE("church forall defect") {
  Theory t = theory("empty");
  auto rep = church_forall_defect_demo(t, {P("!x. Q(x)")}, {Term::app("c"), Term::app("d")}, 100);
  REQUIRE(rep.entries.size() == 2);
  for (const auto& e : rep.entries) {
    CHECK(e.church_at_t1);
    CHECK_FALSE(e.church_at_t2);
    CHECK(e.curry_in_all);
  }
  CHECK(rep.text().find("Curry erasure typed at every instance: yes") != std::string::npos);
  CHECK(church_forall_defect_demo(t, {P("P")}, {Term::app("c")}, 100).entries.empty());
}
