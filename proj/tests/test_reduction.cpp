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
#include "mdm/reduction.hpp"

using namespace mdm;
using mdm::test::curry;
using mdm::test::data;
using mdm::test::theory;

namespace {

std::set<std::string> keys(const std::vector<Proof>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(alpha_key(p));
  return out;
}

const Proof kDelta = curry("(\\a. a a) (\\a. a a)");

}  // namespace

TEST_CASE("beta_reducts: examples") {
  auto r = beta_reducts(kDelta);
  REQUIRE(r.size() == 1);
  CHECK(alpha_eq(r[0], kDelta));
  CHECK(beta_reducts(curry("a")).empty());
  auto r2 = beta_reducts(curry("(\\a. a) ((\\b. b) g)"));
  CHECK(r2.size() == 2);
  CHECK(keys(r2) == keys({curry("(\\b. b) g"), curry("(\\a. a) g")}));
  // Church term redex.
  auto ch = parse_proof("(^x. h [x]) [c]", Style::Church);
  auto steps = beta_steps(ch);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].term_beta);
  CHECK(alpha_eq(steps[0].reduct, parse_proof("h [c]", Style::Church)));
}

TEST_CASE("is_normal: examples") {
  CHECK(is_normal(curry("a")));
  CHECK(is_normal(curry("a a")));
  CHECK_FALSE(is_normal(curry("(\\a. a) b")));
}

TEST_CASE("reduction_tree: examples") {
  auto t = reduction_tree(curry("a"), 10);
  CHECK(t.nodes.size() == 1);
  CHECK_FALSE(t.nodes[0].truncated);
  auto t2 = reduction_tree(curry("(\\a. b) g"), 10);
  REQUIRE(t2.nodes.size() == 2);
  CHECK(t2.nodes[1].term == curry("b"));
  CHECK(t2.nodes[1].children.empty());
  auto t3 = reduction_tree(kDelta, 3);
  REQUIRE(t3.nodes.size() == 2);
  CHECK(t3.nodes[1].cycle == 0u);
  CHECK(t3.to_dot().find("n1 -> n0") != std::string::npos);
  auto t4 = reduction_tree(curry("(\\a. a a a) (\\a. a a a)"), 5);
  bool truncated = false;
  for (const auto& n : t4.nodes) truncated |= n.truncated;
  CHECK(truncated);
  CHECK(t4.nodes.size() <= 5);
}

TEST_CASE("sn_verdict: examples") {
  auto d = sn_verdict(kDelta, 1000);
  CHECK(d.kind == SNVerdict::Kind::Diverges);
  CHECK(d.cycle.size() == 2);  // δδ -> δδ
  auto id = sn_verdict(curry("\\a. a"), 10);
  CHECK(id.sn());
  CHECK(id.max_length == 0);
  CHECK(id.tree_size == 1);
  auto two = sn_verdict(curry("(\\a. a a) (\\b. b)"), 100);
  CHECK(two.sn());
  CHECK(two.max_length == 2);
  // Growing terms have no cycle: bounded search gives up.
  auto grow = sn_verdict(curry("(\\a. a a a) (\\a. a a a)"), 50);
  CHECK(grow.kind == SNVerdict::Kind::Unknown);
  // Tree size counts every path: (\a. a) ((\b. b) g) has 2 + 1 + 1 + 1 nodes.
  auto tree = sn_verdict(curry("(\\a. a) ((\\b. b) g)"), 100);
  CHECK(tree.sn());
  CHECK(tree.max_length == 2);
  CHECK(tree.tree_size == 5);
}

TEST_CASE("sn_verdict: reducts have smaller max length") {
  for (const char* s : {"(\\a. a a) (\\b. b)", "(\\f. \\x. f (f x)) (\\y. y) z", "(\\a. (\\b. b) a) ((\\c. c) d)"}) {
    auto p = curry(s);
    auto v = sn_verdict(p, 1000);
    REQUIRE(v.sn());
    for (const auto& r : beta_reducts(p)) {
      auto w = sn_verdict(r, 1000);
      REQUIRE(w.sn());
      CHECK(w.max_length < v.max_length);
    }
  }
}

TEST_CASE("normalize") {
  auto r = normalize(curry("(\\f. \\x. f (f x)) (\\y. y) z"), 100);
  CHECK(r.normal);
  CHECK(r.term == curry("z"));
  auto d = normalize(kDelta, 20);
  CHECK_FALSE(d.normal);
  CHECK(d.steps == 20);
}

TEST_CASE("reduce_derivation: examples") {
  auto e = theory("empty");
  // ⊢ (λa.a) π′ : P ⇒ P with π′ = λz.z.
  auto d = parse_derivation(R"d((imp-elim ctx:"" prop:"P => P" wit:"(P => P) => P => P"
      (imp-intro ctx:"" subj:"\a. a" prop:"(P => P) => P => P" (axiom ctx:"a:P => P" subj:"a" prop:"P => P"))
      (imp-intro ctx:"" subj:"\z. z" prop:"P => P" (axiom ctx:"z:P" subj:"z" prop:"P"))))d",
                            Style::Curry, &e.sig);
  REQUIRE(check_derivation(e, d, 100).ok);
  auto r = reduce_derivation(e, d, {}, 100);
  CHECK(check_derivation(e, r, 100).ok);
  CHECK(alpha_eq(r.subject, curry("\\z. z")));
  CHECK(alpha_eq(r.prop, d.prop));
  CHECK_THROWS_AS(reduce_derivation(e, d, {0}, 100), ReductionError);

  auto s = theory("selfapp");
  auto dd = load_derivation(data("deltadelta.drv"), Style::Curry, &s.sig);
  auto rd = reduce_derivation(s, dd, {}, 100);
  CHECK(check_derivation(s, rd, 100).ok);
  CHECK(alpha_eq(rd.subject, dd.subject));
  CHECK(rd.ctx.same_as(dd.ctx));

  // Church: (λx. λa. a) [c] : Q(c) ⇒ Q(c)
  auto ch = parse_derivation(R"d((forall-elim ctx:"" prop:"Q(c) => Q(c)" term:"c"
      (forall-intro ctx:"" prop:"!x. Q(x) => Q(x)"
        (imp-intro ctx:"" subj:"\a. a" prop:"Q(x) => Q(x)" (axiom ctx:"a:Q(x)" subj:"a" prop:"Q(x)")))))d",
                             Style::Church, &e.sig);
  REQUIRE(check_derivation(e, ch, 100).ok);
  auto rc = reduce_derivation(e, ch, {}, 100);
  CHECK(check_derivation(e, rc, 100).ok);
  CHECK(alpha_eq(rc.subject, curry("\\a. a")));
  CHECK(alpha_eq(rc.prop, parse_prop("Q(c) => Q(c)", &e.sig)));
}

TEST_CASE("reduce_derivation: Curry quantifier steps around the redex") {
  auto e = theory("empty");
  // (λa.a) h where the function is typed through ∀-intro then ∀-elim, and the
  // argument is a hypothesis whose name clashes with the binder.
  auto d = parse_derivation(R"d((imp-elim ctx:"a:Q(c)" prop:"Q(c)" wit:"Q(c) => Q(c)"
      (forall-elim ctx:"a:Q(c)" prop:"Q(c) => Q(c)" term:"c"
        (forall-intro ctx:"a:Q(c)" prop:"!x. Q(x) => Q(x)"
          (imp-intro ctx:"a:Q(c)" subj:"\a. a" prop:"Q(x) => Q(x)" (axiom ctx:"a:Q(x)" subj:"a" prop:"Q(x)"))))
      (axiom ctx:"a:Q(c)" subj:"a" prop:"Q(c)")))d",
                            Style::Curry, &e.sig);
  REQUIRE(check_derivation(e, d, 100).ok);
  auto r = reduce_derivation(e, d, {}, 100);
  auto rep = check_derivation(e, r, 100);
  CHECK(rep.ok);
  CHECK(alpha_eq(r.subject, curry("a")));
}
