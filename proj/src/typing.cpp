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

#include "mdm/typing.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace mdm {

// ---------------------------------------------------------------------------
// Contexts

Context::Context(std::vector<std::pair<std::string, Prop>> entries) {
  for (auto& [n, p] : entries) {
    if (has(n)) throw std::invalid_argument("duplicate declaration of '" + n + "' in context");
    entries_.emplace_back(std::move(n), std::move(p));
  }
}

const Prop* Context::lookup(const std::string& name) const {
  for (const auto& [n, p] : entries_)
    if (n == name) return &p;
  return nullptr;
}

Context Context::extend(const std::string& name, const Prop& prop) const {
  Context out = without(name);
  out.entries_.emplace_back(name, prop);
  return out;
}

Context Context::without(const std::string& name) const {
  Context out;
  for (const auto& e : entries_)
    if (e.first != name) out.entries_.push_back(e);
  return out;
}

std::set<std::string> Context::names() const {
  std::set<std::string> out;
  for (const auto& e : entries_) out.insert(e.first);
  return out;
}

std::set<std::string> Context::free_term_vars() const {
  std::set<std::string> out;
  for (const auto& e : entries_) out.merge(mdm::free_term_vars(e.second));
  return out;
}

bool Context::subset_of(const Context& other) const {
  for (const auto& [n, p] : entries_) {
    const Prop* q = other.lookup(n);
    if (!q || !alpha_eq(p, *q)) return false;
  }
  return true;
}

Context Context::subst_term(const std::string& x, const Term& t) const {
  Context out;
  for (const auto& [n, p] : entries_) out.entries_.emplace_back(n, subst_term_in_prop(p, x, t));
  return out;
}

std::string to_string(const Context& ctx) {
  std::string out;
  for (const auto& [n, p] : ctx.entries()) {
    if (!out.empty()) out += ", ";
    out += n + ":" + to_string(p);
  }
  return out;
}

Context parse_context(std::string_view text, const Signature* sig) {
  std::vector<std::pair<std::string, Prop>> entries;
  std::size_t depth = 0, start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view piece = text.substr(start, end - start);
    std::size_t b = 0;
    while (b < piece.size() && std::isspace(static_cast<unsigned char>(piece[b]))) ++b;
    piece.remove_prefix(b);
    if (piece.empty()) return;
    auto colon = piece.find(':');
    if (colon == std::string_view::npos) throw SyntaxError("expected name:proposition in context", start);
    std::string name(piece.substr(0, colon));
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    entries.emplace_back(name, parse_prop(piece.substr(colon + 1), sig));
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')' && depth) --depth;
    if (c == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  flush(text.size());
  return Context(std::move(entries));
}

// ---------------------------------------------------------------------------
// Rules and nodes

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::Axiom:
      return "axiom";
    case Rule::ImpIntro:
      return "imp-intro";
    case Rule::ImpElim:
      return "imp-elim";
    case Rule::ForallIntro:
      return "forall-intro";
    case Rule::ForallElim:
      return "forall-elim";
  }
  return "?";
}

Rule parse_rule(std::string_view text) {
  for (Rule r : {Rule::Axiom, Rule::ImpIntro, Rule::ImpElim, Rule::ForallIntro, Rule::ForallElim})
    if (to_string(r) == text) return r;
  throw std::invalid_argument("unknown rule '" + std::string(text) + "'");
}

std::size_t premise_count(Rule rule) {
  switch (rule) {
    case Rule::Axiom:
      return 0;
    case Rule::ImpElim:
      return 2;
    default:
      return 1;
  }
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.node_count();
  return n;
}

std::size_t Derivation::depth() const {
  std::size_t d = 0;
  for (const auto& p : premises) d = std::max(d, p.depth());
  return d + 1;
}

Derivation make_axiom(Style style, Context ctx, const std::string& hyp, Prop prop) {
  Derivation d;
  d.rule = Rule::Axiom;
  d.style = style;
  d.ctx = std::move(ctx);
  d.subject = Proof::var(hyp);
  d.prop = std::move(prop);
  d.hyp = hyp;
  return d;
}

Derivation make_imp_intro(Context ctx, const std::string& hyp, Prop witness, Prop prop, Derivation premise) {
  Derivation d;
  d.rule = Rule::ImpIntro;
  d.style = premise.style;
  d.ctx = std::move(ctx);
  d.subject = Proof::lam(hyp, premise.subject);
  d.prop = std::move(prop);
  d.hyp = hyp;
  d.witness = std::move(witness);
  d.premises.push_back(std::move(premise));
  return d;
}

Derivation make_imp_elim(Context ctx, Prop witness, Prop prop, Derivation fun, Derivation arg) {
  Derivation d;
  d.rule = Rule::ImpElim;
  d.style = fun.style;
  d.ctx = std::move(ctx);
  d.subject = Proof::app(fun.subject, arg.subject);
  d.prop = std::move(prop);
  d.witness = std::move(witness);
  d.premises.push_back(std::move(fun));
  d.premises.push_back(std::move(arg));
  return d;
}

Derivation make_forall_intro(Context ctx, Prop witness, Prop prop, Derivation premise) {
  Derivation d;
  d.rule = Rule::ForallIntro;
  d.style = premise.style;
  d.ctx = std::move(ctx);
  d.subject = premise.style == Style::Church ? Proof::tlam(witness.name(), premise.subject) : premise.subject;
  d.prop = std::move(prop);
  d.witness = std::move(witness);
  d.premises.push_back(std::move(premise));
  return d;
}

Derivation make_forall_elim(Context ctx, Prop witness, Term inst, Prop prop, Derivation premise) {
  Derivation d;
  d.rule = Rule::ForallElim;
  d.style = premise.style;
  d.ctx = std::move(ctx);
  d.subject = premise.style == Style::Church ? Proof::tapp(premise.subject, inst) : premise.subject;
  d.prop = std::move(prop);
  d.witness = std::move(witness);
  d.inst = std::move(inst);
  d.premises.push_back(std::move(premise));
  return d;
}

// ---------------------------------------------------------------------------
// Checking

std::size_t CheckReport::total_fuel() const {
  std::size_t n = 0;
  for (const auto& s : side_conditions) n += s.verdict.fuel_spent;
  return n;
}

std::size_t CheckReport::max_fuel() const {
  std::size_t n = 0;
  for (const auto& s : side_conditions) n = std::max(n, s.verdict.fuel_spent);
  return n;
}

namespace {

class Checker {
 public:
  Checker(const Theory& t, std::size_t fuel, CheckReport& rep) : theory_(t), fuel_(fuel), rep_(rep) {}

  void node(const Derivation& d, const std::string& path) {
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      node(d.premises[i], path + "." + std::to_string(i));
      if (!rep_.ok) return;
    }
    path_ = &path;
    if (d.premises.size() != premise_count(d.rule)) return fail("wrong number of premises");
    for (const auto& p : d.premises)
      if (p.style != d.style) return fail("style mismatch between node and premise");
    if (d.style == Style::Curry && !is_curry(d.subject))
      return fail("Curry-style subject contains term abstraction or application");
    switch (d.rule) {
      case Rule::Axiom:
        return axiom(d);
      case Rule::ImpIntro:
        return imp_intro(d);
      case Rule::ImpElim:
        return imp_elim(d);
      case Rule::ForallIntro:
        return forall_intro(d);
      case Rule::ForallElim:
        return forall_elim(d);
    }
  }

 private:
  void fail(const std::string& reason) {
    rep_.ok = false;
    rep_.path = *path_;
    rep_.reason = reason;
  }

  bool cong(const Prop& a, const Prop& b, const std::string& what) {
    auto v = congruent(theory_, a, b, fuel_);
    rep_.side_conditions.push_back({*path_, what, v});
    if (v.yes()) return true;
    if (v.unknown())
      fail("congruence not established: " + what);
    else
      fail("side condition violated: " + what);
    return false;
  }

  bool same(const Prop& a, const Prop& b, const std::string& what) {
    if (alpha_eq(a, b)) return true;
    fail(what + " (" + to_string(a) + " vs " + to_string(b) + ")");
    return false;
  }

  void axiom(const Derivation& d) {
    if (!d.subject.is_var()) return fail("axiom subject is not a variable");
    if (!d.hyp.empty() && d.hyp != d.subject.name()) return fail("axiom hypothesis differs from subject");
    const Prop* a = d.ctx.lookup(d.subject.name());
    if (!a) return fail("hypothesis " + d.subject.name() + " not declared in context");
    cong(*a, d.prop, "A ≡ B for hypothesis " + d.subject.name());
  }

  void imp_intro(const Derivation& d) {
    if (!d.witness || !d.witness->is_imp()) return fail("missing implication witness");
    const Prop& w = *d.witness;
    const Derivation& p = d.premises[0];
    if (!d.subject.is_lam()) return fail("imp-intro subject is not an abstraction");
    if (!d.hyp.empty() && d.hyp != d.subject.name()) return fail("discharged variable differs from binder");
    if (!p.ctx.same_as(d.ctx.extend(d.subject.name(), w.lhs())))
      return fail("premise context is not Γ, " + d.subject.name() + ":A");
    if (!alpha_eq(p.subject, d.subject.body())) return fail("premise subject differs from abstraction body");
    if (!same(p.prop, w.rhs(), "premise proposition is not the witness conclusion")) return;
    cong(d.prop, w, "C ≡ A => B");
  }

  void imp_elim(const Derivation& d) {
    if (!d.witness || !d.witness->is_imp()) return fail("missing implication witness");
    const Prop& w = *d.witness;
    const Derivation& f = d.premises[0];
    const Derivation& a = d.premises[1];
    if (!d.subject.is_app()) return fail("imp-elim subject is not an application");
    if (!f.ctx.same_as(d.ctx) || !a.ctx.same_as(d.ctx)) return fail("premise contexts differ from conclusion");
    if (!alpha_eq(f.subject, d.subject.fun()) || !alpha_eq(a.subject, d.subject.arg()))
      return fail("premise subjects do not recombine to the conclusion subject");
    if (!same(a.prop, w.lhs(), "argument proposition is not the witness hypothesis")) return;
    if (!same(d.prop, w.rhs(), "conclusion is not the witness conclusion")) return;
    cong(f.prop, w, "C ≡ A => B");
  }

  void forall_intro(const Derivation& d) {
    if (!d.witness || !d.witness->is_forall()) return fail("missing quantifier witness");
    const Prop& w = *d.witness;
    const Derivation& p = d.premises[0];
    if (!p.ctx.same_as(d.ctx)) return fail("premise context differs from conclusion");
    if (d.style == Style::Church) {
      if (!d.subject.is_tlam() || d.subject.name() != w.name())
        return fail("Church forall-intro subject is not a term abstraction over " + w.name());
      if (!alpha_eq(d.subject.body(), p.subject)) return fail("premise subject differs from abstraction body");
    } else if (!alpha_eq(d.subject, p.subject)) {
      return fail("Curry forall-intro changes the subject");
    }
    if (!same(p.prop, w.body(), "premise proposition is not the witness body")) return;
    if (d.ctx.free_term_vars().count(w.name())) return fail("side condition violated: " + w.name() + " ∉ FV(Γ)");
    cong(d.prop, w, "B ≡ ∀x.A");
  }

  void forall_elim(const Derivation& d) {
    if (!d.witness || !d.witness->is_forall()) return fail("missing quantifier witness");
    if (!d.inst) return fail("missing instantiating term");
    const Prop& w = *d.witness;
    const Derivation& p = d.premises[0];
    if (!p.ctx.same_as(d.ctx)) return fail("premise context differs from conclusion");
    if (d.style == Style::Church) {
      if (!d.subject.is_tapp() || !(d.subject.term_arg() == *d.inst))
        return fail("Church forall-elim subject is not an application to the instantiating term");
      if (!alpha_eq(d.subject.fun(), p.subject)) return fail("premise subject differs from applied term");
    } else if (!alpha_eq(d.subject, p.subject)) {
      return fail("Curry forall-elim changes the subject");
    }
    if (!cong(p.prop, w, "B ≡ ∀x.A")) return;
    cong(d.prop, subst_term_in_prop(w.body(), w.name(), *d.inst), "C ≡ (t/x)A");
  }

  const Theory& theory_;
  std::size_t fuel_;
  CheckReport& rep_;
  const std::string* path_ = nullptr;
};

}  // namespace

CheckReport check_derivation(const Theory& t, const Derivation& d, std::size_t fuel) {
  CheckReport rep;
  Checker c(t, fuel, rep);
  c.node(d, "root");
  return rep;
}

// ---------------------------------------------------------------------------
// Variable inventories

namespace {

void all_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) all_vars(a, out);
}

void all_vars(const Prop& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      for (const auto& a : p.args()) all_vars(a, out);
      return;
    case Prop::Kind::Imp:
      all_vars(p.lhs(), out);
      all_vars(p.rhs(), out);
      return;
    case Prop::Kind::Forall:
      out.insert(p.name());
      all_vars(p.body(), out);
      return;
  }
}

void proof_term_vars(const Proof& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return;
    case Proof::Kind::Lam:
      return proof_term_vars(p.body(), out);
    case Proof::Kind::App:
      proof_term_vars(p.fun(), out);
      return proof_term_vars(p.arg(), out);
    case Proof::Kind::TLam:
      out.insert(p.name());
      return proof_term_vars(p.body(), out);
    case Proof::Kind::TApp:
      all_vars(p.term_arg(), out);
      return proof_term_vars(p.fun(), out);
  }
}

void proof_names(const Proof& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      out.insert(p.name());
      return;
    case Proof::Kind::Lam:
      out.insert(p.name());
      return proof_names(p.body(), out);
    case Proof::Kind::App:
      proof_names(p.fun(), out);
      return proof_names(p.arg(), out);
    case Proof::Kind::TLam:
    case Proof::Kind::TApp:
      return proof_names(p.fun(), out);
  }
}

void collect_term_vars(const Derivation& d, std::set<std::string>& out) {
  for (const auto& [n, p] : d.ctx.entries()) all_vars(p, out);
  all_vars(d.prop, out);
  if (d.witness) all_vars(*d.witness, out);
  if (d.inst) all_vars(*d.inst, out);
  proof_term_vars(d.subject, out);
  for (const auto& p : d.premises) collect_term_vars(p, out);
}

void collect_proof_vars(const Derivation& d, std::set<std::string>& out) {
  for (const auto& [n, p] : d.ctx.entries()) out.insert(n);
  if (!d.hyp.empty()) out.insert(d.hyp);
  proof_names(d.subject, out);
  for (const auto& p : d.premises) collect_proof_vars(p, out);
}

}  // namespace

std::set<std::string> all_term_vars(const Derivation& d) {
  std::set<std::string> out;
  collect_term_vars(d, out);
  return out;
}

std::set<std::string> all_proof_vars(const Derivation& d) {
  std::set<std::string> out;
  collect_proof_vars(d, out);
  return out;
}

// ---------------------------------------------------------------------------
// Transforms

Derivation reconclude(const Derivation& d, const Prop& c) {
  Derivation out = d;
  out.prop = c;
  if (d.rule == Rule::ImpElim && d.witness) out.witness = Prop::imp(d.witness->lhs(), c);
  return out;
}

Derivation subst_derivation_term(const Derivation& d, const std::string& x, const Term& t) {
  if (t.is_var() && t.name() == x) return d;
  if (!all_term_vars(d).count(x)) return d;
  Context g = d.ctx.subst_term(x, t);
  Prop c = subst_term_in_prop(d.prop, x, t);
  switch (d.rule) {
    case Rule::Axiom:
      return make_axiom(d.style, g, d.hyp.empty() ? d.subject.name() : d.hyp, c);
    case Rule::ImpIntro:
      return make_imp_intro(g, d.subject.name(), subst_term_in_prop(*d.witness, x, t), c,
                            subst_derivation_term(d.premises[0], x, t));
    case Rule::ImpElim:
      return make_imp_elim(g, subst_term_in_prop(*d.witness, x, t), c, subst_derivation_term(d.premises[0], x, t),
                           subst_derivation_term(d.premises[1], x, t));
    case Rule::ForallIntro: {
      std::string y = d.witness->name();
      Prop body = d.witness->body();
      Derivation prem = d.premises[0];
      auto tfv = free_term_vars(t);
      if (y == x || tfv.count(y)) {
        std::set<std::string> avoid = all_term_vars(d);
        avoid.merge(tfv);
        avoid.insert(x);
        std::string z = fresh_name(y, avoid);
        prem = subst_derivation_term(prem, y, Term::var(z));
        body = subst_term_in_prop(body, y, Term::var(z));
        y = z;
      }
      prem = subst_derivation_term(prem, x, t);
      return make_forall_intro(g, Prop::forall(y, subst_term_in_prop(body, x, t)), c, std::move(prem));
    }
    case Rule::ForallElim:
      return make_forall_elim(g, subst_term_in_prop(*d.witness, x, t), subst_term(*d.inst, x, t), c,
                              subst_derivation_term(d.premises[0], x, t));
  }
  return d;
}

namespace {

// Rebuilds a derivation in a target context. `rho` renames hypotheses of the
// source scope into the target scope; when `repl_var` is set, axioms on that
// variable are replaced by `repl` (rebased into the local context).
class Rebuilder {
 public:
  explicit Rebuilder(const Derivation* repl = nullptr) : repl_(repl) {
    if (repl_) {
      repl_proof_vars_ = all_proof_vars(*repl_);
      repl_term_vars_ = all_term_vars(*repl_);
    }
  }

  Derivation go(const Derivation& d, const Context& g, const std::map<std::string, std::string>& rho,
                const std::optional<std::string>& repl_var) {
    switch (d.rule) {
      case Rule::Axiom: {
        std::string h = d.hyp.empty() ? d.subject.name() : d.hyp;
        if (repl_var && h == *repl_var) {
          Rebuilder plain;
          return reconclude(plain.go(*repl_, g, {}, std::nullopt), d.prop);
        }
        auto it = rho.find(h);
        return make_axiom(d.style, g, it == rho.end() ? h : it->second, d.prop);
      }
      case Rule::ImpIntro: {
        std::string a = d.subject.name();
        std::string a2 = a;
        if (g.has(a)) {
          std::set<std::string> avoid = g.names();
          avoid.merge(all_proof_vars(d));
          avoid.insert(repl_proof_vars_.begin(), repl_proof_vars_.end());
          a2 = fresh_name(a, avoid);
        }
        auto rho2 = rho;
        if (a2 == a)
          rho2.erase(a);
        else
          rho2[a] = a2;
        std::optional<std::string> rv2 = (repl_var && *repl_var == a) ? std::nullopt : repl_var;
        Derivation prem = go(d.premises[0], g.extend(a2, d.witness->lhs()), rho2, rv2);
        return make_imp_intro(g, a2, *d.witness, d.prop, std::move(prem));
      }
      case Rule::ImpElim:
        return make_imp_elim(g, *d.witness, d.prop, go(d.premises[0], g, rho, repl_var),
                             go(d.premises[1], g, rho, repl_var));
      case Rule::ForallIntro: {
        Prop w = *d.witness;
        Derivation prem = d.premises[0];
        auto gfv = g.free_term_vars();
        if (gfv.count(w.name())) {
          std::set<std::string> avoid = gfv;
          avoid.merge(all_term_vars(d));
          avoid.insert(repl_term_vars_.begin(), repl_term_vars_.end());
          std::string z = fresh_name(w.name(), avoid);
          prem = subst_derivation_term(prem, w.name(), Term::var(z));
          w = Prop::forall(z, subst_term_in_prop(w.body(), w.name(), Term::var(z)));
        }
        return make_forall_intro(g, w, d.prop, go(prem, g, rho, repl_var));
      }
      case Rule::ForallElim:
        return make_forall_elim(g, *d.witness, *d.inst, d.prop, go(d.premises[0], g, rho, repl_var));
    }
    return d;
  }

 private:
  const Derivation* repl_;
  std::set<std::string> repl_proof_vars_;
  std::set<std::string> repl_term_vars_;
};

}  // namespace

Derivation weaken(const Derivation& d, const Context& g2) {
  if (!d.ctx.subset_of(g2)) throw TransformError("weaken: target context does not extend the derivation context");
  return Rebuilder().go(d, g2, {}, std::nullopt);
}

Derivation subst_derivation_proof(const Derivation& d, const std::string& a, const Derivation& darg) {
  if (!d.ctx.has(a)) throw TransformError("subst: variable " + a + " is not declared in the context");
  if (free_proof_vars(darg.subject).count(a))
    throw TransformError("subst: variable " + a + " is free in the substituted proof-term");
  if (darg.style != d.style) throw TransformError("subst: style mismatch");
  Context g = d.ctx.without(a);
  for (const auto& [n, p] : darg.ctx.entries()) {
    if (n == a) continue;
    if (const Prop* q = g.lookup(n)) {
      if (!alpha_eq(*q, p)) throw TransformError("subst: contexts disagree on " + n);
    } else {
      g = g.extend(n, p);
    }
  }
  // The argument is rebased into contexts that may lack its own `a` entry;
  // drop it first (it is not free in the argument's subject).
  Derivation arg = darg;
  if (darg.ctx.has(a)) {
    arg = Rebuilder().go(darg, darg.ctx.without(a), {}, std::nullopt);
  }
  return Rebuilder(&arg).go(d, g, {}, a);
}

Proof erase(const Proof& p) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return p;
    case Proof::Kind::Lam:
      return Proof::lam(p.name(), erase(p.body()));
    case Proof::Kind::App:
      return Proof::app(erase(p.fun()), erase(p.arg()));
    case Proof::Kind::TLam:
      return erase(p.body());
    case Proof::Kind::TApp:
      return erase(p.fun());
  }
  return p;
}

Derivation erase_derivation(const Derivation& d) {
  Derivation out = d;
  out.style = Style::Curry;
  out.subject = erase(d.subject);
  for (auto& p : out.premises) p = erase_derivation(p);
  return out;
}

std::optional<TransportResult> confusion_transport(const Derivation& d) {
  if (d.style != Style::Curry) return std::nullopt;
  const Prop& c = d.prop;
  if (!c.is_imp() || !c.rhs().is_forall()) return std::nullopt;
  const Prop& a = c.lhs();
  const std::string& x = c.rhs().name();
  const Prop& b = c.rhs().body();
  if (occurs_free(x, a) || d.ctx.free_term_vars().count(x)) return std::nullopt;
  Prop target = Prop::forall(x, Prop::imp(a, b));
  if (d.rule == Rule::ImpIntro && d.witness && alpha_eq(*d.witness, c)) {
    const Derivation& prem = d.premises[0];
    const std::string& h = d.subject.name();
    Derivation elim = make_forall_elim(prem.ctx, c.rhs(), Term::var(x), b, prem);
    Derivation intro = make_imp_intro(d.ctx, h, Prop::imp(a, b), Prop::imp(a, b), std::move(elim));
    Derivation all = make_forall_intro(d.ctx, target, target, std::move(intro));
    return TransportResult{std::move(all), true};
  }
  return TransportResult{reconclude(d, target), false};
}

// ---------------------------------------------------------------------------
// Derivation files

namespace {

class DrvParser {
 public:
  DrvParser(std::string_view text, Style style, const Signature* sig) : text_(text), style_(style), sig_(sig) {}

  Derivation parse() {
    Derivation d = node();
    skip();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return d;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError("derivation: " + msg, pos_); }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';' || c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string word() {
    skip();
    std::size_t s = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-'))
      ++pos_;
    if (s == pos_) fail("expected a name");
    return std::string(text_.substr(s, pos_ - s));
  }

  template <class F>
  auto nested(F&& f, std::size_t base) {
    try {
      return f();
    } catch (const SyntaxError& e) {
      throw SyntaxError(std::string("derivation field: ") + e.what(), base + e.position());
    }
  }

  Derivation node() {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '('");
    ++pos_;
    std::size_t rule_pos = pos_;
    Rule rule;
    try {
      rule = parse_rule(word());
    } catch (const std::invalid_argument& e) {
      pos_ = rule_pos;
      fail(e.what());
    }
    std::map<std::string, std::pair<std::string, std::size_t>> fields;
    std::vector<Derivation> premises;
    while (true) {
      skip();
      if (pos_ >= text_.size()) fail("unterminated node");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      if (text_[pos_] == '(') {
        premises.push_back(node());
        continue;
      }
      std::string key = word();
      if (pos_ >= text_.size() || text_[pos_] != ':') fail("expected ':' after field name");
      ++pos_;
      if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected '\"'");
      ++pos_;
      std::size_t s = pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
      if (pos_ >= text_.size()) fail("unterminated string");
      fields[key] = {std::string(text_.substr(s, pos_ - s)), s};
      ++pos_;
    }
    if (premises.size() != premise_count(rule)) fail("wrong number of premises for " + std::string(to_string(rule)));

    auto get = [&](const std::string& k) -> const std::pair<std::string, std::size_t>* {
      auto it = fields.find(k);
      return it == fields.end() ? nullptr : &it->second;
    };
    for (const auto& [k, v] : fields)
      if (k != "ctx" && k != "subj" && k != "prop" && k != "hyp" && k != "wit" && k != "term")
        fail("unknown field '" + k + "'");

    Derivation d;
    d.rule = rule;
    d.style = style_;
    d.premises = std::move(premises);
    if (auto f = get("ctx")) d.ctx = nested([&] { return parse_context(f->first, sig_); }, f->second);
    auto prop = get("prop");
    if (!prop) fail("missing prop field");
    d.prop = nested([&] { return parse_prop(prop->first, sig_); }, prop->second);
    if (auto f = get("wit")) d.witness = nested([&] { return parse_prop(f->first, sig_); }, f->second);
    if (auto f = get("term")) d.inst = nested([&] { return parse_term(f->first, sig_); }, f->second);
    if (auto f = get("hyp")) d.hyp = f->first;

    switch (rule) {
      case Rule::Axiom:
        break;
      case Rule::ImpIntro:
      case Rule::ForallIntro:
        if (!d.witness) d.witness = d.prop;
        break;
      case Rule::ImpElim:
        if (!d.witness) d.witness = Prop::imp(d.premises[1].prop, d.prop);
        break;
      case Rule::ForallElim:
        if (!d.witness) d.witness = d.premises[0].prop;
        if (!d.inst) fail("forall-elim needs a term field");
        break;
    }

    if (auto f = get("subj")) {
      d.subject = nested([&] { return parse_proof(f->first, style_, sig_); }, f->second);
    } else {
      switch (rule) {
        case Rule::Axiom:
          if (d.hyp.empty()) fail("axiom needs subj or hyp");
          d.subject = Proof::var(d.hyp);
          break;
        case Rule::ImpIntro:
          if (d.hyp.empty()) fail("imp-intro needs subj or hyp");
          d.subject = Proof::lam(d.hyp, d.premises[0].subject);
          break;
        case Rule::ImpElim:
          d.subject = Proof::app(d.premises[0].subject, d.premises[1].subject);
          break;
        case Rule::ForallIntro:
          d.subject = style_ == Style::Church && d.witness->is_forall()
                          ? Proof::tlam(d.witness->name(), d.premises[0].subject)
                          : d.premises[0].subject;
          break;
        case Rule::ForallElim:
          d.subject = style_ == Style::Church ? Proof::tapp(d.premises[0].subject, *d.inst) : d.premises[0].subject;
          break;
      }
    }
    if (d.hyp.empty() && (rule == Rule::Axiom ? d.subject.is_var() : rule == Rule::ImpIntro && d.subject.is_lam()))
      d.hyp = d.subject.name();
    return d;
  }

  std::string_view text_;
  Style style_;
  const Signature* sig_;
  std::size_t pos_ = 0;
};

void print_drv(const Derivation& d, int indent, std::ostream& os) {
  os << std::string(indent, ' ') << '(' << to_string(d.rule);
  os << " ctx:\"" << to_string(d.ctx) << '"';
  os << " subj:\"" << to_string(d.subject) << '"';
  os << " prop:\"" << to_string(d.prop) << '"';
  if (d.witness) os << " wit:\"" << to_string(*d.witness) << '"';
  if (d.inst) os << " term:\"" << to_string(*d.inst) << '"';
  for (const auto& p : d.premises) {
    os << '\n';
    print_drv(p, indent + 2, os);
  }
  os << ')';
}

}  // namespace

Derivation parse_derivation(std::string_view text, Style style, const Signature* sig) {
  return DrvParser(text, style, sig).parse();
}

Derivation load_derivation(const std::string& path, Style style, const Signature* sig) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open derivation file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_derivation(ss.str(), style, sig);
}

std::string to_drv(const Derivation& d) {
  std::ostringstream os;
  print_drv(d, 0, os);
  os << '\n';
  return os.str();
}

}  // namespace mdm
