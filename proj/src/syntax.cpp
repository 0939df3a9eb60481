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

#include "mdm/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mdm {

std::string_view to_string(Style style) {
  return style == Style::Church ? "church" : "curry";
}

Style parse_style(std::string_view text) {
  if (text == "church") return Style::Church;
  if (text == "curry") return Style::Curry;
  throw std::invalid_argument("unknown style '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<SymbolDecl> functions, std::vector<SymbolDecl> predicates) {
  for (auto& f : functions) add_function(std::move(f.name), f.arity);
  for (auto& p : predicates) add_predicate(std::move(p.name), p.arity);
}

void Signature::add_function(std::string name, std::size_t arity) {
  if (function_arity(name)) throw std::invalid_argument("duplicate function symbol '" + name + "'");
  functions_.push_back({std::move(name), arity});
}

void Signature::add_predicate(std::string name, std::size_t arity) {
  if (predicate_arity(name)) throw std::invalid_argument("duplicate predicate symbol '" + name + "'");
  predicates_.push_back({std::move(name), arity});
}

std::optional<std::size_t> Signature::function_arity(std::string_view name) const {
  for (const auto& f : functions_)
    if (f.name == name) return f.arity;
  return std::nullopt;
}

std::optional<std::size_t> Signature::predicate_arity(std::string_view name) const {
  for (const auto& p : predicates_)
    if (p.name == name) return p.arity;
  return std::nullopt;
}

void Signature::validate() const {
  if (predicates_.empty()) throw std::invalid_argument("signature has no predicate symbol");
}

// ---------------------------------------------------------------------------
// Constructors and accessors

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, 1}));
}

Term Term::app(std::string function, std::vector<Term> args) {
  std::size_t size = 1;
  for (const auto& a : args) size += a.size();
  return Term(std::make_shared<const Node>(Node{Kind::App, std::move(function), std::move(args), size}));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_->args; }
std::size_t Term::size() const { return node_->size; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  return true;
}

Prop Prop::atom(std::string predicate, std::vector<Term> args) {
  std::size_t size = 1;
  for (const auto& a : args) size += a.size();
  return Prop(std::make_shared<const Node>(Node{Kind::Atom, std::move(predicate), std::move(args), {}, size}));
}

Prop Prop::imp(Prop lhs, Prop rhs) {
  std::size_t size = 1 + lhs.size() + rhs.size();
  return Prop(std::make_shared<const Node>(Node{Kind::Imp, "", {}, {std::move(lhs), std::move(rhs)}, size}));
}

Prop Prop::forall(std::string var, Prop body) {
  std::size_t size = 1 + body.size();
  return Prop(std::make_shared<const Node>(Node{Kind::Forall, std::move(var), {}, {std::move(body)}, size}));
}

Prop::Kind Prop::kind() const { return node_->kind; }
const std::string& Prop::name() const { return node_->name; }
const std::vector<Term>& Prop::args() const { return node_->args; }
const Prop& Prop::lhs() const { return node_->children.at(0); }
const Prop& Prop::rhs() const { return node_->children.at(1); }
const Prop& Prop::body() const { return node_->children.at(0); }
std::size_t Prop::size() const { return node_->size; }

bool operator==(const Prop& a, const Prop& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name()) return false;
  if (a.args().size() != b.args().size() || a.node_->children.size() != b.node_->children.size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  for (std::size_t i = 0; i < a.node_->children.size(); ++i)
    if (!(a.node_->children[i] == b.node_->children[i])) return false;
  return true;
}

Proof Proof::var(std::string name) {
  return Proof(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, std::nullopt, 1}));
}

Proof Proof::lam(std::string var, Proof body) {
  std::size_t size = 1 + body.size();
  return Proof(std::make_shared<const Node>(Node{Kind::Lam, std::move(var), {std::move(body)}, std::nullopt, size}));
}

Proof Proof::app(Proof fun, Proof arg) {
  std::size_t size = 1 + fun.size() + arg.size();
  return Proof(std::make_shared<const Node>(Node{Kind::App, "", {std::move(fun), std::move(arg)}, std::nullopt, size}));
}

Proof Proof::tlam(std::string var, Proof body) {
  std::size_t size = 1 + body.size();
  return Proof(std::make_shared<const Node>(Node{Kind::TLam, std::move(var), {std::move(body)}, std::nullopt, size}));
}

Proof Proof::tapp(Proof fun, Term arg) {
  std::size_t size = 1 + fun.size();
  return Proof(std::make_shared<const Node>(Node{Kind::TApp, "", {std::move(fun)}, std::move(arg), size}));
}

Proof::Kind Proof::kind() const { return node_->kind; }
const std::string& Proof::name() const { return node_->name; }
const Proof& Proof::body() const { return node_->children.at(0); }
const Proof& Proof::fun() const { return node_->children.at(0); }
const Proof& Proof::arg() const { return node_->children.at(1); }
const Term& Proof::term_arg() const { return *node_->term; }
std::size_t Proof::size() const { return node_->size; }

bool operator==(const Proof& a, const Proof& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name()) return false;
  if (a.node_->children.size() != b.node_->children.size()) return false;
  for (std::size_t i = 0; i < a.node_->children.size(); ++i)
    if (!(a.node_->children[i] == b.node_->children[i])) return false;
  if (a.node_->term.has_value() != b.node_->term.has_value()) return false;
  return !a.node_->term || *a.node_->term == *b.node_->term;
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collect_fv(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_fv(a, out);
}

bool term_mentions(const Term& t, const std::string& x) {
  if (t.is_var()) return t.name() == x;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return term_mentions(a, x); });
}

}  // namespace

std::set<std::string> free_term_vars(const Term& t) {
  std::set<std::string> out;
  collect_fv(t, out);
  return out;
}

std::set<std::string> free_term_vars(const Prop& p) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::set<std::string> out;
      for (const auto& a : p.args()) collect_fv(a, out);
      return out;
    }
    case Prop::Kind::Imp: {
      auto out = free_term_vars(p.lhs());
      out.merge(free_term_vars(p.rhs()));
      return out;
    }
    case Prop::Kind::Forall: {
      auto out = free_term_vars(p.body());
      out.erase(p.name());
      return out;
    }
  }
  return {};
}

std::set<std::string> free_term_vars(const Proof& p) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return {};
    case Proof::Kind::Lam:
      return free_term_vars(p.body());
    case Proof::Kind::App: {
      auto out = free_term_vars(p.fun());
      out.merge(free_term_vars(p.arg()));
      return out;
    }
    case Proof::Kind::TLam: {
      auto out = free_term_vars(p.body());
      out.erase(p.name());
      return out;
    }
    case Proof::Kind::TApp: {
      auto out = free_term_vars(p.fun());
      collect_fv(p.term_arg(), out);
      return out;
    }
  }
  return {};
}

std::set<std::string> free_proof_vars(const Proof& p) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return {p.name()};
    case Proof::Kind::Lam: {
      auto out = free_proof_vars(p.body());
      out.erase(p.name());
      return out;
    }
    case Proof::Kind::App: {
      auto out = free_proof_vars(p.fun());
      out.merge(free_proof_vars(p.arg()));
      return out;
    }
    case Proof::Kind::TLam:
    case Proof::Kind::TApp:
      return free_proof_vars(p.fun());
  }
  return {};
}

bool occurs_free(const std::string& x, const Prop& p) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      return std::any_of(p.args().begin(), p.args().end(), [&](const Term& a) { return term_mentions(a, x); });
    case Prop::Kind::Imp:
      return occurs_free(x, p.lhs()) || occurs_free(x, p.rhs());
    case Prop::Kind::Forall:
      return p.name() != x && occurs_free(x, p.body());
  }
  return false;
}

bool is_curry(const Proof& p) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return true;
    case Proof::Kind::Lam:
      return is_curry(p.body());
    case Proof::Kind::App:
      return is_curry(p.fun()) && is_curry(p.arg());
    case Proof::Kind::TLam:
    case Proof::Kind::TApp:
      return false;
  }
  return false;
}

bool is_neutral(const Proof& p) { return !p.is_lam() && !p.is_tlam(); }

// ---------------------------------------------------------------------------
// Substitution

std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& taken) {
  if (!taken(base)) return base;
  std::string root = base;
  while (!root.empty() && std::isdigit(static_cast<unsigned char>(root.back()))) root.pop_back();
  if (root.empty()) root = "v";
  for (std::size_t k = 1;; ++k) {
    std::string candidate = root + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  return fresh_name(base, [&](const std::string& n) { return taken.count(n) > 0; });
}

Term subst_term(const Term& target, const std::string& x, const Term& t) {
  if (target.is_var()) return target.name() == x ? t : target;
  if (!term_mentions(target, x)) return target;
  std::vector<Term> args;
  args.reserve(target.args().size());
  for (const auto& a : target.args()) args.push_back(subst_term(a, x, t));
  return Term::app(target.name(), std::move(args));
}

Term subst_terms(const Term& target, const TermSubst& s) {
  if (target.is_var()) {
    auto it = s.find(target.name());
    return it == s.end() ? target : it->second;
  }
  std::vector<Term> args;
  args.reserve(target.args().size());
  for (const auto& a : target.args()) args.push_back(subst_terms(a, s));
  return Term::app(target.name(), std::move(args));
}

Prop subst_term_in_prop(const Prop& p, const std::string& x, const Term& t) {
  return subst_terms(p, TermSubst{{x, t}});
}

Prop subst_terms(const Prop& p, const TermSubst& s) {
  if (s.empty()) return p;
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(p.args().size());
      for (const auto& a : p.args()) args.push_back(subst_terms(a, s));
      return Prop::atom(p.name(), std::move(args));
    }
    case Prop::Kind::Imp:
      return Prop::imp(subst_terms(p.lhs(), s), subst_terms(p.rhs(), s));
    case Prop::Kind::Forall: {
      const std::string& y = p.name();
      const Prop& body = p.body();
      TermSubst inner;
      for (const auto& [v, t] : s)
        if (v != y && occurs_free(v, body)) inner.emplace(v, t);
      if (inner.empty()) return p;
      std::set<std::string> incoming;
      for (const auto& [v, t] : inner) collect_fv(t, incoming);
      if (!incoming.count(y)) return Prop::forall(y, subst_terms(body, inner));
      std::set<std::string> avoid = incoming;
      avoid.merge(free_term_vars(body));
      for (const auto& [v, t] : inner) avoid.insert(v);
      std::string y2 = fresh_name(y, avoid);
      inner.emplace(y, Term::var(y2));
      return Prop::forall(y2, subst_terms(body, inner));
    }
  }
  return p;
}

namespace {

Proof subst_term_in_proof_impl(const Proof& p, const TermSubst& s);

Proof rename_term_binder(const Proof& tlam, const std::set<std::string>& avoid) {
  std::set<std::string> taken = avoid;
  taken.merge(free_term_vars(tlam.body()));
  std::string y2 = fresh_name(tlam.name(), taken);
  return Proof::tlam(y2, subst_term_in_proof_impl(tlam.body(), TermSubst{{tlam.name(), Term::var(y2)}}));
}

Proof subst_term_in_proof_impl(const Proof& p, const TermSubst& s) {
  if (s.empty()) return p;
  switch (p.kind()) {
    case Proof::Kind::Var:
      return p;
    case Proof::Kind::Lam:
      return Proof::lam(p.name(), subst_term_in_proof_impl(p.body(), s));
    case Proof::Kind::App:
      return Proof::app(subst_term_in_proof_impl(p.fun(), s), subst_term_in_proof_impl(p.arg(), s));
    case Proof::Kind::TApp:
      return Proof::tapp(subst_term_in_proof_impl(p.fun(), s), subst_terms(p.term_arg(), s));
    case Proof::Kind::TLam: {
      const std::string& y = p.name();
      TermSubst inner;
      auto body_fv = free_term_vars(p.body());
      for (const auto& [v, t] : s)
        if (v != y && body_fv.count(v)) inner.emplace(v, t);
      if (inner.empty()) return p;
      std::set<std::string> incoming;
      for (const auto& [v, t] : inner) collect_fv(t, incoming);
      if (!incoming.count(y)) return Proof::tlam(y, subst_term_in_proof_impl(p.body(), inner));
      for (const auto& [v, t] : inner) incoming.insert(v);
      Proof renamed = rename_term_binder(p, incoming);
      return Proof::tlam(renamed.name(), subst_term_in_proof_impl(renamed.body(), inner));
    }
  }
  return p;
}

}  // namespace

Proof subst_proof(const Proof& body, const std::string& a, const Proof& arg) {
  switch (body.kind()) {
    case Proof::Kind::Var:
      return body.name() == a ? arg : body;
    case Proof::Kind::App:
      return Proof::app(subst_proof(body.fun(), a, arg), subst_proof(body.arg(), a, arg));
    case Proof::Kind::TApp:
      return Proof::tapp(subst_proof(body.fun(), a, arg), body.term_arg());
    case Proof::Kind::Lam: {
      const std::string& b = body.name();
      if (b == a) return body;
      auto inner_fv = free_proof_vars(body.body());
      if (!inner_fv.count(a)) return body;
      auto arg_fv = free_proof_vars(arg);
      if (!arg_fv.count(b)) return Proof::lam(b, subst_proof(body.body(), a, arg));
      std::set<std::string> avoid = arg_fv;
      avoid.merge(inner_fv);
      avoid.insert(a);
      std::string b2 = fresh_name(b, avoid);
      Proof renamed = rename_free_proof_var(body.body(), b, b2);
      return Proof::lam(b2, subst_proof(renamed, a, arg));
    }
    case Proof::Kind::TLam: {
      if (!free_proof_vars(body.body()).count(a)) return body;
      auto arg_tfv = free_term_vars(arg);
      if (!arg_tfv.count(body.name())) return Proof::tlam(body.name(), subst_proof(body.body(), a, arg));
      Proof renamed = rename_term_binder(body, arg_tfv);
      return Proof::tlam(renamed.name(), subst_proof(renamed.body(), a, arg));
    }
  }
  return body;
}

Proof subst_term_in_proof(const Proof& p, const std::string& x, const Term& t, Style style) {
  if (style == Style::Curry)
    throw std::invalid_argument("term substitution into a proof-term is only defined in Church style");
  return subst_term_in_proof_impl(p, TermSubst{{x, t}});
}

Proof rename_free_proof_var(const Proof& p, const std::string& from, const std::string& to) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return p.name() == from ? Proof::var(to) : p;
    case Proof::Kind::Lam:
      return p.name() == from ? p : Proof::lam(p.name(), rename_free_proof_var(p.body(), from, to));
    case Proof::Kind::App:
      return Proof::app(rename_free_proof_var(p.fun(), from, to), rename_free_proof_var(p.arg(), from, to));
    case Proof::Kind::TLam:
      return Proof::tlam(p.name(), rename_free_proof_var(p.body(), from, to));
    case Proof::Kind::TApp:
      return Proof::tapp(rename_free_proof_var(p.fun(), from, to), p.term_arg());
  }
  return p;
}

namespace {

Proof capture_replace(const Proof& p, const std::string& a, const Proof& m) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return p.name() == a ? m : p;
    case Proof::Kind::Lam:
      return p.name() == a ? p : Proof::lam(p.name(), capture_replace(p.body(), a, m));
    case Proof::Kind::App:
      return Proof::app(capture_replace(p.fun(), a, m), capture_replace(p.arg(), a, m));
    case Proof::Kind::TLam:
      return Proof::tlam(p.name(), capture_replace(p.body(), a, m));
    case Proof::Kind::TApp:
      return Proof::tapp(capture_replace(p.fun(), a, m), p.term_arg());
  }
  return p;
}

}  // namespace

Proof apply_capture_subst(const CaptureSubstitution& s, const Proof& target) {
  Proof out = target;
  for (const auto& [a, m] : s.pairs) out = capture_replace(out, a, m);
  return out;
}

// ---------------------------------------------------------------------------
// Alpha keys

namespace {

using Scope = std::vector<std::string>;

void key_term(const Term& t, const Scope& scope, std::string& out) {
  if (t.is_var()) {
    for (std::size_t i = scope.size(); i-- > 0;) {
      if (scope[i] == t.name()) {
        out += '#';
        out += std::to_string(scope.size() - 1 - i);
        return;
      }
    }
    out += t.name();
    return;
  }
  out += t.name();
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ',';
    key_term(t.args()[i], scope, out);
  }
  out += ')';
}

void key_prop(const Prop& p, Scope& scope, std::string& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      out += p.name();
      out += '(';
      for (std::size_t i = 0; i < p.args().size(); ++i) {
        if (i) out += ',';
        key_term(p.args()[i], scope, out);
      }
      out += ')';
      return;
    case Prop::Kind::Imp:
      out += '>';
      out += '(';
      key_prop(p.lhs(), scope, out);
      out += ',';
      key_prop(p.rhs(), scope, out);
      out += ')';
      return;
    case Prop::Kind::Forall:
      out += "!.(";
      scope.push_back(p.name());
      key_prop(p.body(), scope, out);
      scope.pop_back();
      out += ')';
      return;
  }
}

void key_proof(const Proof& p, Scope& pscope, Scope& tscope, std::string& out) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      for (std::size_t i = pscope.size(); i-- > 0;) {
        if (pscope[i] == p.name()) {
          out += '#';
          out += std::to_string(pscope.size() - 1 - i);
          return;
        }
      }
      out += p.name();
      return;
    case Proof::Kind::Lam:
      out += "\\.(";
      pscope.push_back(p.name());
      key_proof(p.body(), pscope, tscope, out);
      pscope.pop_back();
      out += ')';
      return;
    case Proof::Kind::App:
      out += "@(";
      key_proof(p.fun(), pscope, tscope, out);
      out += ',';
      key_proof(p.arg(), pscope, tscope, out);
      out += ')';
      return;
    case Proof::Kind::TLam:
      out += "^.(";
      tscope.push_back(p.name());
      key_proof(p.body(), pscope, tscope, out);
      tscope.pop_back();
      out += ')';
      return;
    case Proof::Kind::TApp:
      out += "[(";
      key_proof(p.fun(), pscope, tscope, out);
      out += ',';
      key_term(p.term_arg(), tscope, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string alpha_key(const Prop& p) {
  std::string out;
  Scope scope;
  key_prop(p, scope, out);
  return out;
}

std::string alpha_key(const Proof& p) {
  std::string out;
  Scope ps, ts;
  key_proof(p, ps, ts, out);
  return out;
}

bool alpha_eq(const Term& a, const Term& b) { return a == b; }
bool alpha_eq(const Prop& a, const Prop& b) { return a == b || alpha_key(a) == alpha_key(b); }
bool alpha_eq(const Proof& a, const Proof& b) { return a == b || alpha_key(a) == alpha_key(b); }

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_term(const Term& t, std::ostream& os) {
  os << t.name();
  if (t.is_var() || t.args().empty()) return;
  os << '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) os << ", ";
    print_term(t.args()[i], os);
  }
  os << ')';
}

// Precedence: 0 = anywhere, 1 = left of `=>` (binders and implications need
// parentheses).
void print_prop(const Prop& p, int prec, std::ostream& os) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      os << p.name();
      if (!p.args().empty()) {
        os << '(';
        for (std::size_t i = 0; i < p.args().size(); ++i) {
          if (i) os << ", ";
          print_term(p.args()[i], os);
        }
        os << ')';
      }
      return;
    case Prop::Kind::Imp:
      if (prec > 0) os << '(';
      print_prop(p.lhs(), 1, os);
      os << " => ";
      print_prop(p.rhs(), 0, os);
      if (prec > 0) os << ')';
      return;
    case Prop::Kind::Forall:
      if (prec > 0) os << '(';
      os << '!' << p.name() << ". ";
      print_prop(p.body(), 0, os);
      if (prec > 0) os << ')';
      return;
  }
}

// Precedence: 0 = anywhere, 1 = function position, 2 = argument position.
void print_proof(const Proof& p, int prec, std::ostream& os) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      os << p.name();
      return;
    case Proof::Kind::Lam:
    case Proof::Kind::TLam:
      if (prec > 0) os << '(';
      os << (p.is_lam() ? '\\' : '^') << p.name() << ". ";
      print_proof(p.body(), 0, os);
      if (prec > 0) os << ')';
      return;
    case Proof::Kind::App:
      if (prec > 1) os << '(';
      print_proof(p.fun(), 1, os);
      os << ' ';
      print_proof(p.arg(), 2, os);
      if (prec > 1) os << ')';
      return;
    case Proof::Kind::TApp:
      if (prec > 1) os << '(';
      print_proof(p.fun(), 1, os);
      os << " [";
      print_term(p.term_arg(), os);
      os << ']';
      if (prec > 1) os << ')';
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print_term(t, os);
  return os.str();
}

std::string to_string(const Prop& p) {
  std::ostringstream os;
  print_prop(p, 0, os);
  return os.str();
}

std::string to_string(const Proof& p) {
  std::ostringstream os;
  print_proof(p, 0, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

SyntaxError::SyntaxError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Signature* sig) : text_(text), sig_(sig) {}

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  bool peek(std::string_view tok) {
    skip();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg, pos_); }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  bool peek_ident() {
    skip();
    return pos_ < text_.size() && ident_start(text_[pos_]);
  }

  std::string ident() {
    skip();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing input");
  }

  Term term() {
    if (accept("(")) {
      Term t = term();
      expect(")");
      return t;
    }
    std::size_t start = (skip(), pos_);
    std::string name = ident();
    if (accept("(")) {
      std::vector<Term> args;
      if (!accept(")")) {
        do args.push_back(term());
        while (accept(","));
        expect(")");
      }
      if (sig_) {
        auto ar = sig_->function_arity(name);
        if (!ar) throw SyntaxError("unknown function symbol '" + name + "'", start);
        if (*ar != args.size()) throw SyntaxError("arity mismatch for '" + name + "'", start);
      }
      return Term::app(name, std::move(args));
    }
    if (sig_) {
      if (auto ar = sig_->function_arity(name)) {
        if (*ar != 0) throw SyntaxError("arity mismatch for '" + name + "'", start);
        return Term::app(name);
      }
    }
    return Term::var(name);
  }

  Prop prop() {
    Prop lhs = prop_unit();
    if (accept("=>")) return Prop::imp(lhs, prop());
    return lhs;
  }

  Prop prop_unit() {
    if (accept("!")) {
      std::string x = ident();
      expect(".");
      return Prop::forall(x, prop());
    }
    if (accept("(")) {
      Prop p = prop();
      expect(")");
      return p;
    }
    std::size_t start = (skip(), pos_);
    std::string name = ident();
    std::vector<Term> args;
    if (accept("(")) {
      if (!accept(")")) {
        do args.push_back(term());
        while (accept(","));
        expect(")");
      }
    }
    if (sig_) {
      auto ar = sig_->predicate_arity(name);
      if (!ar) throw SyntaxError("unknown predicate symbol '" + name + "'", start);
      if (*ar != args.size()) throw SyntaxError("arity mismatch for '" + name + "'", start);
    }
    return Prop::atom(name, std::move(args));
  }

  Proof proof(Style style) {
    std::optional<Proof> acc;
    while (true) {
      skip();
      if (peek("\\") || peek("^")) {
        Proof b = binder(style);
        acc = acc ? Proof::app(*acc, b) : b;
        break;
      }
      if (acc && peek("[")) {
        if (style == Style::Curry) fail("term application in a Curry-style proof-term");
        expect("[");
        Term t = term();
        expect("]");
        acc = Proof::tapp(*acc, t);
        continue;
      }
      if (peek("(")) {
        expect("(");
        Proof inner = proof(style);
        expect(")");
        acc = acc ? Proof::app(*acc, inner) : inner;
        continue;
      }
      if (peek_ident()) {
        Proof v = Proof::var(ident());
        acc = acc ? Proof::app(*acc, v) : v;
        continue;
      }
      break;
    }
    if (!acc) fail("expected proof-term");
    return *acc;
  }

  Proof binder(Style style) {
    if (accept("\\")) {
      std::string a = ident();
      expect(".");
      return Proof::lam(a, proof(style));
    }
    expect("^");
    if (style == Style::Curry) fail("term abstraction in a Curry-style proof-term");
    std::string x = ident();
    expect(".");
    return Proof::tlam(x, proof(style));
  }

 private:
  std::string_view text_;
  const Signature* sig_;
  std::size_t pos_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const Signature* sig) {
  Parser p(text, sig);
  Term t = p.term();
  p.finish();
  return t;
}

Prop parse_prop(std::string_view text, const Signature* sig) {
  Parser p(text, sig);
  Prop out = p.prop();
  p.finish();
  return out;
}

Proof parse_proof(std::string_view text, Style style, const Signature* sig) {
  Parser p(text, sig);
  Proof out = p.proof(style);
  p.finish();
  return out;
}

Syntax parse(std::string_view text, SyntaxKind kind, const Signature* sig) {
  switch (kind) {
    case SyntaxKind::Term:
      return parse_term(text, sig);
    case SyntaxKind::Proposition:
      return parse_prop(text, sig);
    case SyntaxKind::ProofChurch:
      return parse_proof(text, Style::Church, sig);
    case SyntaxKind::ProofCurry:
      return parse_proof(text, Style::Curry, sig);
  }
  throw std::invalid_argument("unknown syntax kind");
}

}  // namespace mdm
