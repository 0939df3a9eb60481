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

// Abstract syntax of minimal deduction modulo: first-order terms,
// propositions built from atoms, implication and universal quantification,
// and proof-terms in Church or Curry style.
//
// All syntax values are immutable and cheap to copy (shared nodes). Named
// binders are kept as written; every comparison that should be insensitive
// to bound names goes through alpha_eq / alpha_key.

#ifndef MDM_SYNTAX_HPP
#define MDM_SYNTAX_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mdm {

enum class Style { Church, Curry };

std::string_view to_string(Style style);
Style parse_style(std::string_view text);

struct SymbolDecl {
  std::string name;
  std::size_t arity = 0;
};

/// A mono-sorted first-order signature. Predicates must be non-empty for the
/// signature to be valid (see validate()).
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<SymbolDecl> functions, std::vector<SymbolDecl> predicates);

  void add_function(std::string name, std::size_t arity);
  void add_predicate(std::string name, std::size_t arity);

  std::optional<std::size_t> function_arity(std::string_view name) const;
  std::optional<std::size_t> predicate_arity(std::string_view name) const;

  const std::vector<SymbolDecl>& functions() const { return functions_; }
  const std::vector<SymbolDecl>& predicates() const { return predicates_; }

  /// Throws std::invalid_argument when the predicate list is empty.
  void validate() const;

 private:
  std::vector<SymbolDecl> functions_;
  std::vector<SymbolDecl> predicates_;
};

class Term {
 public:
  enum class Kind { Var, App };

  static Term var(std::string name);
  static Term app(std::string function, std::vector<Term> args = {});

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  /// Variable name or function symbol.
  const std::string& name() const;
  const std::vector<Term>& args() const;
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class Prop {
 public:
  enum class Kind { Atom, Imp, Forall };

  static Prop atom(std::string predicate, std::vector<Term> args = {});
  static Prop imp(Prop lhs, Prop rhs);
  static Prop forall(std::string var, Prop body);

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_imp() const { return kind() == Kind::Imp; }
  bool is_forall() const { return kind() == Kind::Forall; }

  /// Predicate symbol (Atom) or bound variable (Forall).
  const std::string& name() const;
  const std::vector<Term>& args() const;
  const Prop& lhs() const;
  const Prop& rhs() const;
  const Prop& body() const;
  std::size_t size() const;

  /// Syntactic identity, bound names included. Use alpha_eq for the
  /// mathematical equality.
  friend bool operator==(const Prop& a, const Prop& b);

 private:
  struct Node;
  explicit Prop(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class Proof {
 public:
  enum class Kind { Var, Lam, App, TLam, TApp };

  static Proof var(std::string name);
  static Proof lam(std::string var, Proof body);
  static Proof app(Proof fun, Proof arg);
  static Proof tlam(std::string var, Proof body);
  static Proof tapp(Proof fun, Term arg);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_lam() const { return kind() == Kind::Lam; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_tlam() const { return kind() == Kind::TLam; }
  bool is_tapp() const { return kind() == Kind::TApp; }

  /// Variable name (Var) or binder name (Lam, TLam).
  const std::string& name() const;
  const Proof& body() const;
  const Proof& fun() const;
  const Proof& arg() const;
  const Term& term_arg() const;
  std::size_t size() const;

  friend bool operator==(const Proof& a, const Proof& b);

 private:
  struct Node;
  explicit Proof(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<Term> args;
  std::size_t size;
};

struct Prop::Node {
  Kind kind;
  std::string name;
  std::vector<Term> args;
  std::vector<Prop> children;
  std::size_t size;
};

struct Proof::Node {
  Kind kind;
  std::string name;
  std::vector<Proof> children;
  std::optional<Term> term;
  std::size_t size;
};

// ---------------------------------------------------------------------------
// Free variables

std::set<std::string> free_term_vars(const Term& t);
std::set<std::string> free_term_vars(const Prop& p);
/// Term variables free in the TLam/TApp structure of a Church proof-term.
std::set<std::string> free_term_vars(const Proof& p);
std::set<std::string> free_proof_vars(const Proof& p);

bool occurs_free(const std::string& x, const Prop& p);
bool is_curry(const Proof& p);

/// True iff p is not an abstraction (neither proof- nor term-abstraction).
bool is_neutral(const Proof& p);

// ---------------------------------------------------------------------------
// Substitution

/// Returns `base` if it avoids `taken`, else the first `root<k>` (k = 1, 2, ...)
/// outside `taken`, where root is base without its trailing digits.
std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& taken);
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

using TermSubst = std::map<std::string, Term>;

Term subst_term(const Term& target, const std::string& x, const Term& t);
Term subst_terms(const Term& target, const TermSubst& s);
/// Capture-avoiding (t/x)p.
Prop subst_term_in_prop(const Prop& p, const std::string& x, const Term& t);
/// Simultaneous capture-avoiding substitution of term variables.
Prop subst_terms(const Prop& p, const TermSubst& s);

/// Capture-avoiding (arg/a)body. Term binders are renamed when arg carries
/// free term variables they would capture.
Proof subst_proof(const Proof& body, const std::string& a, const Proof& arg);

/// Capture-avoiding (t/x)p for Church proof-terms. Throws
/// std::invalid_argument when called with Style::Curry.
Proof subst_term_in_proof(const Proof& p, const std::string& x, const Term& t,
                          Style style = Style::Church);

/// Ordered list of (variable, replacement). Entry 0 is applied first, matching
/// the written form [m_n/a_n]...[m_1/a_1].
struct CaptureSubstitution {
  std::vector<std::pair<std::string, Proof>> pairs;
};

/// Substitution with capture: replaces free occurrences of each variable
/// without renaming any binder of the target.
Proof apply_capture_subst(const CaptureSubstitution& s, const Proof& target);

/// Renames the free proof variable `from` to `to` without capture checks on
/// `to`; callers pick a fresh `to`.
Proof rename_free_proof_var(const Proof& p, const std::string& from, const std::string& to);

// ---------------------------------------------------------------------------
// Alpha-equivalence

/// Canonical string with bound variables replaced by de Bruijn indices.
/// Equal keys iff alpha-equivalent.
std::string alpha_key(const Prop& p);
std::string alpha_key(const Proof& p);

bool alpha_eq(const Term& a, const Term& b);
bool alpha_eq(const Prop& a, const Prop& b);
bool alpha_eq(const Proof& a, const Proof& b);

// ---------------------------------------------------------------------------
// Printing and parsing
//
// Grammar (ASCII):
//   term  ::= x | f(t1,...,tn) | ( term )
//   prop  ::= P | P(t,...) | prop => prop | !x. prop | ( prop )
//   proof ::= a | \a. proof | proof proof | ^x. proof | proof [term] | ( proof )
// `=>` associates to the right, application to the left, binders extend as
// far right as possible.

std::string to_string(const Term& t);
std::string to_string(const Prop& p);
std::string to_string(const Proof& p);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

enum class SyntaxKind { Term, Proposition, ProofChurch, ProofCurry };

/// With a signature, identifiers are resolved against it (a bare nullary
/// function symbol is a constant) and arities are checked. Without one, a
/// bare identifier in term position is a variable and `c()` is a constant.
Term parse_term(std::string_view text, const Signature* sig = nullptr);
Prop parse_prop(std::string_view text, const Signature* sig = nullptr);
Proof parse_proof(std::string_view text, Style style, const Signature* sig = nullptr);

using Syntax = std::variant<Term, Prop, Proof>;
Syntax parse(std::string_view text, SyntaxKind kind, const Signature* sig = nullptr);

}  // namespace mdm

#endif  // MDM_SYNTAX_HPP
