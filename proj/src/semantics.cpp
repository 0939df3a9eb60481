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

#include "mdm/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mdm {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string atom_key(const std::string& pred, const std::vector<Term>& args) {
  return to_string(Prop::atom(pred, args));
}

Environment restrict(const Environment& env, const std::set<std::string>& vars) {
  Environment out;
  for (const auto& v : vars) {
    auto it = env.find(v);
    if (it != env.end()) out.emplace(v, it->second);
  }
  return out;
}

bool covers(const Environment& env, const std::set<std::string>& vars) {
  return std::all_of(vars.begin(), vars.end(), [&](const std::string& v) { return env.count(v) > 0; });
}

}  // namespace

std::set<Element> PreHeytingAlgebra::imp_family(Element a, const std::set<Element>& family) const {
  std::set<Element> out;
  for (Element b : family) out.insert(imp(a, b));
  return out;
}

PowersetAlgebra::PowersetAlgebra(unsigned n) : n_(n), top_((Element{1} << n) - 1) {
  if (n < 1 || n > 5) throw std::invalid_argument("powerset algebra base size must be in 1..5");
}

std::vector<Element> PowersetAlgebra::domain() const {
  std::vector<Element> out;
  for (Element a = 0; a <= top_; ++a) out.push_back(a);
  return out;
}

bool PowersetAlgebra::leq(Element a, Element b) const { return (a & ~b & top_) == 0; }

Element PowersetAlgebra::imp(Element a, Element b) const { return (~a | b) & top_; }

bool PowersetAlgebra::admissible(const std::set<Element>& family) const {
  return std::all_of(family.begin(), family.end(), [&](Element a) { return a <= top_; });
}

Element PowersetAlgebra::glb(const std::set<Element>& family) const {
  if (!admissible(family)) throw std::domain_error("family is not admissible");
  Element out = top_;
  for (Element a : family) out &= a;
  return out;
}

std::string PowersetAlgebra::show(Element a) const {
  std::string out = "{";
  for (unsigned i = 0; i < n_; ++i) {
    if (!(a >> i & 1)) continue;
    if (out.size() > 1) out += ",";
    out += std::to_string(i);
  }
  return out + "}";
}

AlgebraLawReport check_algebra_laws(const PreHeytingAlgebra& alg, std::size_t max_domain) {
  AlgebraLawReport rep;
  const auto dom = alg.domain();
  if (dom.size() > max_domain || dom.size() >= 63) {
    throw std::invalid_argument("domain too large for exhaustive law checking");
  }
  std::map<std::string, std::size_t> per_law;
  auto fail = [&](const std::string& law, const std::string& detail) {
    rep.ok = false;
    if (per_law[law]++ < 3) rep.violations.push_back({law, detail});
  };

  for (Element a : dom) {
    ++rep.checks;
    if (!alg.leq(a, a)) fail("preorder", "not reflexive at " + alg.show(a));
    for (Element b : dom) {
      if (!alg.leq(a, b)) continue;
      for (Element c : dom) {
        ++rep.checks;
        if (alg.leq(b, c) && !alg.leq(a, c)) {
          fail("preorder", "not transitive at " + alg.show(a) + " " + alg.show(b) + " " + alg.show(c));
        }
      }
    }
  }

  const std::uint64_t n_families = std::uint64_t{1} << dom.size();
  for (std::uint64_t mask = 0; mask < n_families; ++mask) {
    std::set<Element> family;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (mask >> i & 1) family.insert(dom[i]);
    }
    if (!alg.admissible(family)) continue;
    ++rep.families;
    auto show_family = [&] {
      std::string s = "{";
      for (Element e : family) s += (s.size() > 1 ? " " : "") + alg.show(e);
      return s + "}";
    };
    for (Element a : dom) {
      ++rep.checks;
      if (!alg.admissible(alg.imp_family(a, family))) {
        fail("imp-stability", alg.show(a) + " => " + show_family() + " is not admissible");
      }
    }
    Element g = alg.glb(family);
    for (Element s : family) {
      ++rep.checks;
      if (!alg.leq(g, s)) fail("glb", "glb of " + show_family() + " is not below " + alg.show(s));
    }
    for (Element l : dom) {
      ++rep.checks;
      bool lower = std::all_of(family.begin(), family.end(), [&](Element s) { return alg.leq(l, s); });
      if (lower && !alg.leq(l, g)) {
        fail("glb", alg.show(l) + " is a lower bound of " + show_family() + " above the glb");
      }
    }
  }
  return rep;
}

std::string to_string(const Environment& env) {
  std::string out;
  for (const auto& [x, t] : env) {
    if (!out.empty()) out += ", ";
    out += x + ":=" + to_string(t);
  }
  return out;
}

Environment parse_environment(const std::string& text, const Signature* sig) {
  Environment env;
  std::size_t depth = 0, start = 0;
  auto flush = [&](std::size_t end) {
    std::string piece = trim(std::string_view(text).substr(start, end - start));
    if (piece.empty()) return;
    auto eq = piece.find(":=");
    if (eq == std::string::npos) throw SyntaxError("expected x:=term in environment", start);
    std::string name = trim(piece.substr(0, eq));
    if (name.empty()) throw SyntaxError("missing variable in environment", start);
    Term t = parse_term(piece.substr(eq + 2), sig);
    if (!free_term_vars(t).empty()) throw SyntaxError("environment terms must be closed", start);
    if (!env.emplace(name, t).second) throw SyntaxError("variable bound twice in environment: " + name, start);
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
  return env;
}

ValuedStructure ValuedStructure::constant(const PreHeytingAlgebra& alg, const Signature& sig, Element value) {
  return {&alg, sig, [value](const std::string&, const std::vector<Term>&) { return value; }};
}

ValuedStructure ValuedStructure::hashed(const PowersetAlgebra& alg, const Signature& sig, std::uint64_t seed) {
  Element top = alg.top();
  return {&alg, sig, [seed, top](const std::string& pred, const std::vector<Term>& args) {
            return mix(fnv1a(atom_key(pred, args)) ^ mix(seed)) & top;
          }};
}

ValuedStructure ValuedStructure::table(const PreHeytingAlgebra& alg, const Signature& sig,
                                       std::map<std::string, Element> atoms, Element fallback) {
  return {&alg, sig, [atoms = std::move(atoms), fallback](const std::string& pred, const std::vector<Term>& args) {
            auto it = atoms.find(atom_key(pred, args));
            return it == atoms.end() ? fallback : it->second;
          }};
}

Element interpret(const ValuedStructure& vs, const Prop& p, const Environment& env,
                  const std::vector<Term>& universe) {
  if (!vs.algebra || !vs.pred_interp) throw SemanticsError("incomplete valued structure");
  if (universe.empty()) throw SemanticsError("empty term universe");
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(p.args().size());
      for (const auto& a : p.args()) {
        Term v = subst_terms(a, env);
        if (!free_term_vars(v).empty()) throw SemanticsError("unbound term variable in " + to_string(p));
        args.push_back(std::move(v));
      }
      return vs.pred_interp(p.name(), args);
    }
    case Prop::Kind::Imp:
      return vs.algebra->imp(interpret(vs, p.lhs(), env, universe), interpret(vs, p.rhs(), env, universe));
    case Prop::Kind::Forall: {
      std::set<Element> family;
      Environment inner = env;
      for (const auto& e : universe) {
        inner.insert_or_assign(p.name(), e);
        family.insert(interpret(vs, p.body(), inner, universe));
      }
      if (!vs.algebra->admissible(family)) throw SemanticsError("universal family not admissible: " + to_string(p));
      return vs.algebra->glb(family);
    }
  }
  throw SemanticsError("unreachable");
}

bool check_lsub(const ValuedStructure& vs, const Prop& p, const std::string& x, const Term& t,
                const Environment& env, const std::vector<Term>& universe) {
  Element lhs = interpret(vs, subst_term_in_prop(p, x, t), env, universe);
  Environment extended = env;
  extended.insert_or_assign(x, subst_terms(t, env));
  Element rhs = interpret(vs, p, extended, universe);
  return lhs == rhs;
}

std::vector<Environment> all_environments(const std::set<std::string>& vars, const std::vector<Term>& universe) {
  std::vector<Environment> out{Environment{}};
  for (const auto& v : vars) {
    std::vector<Environment> next;
    for (const auto& env : out) {
      for (const auto& t : universe) {
        Environment e = env;
        e.emplace(v, t);
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

ModelVerdict is_model_inductive(const ValuedStructure& vs, const Theory& t, const std::vector<Prop>& props,
                                const std::vector<Environment>& envs, const std::vector<Term>& universe,
                                std::size_t fuel) {
  ModelVerdict out;
  for (std::size_t i = 0; i < props.size(); ++i) {
    for (std::size_t j = i + 1; j < props.size(); ++j) {
      const Prop& a = props[i];
      const Prop& b = props[j];
      auto v = congruent(t, a, b, fuel);
      if (v.unknown()) {
        ++out.unknown_pairs;
        continue;
      }
      if (!v.yes()) continue;
      auto fv = free_term_vars(a);
      auto fb = free_term_vars(b);
      fv.insert(fb.begin(), fb.end());
      for (const auto& env : envs) {
        if (!covers(env, fv)) {
          ++out.skipped_envs;
          continue;
        }
        ++out.pairs_checked;
        Element va = interpret(vs, a, env, universe);
        Element vb = interpret(vs, b, env, universe);
        if (va != vb) {
          out.ok = false;
          out.failures.push_back({a, b, restrict(env, fv), va, vb});
        }
      }
    }
  }
  return out;
}

std::string InterpretationTable::key(const Prop& p, const Environment& env) {
  return alpha_key(p) + "|" + to_string(restrict(env, free_term_vars(p)));
}

void InterpretationTable::set(const Prop& p, const Environment& env, Element value) {
  Environment r = restrict(env, free_term_vars(p));
  auto k = key(p, r);
  auto it = index_.find(k);
  if (it != index_.end()) {
    entries_[it->second].value = value;
    return;
  }
  index_.emplace(k, entries_.size());
  entries_.push_back({p, std::move(r), value});
}

std::optional<Element> InterpretationTable::lookup(const Prop& p, const Environment& env) const {
  auto it = index_.find(key(p, env));
  if (it != index_.end()) return entries_[it->second].value;
  if (default_) return default_(p, env);
  return std::nullopt;
}

InterpretationTable InterpretationTable::from_structure(const ValuedStructure& vs, const std::vector<Prop>& props,
                                                        const std::vector<Term>& universe) {
  InterpretationTable tab;
  for (const auto& p : props) {
    for (const auto& env : all_environments(free_term_vars(p), universe)) {
      tab.set(p, env, interpret(vs, p, env, universe));
    }
  }
  tab.set_default([vs, universe](const Prop& p, const Environment& env) -> std::optional<Element> {
    if (!covers(env, free_term_vars(p))) return std::nullopt;
    return interpret(vs, p, env, universe);
  });
  return tab;
}

InterpretationTable parse_interpretation_table(const std::string& text, const Signature& sig) {
  InterpretationTable tab;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto bar1 = line.find('|');
    auto bar2 = bar1 == std::string::npos ? bar1 : line.find('|', bar1 + 1);
    if (bar2 == std::string::npos) throw SyntaxError("expected <prop> | <env> | <element>", lineno);
    Prop p = parse_prop(line.substr(0, bar1), &sig);
    Environment env = parse_environment(line.substr(bar1 + 1, bar2 - bar1 - 1), &sig);
    std::string elem = trim(line.substr(bar2 + 1));
    Element value = 0;
    try {
      std::size_t used = 0;
      value = std::stoull(elem, &used);
      if (used != elem.size()) throw std::invalid_argument(elem);
    } catch (const std::exception&) {
      throw SyntaxError("bad element id: " + elem, lineno);
    }
    tab.set(p, env, value);
  }
  return tab;
}

Model2Report check_model2(const InterpretationTable& tab, const PreHeytingAlgebra& alg, const Theory& t,
                          const std::vector<Term>& universe, std::size_t fuel) {
  Model2Report rep;
  auto describe = [&](const Prop& p, const Environment& env) {
    return "[" + to_string(p) + "]_{" + to_string(env) + "}";
  };
  const auto& entries = tab.entries();

  for (const auto& e : entries) {
    const Prop& p = e.prop;
    // Adapted to the connectives.
    if (p.is_imp()) {
      auto l = tab.lookup(p.lhs(), e.env);
      auto r = tab.lookup(p.rhs(), e.env);
      if (!l || !r) {
        ++rep.connectives.skipped;
      } else {
        ++rep.connectives.checked;
        if (alg.imp(*l, *r) != e.value) {
          rep.connectives.failures.push_back(describe(p, e.env) + " = " + alg.show(e.value) + " but " +
                                             alg.show(*l) + " => " + alg.show(*r) + " = " +
                                             alg.show(alg.imp(*l, *r)));
        }
      }
    } else if (p.is_forall()) {
      std::set<Element> family;
      bool complete = true;
      Environment inner = e.env;
      for (const auto& u : universe) {
        inner.insert_or_assign(p.name(), u);
        auto v = tab.lookup(p.body(), inner);
        if (!v) {
          complete = false;
          break;
        }
        family.insert(*v);
      }
      if (!complete) {
        ++rep.connectives.skipped;
      } else if (!alg.admissible(family)) {
        ++rep.connectives.checked;
        rep.connectives.failures.push_back(describe(p, e.env) + ": instance family not admissible");
      } else {
        ++rep.connectives.checked;
        Element g = alg.glb(family);
        if (g != e.value) {
          rep.connectives.failures.push_back(describe(p, e.env) + " = " + alg.show(e.value) +
                                             " but the glb over the universe is " + alg.show(g));
        }
      }
    }

    // Substitution property, one free variable at a time.
    for (const auto& [x, term] : e.env) {
      Environment rest = e.env;
      rest.erase(x);
      Prop inst = subst_term_in_prop(p, x, term);
      auto v = tab.lookup(inst, rest);
      if (!v) {
        ++rep.substitution.skipped;
        continue;
      }
      ++rep.substitution.checked;
      if (*v != e.value) {
        rep.substitution.failures.push_back(describe(inst, rest) + " = " + alg.show(*v) + " but " +
                                            describe(p, e.env) + " = " + alg.show(e.value));
      }
    }

    // Adapted to the congruence, one rewrite step at a time.
    for (const auto& q : rewrite_neighbors(t, p)) {
      auto v = tab.lookup(q, e.env);
      if (!v) {
        ++rep.congruence.skipped;
        continue;
      }
      ++rep.congruence.checked;
      if (*v != e.value) {
        rep.congruence.failures.push_back(describe(p, e.env) + " = " + alg.show(e.value) + " but congruent " +
                                          describe(q, e.env) + " = " + alg.show(*v));
      }
    }
  }

  // Sampled pairs of listed propositions related by longer rewrite paths.
  std::vector<Prop> props;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (seen.insert(alpha_key(e.prop)).second) props.push_back(e.prop);
  }
  constexpr std::size_t kMaxPairProps = 200;
  if (props.size() > kMaxPairProps) props.erase(props.begin() + kMaxPairProps, props.end());
  for (std::size_t i = 0; i < props.size(); ++i) {
    for (std::size_t j = i + 1; j < props.size(); ++j) {
      if (alpha_eq(props[i], props[j])) continue;
      auto v = congruent(t, props[i], props[j], fuel);
      if (v.unknown()) {
        ++rep.unknown_congruences;
        continue;
      }
      if (!v.yes() || v.path_length <= 1) continue;
      auto fj = free_term_vars(props[j]);
      for (const auto& e : entries) {
        if (!alpha_eq(e.prop, props[i]) || !covers(e.env, fj)) continue;
        auto w = tab.lookup(props[j], e.env);
        if (!w) {
          ++rep.congruence.skipped;
          continue;
        }
        ++rep.congruence.checked;
        if (*w != e.value) {
          rep.congruence.failures.push_back(describe(props[i], e.env) + " = " + alg.show(e.value) +
                                            " but congruent " + describe(props[j], e.env) + " = " + alg.show(*w));
        }
      }
    }
  }
  return rep;
}

}  // namespace mdm
