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

// The mdm command line. Exit codes: 0 pass or Ok, 1 fail, 2 undetermined,
// 3 usage or input error.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdm/acceptance.hpp"
#include "mdm/candidates.hpp"
#include "mdm/corpus.hpp"
#include "mdm/reduction.hpp"
#include "mdm/rewriting.hpp"
#include "mdm/semantics.hpp"
#include "mdm/syntax.hpp"
#include "mdm/termbank.hpp"
#include "mdm/typing.hpp"

using namespace mdm;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUnknown = 2;
constexpr int kUsage = 3;

// Input problems that are reported like usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t default_fuel() {
  if (const char* v = std::getenv("MDM_FUEL_DEFAULT")) {
    try {
      std::size_t n = std::stoul(v);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "mdm: ignoring MDM_FUEL_DEFAULT=" << v << "\n";
  }
  return 10000;
}

std::string default_data_dir() {
  if (const char* v = std::getenv("MDM_DATA_DIR")) return v;
  return MDM_DATA_DIR;
}

Style parse_style(const std::string& s) { return s == "church" ? Style::Church : Style::Curry; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& format, const Json& j, const std::string& text) {
  if (format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

void require_format(const std::string& format, bool dot_allowed) {
  if (format == "dot" && !dot_allowed) throw UsageError("--format dot is only available for tree");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

// {"P * 2", "P => P"} -> {(P, 2), (P => P, 1)}
std::vector<std::pair<Prop, std::size_t>> parse_delta(const std::vector<std::string>& items, const Signature& sig) {
  std::vector<std::pair<Prop, std::size_t>> out;
  for (const auto& item : items) {
    std::size_t count = 1;
    std::string prop = item;
    if (auto star = item.rfind('*'); star != std::string::npos) {
      try {
        count = std::stoul(item.substr(star + 1));
        prop = item.substr(0, star);
      } catch (const std::exception&) {
        throw UsageError("bad count in --delta item '" + item + "'");
      }
    }
    out.emplace_back(parse_prop(prop, &sig), count);
  }
  return out;
}

std::vector<Term> parse_terms(const std::string& text, const Signature& sig) {
  std::vector<Term> out;
  if (!text.empty()) {
    for (const auto& item : split(text, ',')) out.push_back(parse_term(item, &sig));
    return out;
  }
  for (const auto& f : sig.functions())
    if (f.arity == 0) out.push_back(Term::app(f.name));
  if (out.empty()) out.push_back(Term::var("t0"));
  return out;
}

// "size=6,k=3" -> map; unknown keys are usage errors.
std::map<std::string, std::size_t> parse_bounds(const std::string& text) {
  std::map<std::string, std::size_t> out{{"size", 6}, {"k", 3},     {"depth", 3},        {"n", 2},
                                         {"fuel", 200}, {"derivations", 30}, {"seed", 0}};
  for (const auto& item : split(text, ',')) {
    auto eq = item.find('=');
    std::string key = item.substr(0, eq);
    if (eq == std::string::npos || !out.count(key)) throw UsageError("bad bound '" + item + "'");
    try {
      out[key] = std::stoul(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad bound '" + item + "'");
    }
  }
  return out;
}

Json report_json(const CheckReport& r) {
  Json j;
  j["ok"] = r.ok;
  j["path"] = r.path;
  j["reason"] = r.reason;
  j["side_conditions"] = r.side_conditions.size();
  j["max_fuel"] = r.max_fuel();
  j["total_fuel"] = r.total_fuel();
  return j;
}

std::string report_text(const CheckReport& r) {
  if (r.ok)
    return "Ok (" + std::to_string(r.side_conditions.size()) + " congruence conditions, max fuel " +
           std::to_string(r.max_fuel()) + ")\n";
  return "Fail at " + r.path + ": " + r.reason + "\n";
}

Json lemma_json(const LemmaReport& r) {
  Json j;
  j["lemma"] = r.lemma;
  j["pass"] = r.pass();
  j["checked"] = r.checked;
  j["violations"] = r.violations;
  j["boundary"] = r.boundary;
  j["examples"] = r.examples;
  return j;
}

std::string lemma_text(const LemmaReport& r) {
  std::string s = r.lemma + ": " + (r.pass() ? "pass" : "fail") + ", " + std::to_string(r.checked) + " checked, " +
                  std::to_string(r.violations) + " violations, " + std::to_string(r.boundary) + " boundary\n";
  for (const auto& e : r.examples) s += "  " + e + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof checker and semantics lab for minimal deduction modulo"};
  app.require_subcommand(1);
  const std::size_t fuel0 = default_fuel();
  std::function<int()> action;

  std::string format = "text";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
  };
  std::string style = "curry";
  auto add_style = [&](CLI::App* sub) {
    sub->add_option("--style", style, "Proof-term style")->check(CLI::IsMember({"curry", "church"}));
  };
  std::size_t fuel = fuel0;
  auto add_fuel = [&](CLI::App* sub) {
    sub->add_option("--fuel", fuel, "Expansion budget (default: MDM_FUEL_DEFAULT or 10000)")
        ->check(CLI::PositiveNumber);
  };
  std::string theory_path;
  std::string drv_path;
  std::string term_text;
  std::string sig_path;

  // check
  auto* check = app.add_subcommand("check", "Check a derivation file against a theory");
  check->add_option("theory", theory_path, "Theory file")->required();
  check->add_option("derivation", drv_path, "Derivation file")->required();
  add_style(check);
  add_fuel(check);
  add_format(check);
  check->callback([&] {
    action = [&] {
      require_format(format, false);
      Theory t = load_theory(theory_path);
      Derivation d = load_derivation(drv_path, parse_style(style), &t.sig);
      auto r = check_derivation(t, d, fuel);
      emit(format, report_json(r), report_text(r));
      return r.ok ? kOk : kFail;
    };
  });

  // normalize
  auto* norm = app.add_subcommand("normalize", "Leftmost-outermost normalization");
  norm->add_option("term", term_text, "Proof-term")->required();
  norm->add_option("--theory", sig_path, "Theory whose signature is used for parsing");
  add_style(norm);
  add_fuel(norm);
  add_format(norm);
  norm->callback([&] {
    action = [&] {
      require_format(format, false);
      std::optional<Theory> t;
      if (!sig_path.empty()) t = load_theory(sig_path);
      Proof p = parse_proof(term_text, parse_style(style), t ? &t->sig : nullptr);
      auto r = normalize(p, fuel);
      Json j;
      j["normal"] = r.normal;
      j["steps"] = r.steps;
      j["term"] = to_string(r.term);
      std::string text = r.normal ? to_string(r.term) + "\n" + std::to_string(r.steps) + " steps\n"
                                  : "Unknown after " + std::to_string(r.steps) + " steps: " + to_string(r.term) + "\n";
      emit(format, j, text);
      return r.normal ? kOk : kUnknown;
    };
  });

  // sn
  auto* sn = app.add_subcommand("sn", "Bounded strong-normalization verdict");
  sn->add_option("term", term_text, "Proof-term")->required();
  sn->add_option("--theory", sig_path, "Theory whose signature is used for parsing");
  add_style(sn);
  add_fuel(sn);
  add_format(sn);
  sn->callback([&] {
    action = [&] {
      require_format(format, false);
      std::optional<Theory> t;
      if (!sig_path.empty()) t = load_theory(sig_path);
      Proof p = parse_proof(term_text, parse_style(style), t ? &t->sig : nullptr);
      auto v = sn_verdict(p, fuel);
      Json j;
      j["verdict"] = to_string(v.kind);
      std::string text = "verdict: " + to_string(v.kind) + "\n";
      if (v.sn()) {
        j["max_length"] = v.max_length;
        j["tree_size"] = v.tree_size;
        text += "max reduction length: " + std::to_string(v.max_length) +
                "\nreduction tree size: " + std::to_string(v.tree_size) + "\n";
      }
      if (v.kind == SNVerdict::Kind::Diverges) {
        Json cyc = Json::array();
        for (const auto& q : v.cycle) cyc.push_back(to_string(q));
        j["cycle_length"] = v.cycle.size() - 1;
        j["cycle"] = cyc;
        text += "cycle of length " + std::to_string(v.cycle.size() - 1) + ":\n";
        for (const auto& q : v.cycle) text += "  " + to_string(q) + "\n";
      }
      j["fuel_spent"] = v.fuel_spent;
      text += "fuel spent: " + std::to_string(v.fuel_spent) + "\n";
      emit(format, j, text);
      return v.sn() ? kOk : v.kind == SNVerdict::Kind::Diverges ? kFail : kUnknown;
    };
  });

  // tree
  std::size_t budget = 200;
  auto* tree = app.add_subcommand("tree", "Reduction tree (DOT by default)");
  tree->add_option("term", term_text, "Proof-term")->required();
  tree->add_option("--budget", budget, "Node budget")->check(CLI::PositiveNumber);
  tree->add_option("--theory", sig_path, "Theory whose signature is used for parsing");
  add_style(tree);
  add_format(tree);
  tree->callback([&] {
    action = [&] {
      std::optional<Theory> t;
      if (!sig_path.empty()) t = load_theory(sig_path);
      Proof p = parse_proof(term_text, parse_style(style), t ? &t->sig : nullptr);
      auto rt = reduction_tree(p, budget);
      bool truncated = false;
      for (const auto& n : rt.nodes) truncated = truncated || n.truncated;
      if (format == "json") {
        Json nodes = Json::array();
        for (const auto& n : rt.nodes) {
          Json jn;
          jn["term"] = to_string(n.term);
          jn["children"] = n.children;
          jn["redex"] = n.redex ? Json(to_string(*n.redex)) : Json(nullptr);
          jn["cycle"] = n.cycle ? Json(*n.cycle) : Json(nullptr);
          jn["truncated"] = n.truncated;
          nodes.push_back(jn);
        }
        Json j;
        j["nodes"] = nodes;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << rt.to_dot();
      }
      return truncated ? kUnknown : kOk;
    };
  });

  // erase
  std::vector<std::string> erase_args;
  auto* er = app.add_subcommand("erase", "Erase a Church term, or a Church derivation checked against a theory");
  er->add_option("input", erase_args, "<church-term> | <theory.mdm> <derivation.drv>")->required()->expected(1, 2);
  add_fuel(er);
  add_format(er);
  er->callback([&] {
    action = [&]() -> int {
      require_format(format, false);
      if (erase_args.size() == 1) {
        Proof e = erase(parse_proof(erase_args[0], Style::Church));
        Json j;
        j["term"] = to_string(e);
        emit(format, j, to_string(e) + "\n");
        return kOk;
      }
      Theory t = load_theory(erase_args[0]);
      Derivation d = load_derivation(erase_args[1], Style::Church, &t.sig);
      Derivation e = erase_derivation(d);
      auto r = check_derivation(t, e, fuel);
      Json j;
      j["derivation"] = to_drv(e);
      j["check"] = report_json(r);
      emit(format, j, to_drv(e) + "\n" + report_text(r));
      return r.ok ? kOk : kFail;
    };
  });

  // confusion
  std::size_t size_bound = 5;
  auto* conf = app.add_subcommand("confusion", "Look for an implication congruent to a universal proposition");
  conf->add_option("theory", theory_path, "Theory file")->required();
  conf->add_option("--size", size_bound, "Proposition size bound")->check(CLI::PositiveNumber);
  add_fuel(conf);
  add_format(conf);
  conf->callback([&] {
    action = [&] {
      require_format(format, false);
      Theory t = load_theory(theory_path);
      auto r = detect_confusion(t, size_bound, fuel);
      std::string verdict = r.verdict.yes() ? "Yes" : r.verdict.no() ? "No" : "Unknown";
      Json j;
      j["confusion"] = verdict;
      j["size_bound"] = size_bound;
      j["enumerated"] = r.enumerated;
      j["imp_witness"] = r.imp_witness ? Json(to_string(*r.imp_witness)) : Json(nullptr);
      j["forall_witness"] = r.forall_witness ? Json(to_string(*r.forall_witness)) : Json(nullptr);
      std::string text = "confusion: " + verdict + " (size bound " + std::to_string(size_bound) + ", " +
                         std::to_string(r.enumerated) + " propositions)\n";
      if (r.imp_witness && r.forall_witness)
        text += "  " + to_string(*r.imp_witness) + "  ==  " + to_string(*r.forall_witness) + "\n";
      emit(format, j, text);
      return r.verdict.no() ? kOk : r.verdict.yes() ? kFail : kUnknown;
    };
  });

  // model-check
  std::string algebra = "powerset:2";
  std::size_t universe_size = 1;
  std::size_t prop_size = 5;
  std::string table_path;
  std::string structure = "hashed:0";
  auto* mc = app.add_subcommand("model-check", "Check that a valued structure or table is a model of a theory");
  mc->add_option("theory", theory_path, "Theory file")->required();
  mc->add_option("--algebra", algebra, "powerset:N with 1 <= N <= 5");
  mc->add_option("--universe-size", universe_size, "Size bound of the closed-term universe")
      ->check(CLI::PositiveNumber);
  mc->add_option("--prop-size", prop_size, "Size bound of sampled propositions")->check(CLI::PositiveNumber);
  mc->add_option("--structure", structure, "const:E or hashed:SEED, used without --table");
  mc->add_option("--table", table_path, "Interpretation table file");
  add_fuel(mc);
  add_format(mc);
  mc->callback([&] {
    action = [&] {
      require_format(format, false);
      if (algebra.rfind("powerset:", 0) != 0) throw UsageError("--algebra must be powerset:N");
      unsigned n = static_cast<unsigned>(std::stoul(algebra.substr(9)));
      if (n < 1 || n > 5) throw UsageError("--algebra powerset:N needs 1 <= N <= 5");
      PowersetAlgebra alg(n);
      Theory t = load_theory(theory_path);
      std::vector<Term> universe = enumerate_terms(t.sig, universe_size, {});
      if (universe.empty()) universe.push_back(Term::var("u0"));
      Json j;
      j["algebra"] = algebra;
      j["universe"] = universe.size();
      if (!table_path.empty()) {
        auto tab = parse_interpretation_table(read_file(table_path), t.sig);
        auto r = check_model2(tab, alg, t, universe, fuel);
        auto item = [](const Model2Report::Item& it) {
          Json ji;
          ji["ok"] = it.ok();
          ji["checked"] = it.checked;
          ji["skipped"] = it.skipped;
          ji["failures"] = it.failures;
          return ji;
        };
        j["table_entries"] = tab.size();
        j["connectives"] = item(r.connectives);
        j["substitution"] = item(r.substitution);
        j["congruence"] = item(r.congruence);
        j["unknown_congruences"] = r.unknown_congruences;
        j["ok"] = r.ok();
        std::string text;
        for (auto [name, it] : {std::pair{"connectives", &r.connectives}, std::pair{"substitution", &r.substitution},
                                std::pair{"congruence", &r.congruence}}) {
          text += std::string(name) + ": " + (it->ok() ? "ok" : "fail") + ", " + std::to_string(it->checked) +
                  " checked, " + std::to_string(it->skipped) + " skipped\n";
          for (const auto& f : it->failures) text += "  " + f + "\n";
        }
        emit(format, j, text + "model: " + (r.ok() ? "yes" : "no") + "\n");
        std::size_t checked = r.connectives.checked + r.substitution.checked + r.congruence.checked;
        return !r.ok() ? kFail : checked == 0 ? kUnknown : kOk;
      }
      std::optional<ValuedStructure> vs;
      if (structure.rfind("const:", 0) == 0)
        vs = ValuedStructure::constant(alg, t.sig, std::stoull(structure.substr(6)));
      else if (structure.rfind("hashed:", 0) == 0)
        vs = ValuedStructure::hashed(alg, t.sig, std::stoull(structure.substr(7)));
      else
        throw UsageError("--structure must be const:E or hashed:SEED");
      auto props = enumerate_props(t.sig, prop_size, {"x"});
      auto envs = all_environments({"x"}, universe);
      auto r = is_model_inductive(*vs, t, props, envs, universe, fuel);
      j["structure"] = structure;
      j["propositions"] = props.size();
      j["pairs_checked"] = r.pairs_checked;
      j["unknown_pairs"] = r.unknown_pairs;
      j["ok"] = r.ok;
      Json fails = Json::array();
      std::string text = "model: " + std::string(r.ok ? "yes" : "no") + " (" + std::to_string(props.size()) +
                         " propositions, " + std::to_string(r.pairs_checked) + " congruent pairs, " +
                         std::to_string(r.unknown_pairs) + " undecided)\n";
      for (const auto& f : r.failures) {
        Json jf;
        jf["a"] = to_string(f.a);
        jf["b"] = to_string(f.b);
        jf["env"] = to_string(f.env);
        jf["value_a"] = alg.show(f.va);
        jf["value_b"] = alg.show(f.vb);
        fails.push_back(jf);
        text += "  " + to_string(f.a) + " = " + alg.show(f.va) + " but " + to_string(f.b) + " = " + alg.show(f.vb) +
                " under {" + to_string(f.env) + "}\n";
      }
      j["failures"] = fails;
      emit(format, j, text);
      return !r.ok ? kFail : r.pairs_checked == 0 && r.unknown_pairs > 0 ? kUnknown : kOk;
    };
  });

  // closure
  std::string prop_text;
  std::string env_text;
  std::vector<std::string> delta_text;
  std::string terms_text;
  std::string emit_path;
  std::size_t k_max = 3;
  std::size_t depth = 3;
  std::size_t term_size = 6;
  std::size_t closure_fuel = 200;
  auto* cl = app.add_subcommand("closure", "Stages Cl^k(A) over a universe of Curry terms");
  cl->add_option("theory", theory_path, "Theory file")->required();
  cl->add_option("--prop", prop_text, "Proposition A")->required();
  cl->add_option("--env", env_text, "Environment x:=t, ...");
  cl->add_option("--delta", delta_text, "Declaration 'B' or 'B * n' of the slice, repeatable (default: A * 2, A => A)")
      ->take_all();
  cl->add_option("--terms", terms_text, "Instances for quantifier steps (default: the constants)");
  cl->add_option("--k", k_max, "Last stage");
  cl->add_option("--depth", depth, "Derivation search depth")->check(CLI::PositiveNumber);
  cl->add_option("--size", term_size, "Universe term size")->check(CLI::PositiveNumber);
  cl->add_option("--fuel", closure_fuel, "Congruence fuel of the search")->check(CLI::PositiveNumber);
  cl->add_option("--emit", emit_path, "Write the stage dump as JSON");
  add_format(cl);
  cl->callback([&] {
    action = [&] {
      require_format(format, false);
      Theory t = load_theory(theory_path);
      Prop a = parse_prop(prop_text, &t.sig);
      Environment env = parse_environment(env_text, &t.sig);
      Prop goal = subst_terms(a, env);
      auto wanted = delta_text.empty() ? std::vector<std::pair<Prop, std::size_t>>{{goal, 2}, {Prop::imp(goal, goal), 1}}
                                       : parse_delta(delta_text, t.sig);
      UniversalContext delta;
      Context slice = delta.slice(wanted);
      std::vector<std::string> vars;
      for (const auto& [name, p] : slice.entries()) vars.push_back(name);
      TermBank bank;
      Universe u(bank, {term_size, vars});
      ClosureBounds bounds;
      bounds.depth = depth;
      bounds.fuel = closure_fuel;
      ClosureEngine e(t, bank, slice, parse_terms(terms_text, t.sig), bounds);
      auto tab = e.closure(u, a, env, k_max);
      Json dump = Json::array();
      for (std::size_t i = 0; i < u.size(); ++i) {
        Json m;
        m["term"] = bank.show(u.members()[i]);
        m["stage"] = tab.first_stage[i] ? Json(*tab.first_stage[i]) : Json(nullptr);
        m["sn_max_length"] = tab.sn_max[i] ? Json(*tab.sn_max[i]) : Json(nullptr);
        dump.push_back(m);
      }
      if (!emit_path.empty()) {
        std::ofstream out(emit_path);
        if (!out) throw UsageError("cannot write " + emit_path);
        out << dump.dump(2) << "\n";
      }
      Json j;
      j["goal"] = to_string(goal);
      j["slice"] = to_string(slice);
      j["universe"] = u.size();
      Json sizes = Json::array();
      std::string text = "goal: " + to_string(goal) + "\nslice: " + to_string(slice) + "\nuniverse: " +
                         std::to_string(u.size()) + " terms of size <= " + std::to_string(term_size) + "\n";
      for (std::size_t k = 0; k <= k_max; ++k) {
        sizes.push_back(tab.stage_size(k));
        text += "Cl^" + std::to_string(k) + ": " + std::to_string(tab.stage_size(k)) + " members\n";
      }
      j["stage_sizes"] = sizes;
      j["omega_unknown"] = e.omega_unknown();
      j["capped"] = e.capped();
      text += "boundary: " + std::to_string(e.omega_unknown()) + " undecided redex positions, " +
              std::to_string(e.capped()) + " oversized instances\n";
      emit(format, j, text);
      return 2 * (e.omega_unknown() + e.capped()) > u.size() ? kUnknown : kOk;
    };
  });

  // candidates verify
  std::string lemma;
  std::string bounds_text;
  std::string prop_b_text;
  std::string var_name;
  std::string subst_text;
  auto* cand = app.add_subcommand("candidates", "Reducibility candidates");
  cand->require_subcommand(1);
  auto* verify = cand->add_subcommand("verify", "Check one closure lemma within bounds");
  verify->add_option("theory", theory_path, "Theory file")->required();
  verify->add_option("--lemma", lemma, "Lemma")
      ->required()
      ->check(CLI::IsMember({"clramorph", "clsubst", "clfamorph", "mink", "lambdacl", "adequacy"}));
  verify->add_option("--bounds", bounds_text, "size=6,k=3,depth=3,n=2,fuel=200,derivations=30,seed=0");
  verify->add_option("--prop", prop_text, "Proposition A");
  verify->add_option("--prop-b", prop_b_text, "Proposition B for clramorph and lambdacl (default: A)");
  verify->add_option("--var", var_name, "Variable x for clsubst (default: a free variable of A)");
  verify->add_option("--term", subst_text, "Term t for clsubst (default: the first instance term)");
  verify->add_option("--env", env_text, "Environment x:=t, ...");
  verify->add_option("--delta", delta_text, "Declaration 'B' or 'B * n' of the slice, repeatable (default: A * 2, A => A)")
      ->take_all();
  verify->add_option("--terms", terms_text, "Instances for quantifier steps (default: the constants)");
  add_format(verify);
  verify->callback([&] {
    action = [&] {
      require_format(format, false);
      auto b = parse_bounds(bounds_text);
      Theory t = load_theory(theory_path);
      std::vector<Term> terms = parse_terms(terms_text, t.sig);
      LemmaReport rep;
      if (lemma == "adequacy") {
        AdequacyOptions ao;
        ao.derivations = b["derivations"];
        ao.seed = b["seed"];
        ao.k_floor = b["k"];
        ao.bounds.depth = b["depth"];
        ao.bounds.fuel = b["fuel"];
        ao.bounds.n_max = b["n"];
        rep = adequacy_suite(t, terms, ao);
      } else {
        if (prop_text.empty()) throw UsageError("--lemma " + lemma + " needs --prop");
        Prop a = parse_prop(prop_text, &t.sig);
        Environment env = parse_environment(env_text, &t.sig);
        Prop goal = subst_terms(a, env);
        Prop pb = prop_b_text.empty() ? a : parse_prop(prop_b_text, &t.sig);
        std::vector<std::pair<Prop, std::size_t>> wanted;
        if (!delta_text.empty()) {
          wanted = parse_delta(delta_text, t.sig);
        } else {
          wanted = {{goal, 2}, {Prop::imp(goal, goal), 1}};
          if (lemma == "clramorph" || lemma == "lambdacl") {
            Prop gb = subst_terms(pb, env);
            wanted = {{goal, 2}, {gb, 1}, {Prop::imp(goal, gb), 1}};
          }
        }
        UniversalContext delta;
        Context slice = delta.slice(wanted);
        std::vector<std::string> vars;
        for (const auto& [name, p] : slice.entries()) vars.push_back(name);
        TermBank bank;
        Universe u(bank, {b["size"], vars});
        ClosureBounds cb;
        cb.depth = b["depth"];
        cb.fuel = b["fuel"];
        cb.n_max = b["n"];
        ClosureEngine e(t, bank, slice, terms, cb);
        if (lemma == "mink") {
          rep = check_mink(e.closure(u, a, env, b["k"]));
        } else if (lemma == "clramorph") {
          rep = check_clramorph(e, u, a, pb, env, b["k"]);
        } else if (lemma == "lambdacl") {
          rep = check_lambdacl(e, u, a, pb, env, b["k"]);
        } else if (lemma == "clfamorph") {
          if (!a.is_forall()) throw UsageError("clfamorph needs a universal --prop");
          rep = check_clfamorph(e, u, a, env, terms, b["k"]);
        } else {
          std::string x = var_name;
          if (x.empty()) {
            auto fv = free_term_vars(a);
            if (fv.empty()) throw UsageError("clsubst needs --var when A has no free variable");
            x = *fv.begin();
          }
          Term st = subst_text.empty() ? terms.front() : parse_term(subst_text, &t.sig);
          rep = check_clsubst(e, u, a, x, st, env, b["k"]);
        }
      }
      emit(format, lemma_json(rep), lemma_text(rep));
      if (!rep.pass()) return kFail;
      return rep.checked == 0 || 2 * rep.boundary > rep.checked ? kUnknown : kOk;
    };
  });

  // corpus gen
  std::uint64_t seed = 0;
  std::size_t count = 10;
  std::size_t max_subject = 10;
  bool need_redex = false;
  std::string out_dir;
  auto* corpus = app.add_subcommand("corpus", "Derivation corpora");
  corpus->require_subcommand(1);
  auto* gen = corpus->add_subcommand("gen", "Generate well-typed derivations");
  gen->add_option("theory", theory_path, "Theory file")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--count", count, "Number of derivations")->check(CLI::PositiveNumber);
  gen->add_option("--max-size", max_subject, "Subject size bound")->check(CLI::PositiveNumber);
  gen->add_flag("--redex", need_redex, "Keep only subjects with a redex");
  gen->add_option("--out", out_dir, "Write one .drv file per derivation into this directory");
  add_style(gen);
  add_format(gen);
  gen->callback([&] {
    action = [&] {
      require_format(format, false);
      Theory t = load_theory(theory_path);
      CorpusOptions co;
      co.style = parse_style(style);
      co.count = count;
      co.max_subject_size = max_subject;
      co.seed = seed;
      co.require_redex = need_redex;
      auto ds = generate_corpus(t, co);
      Json arr = Json::array();
      std::string text;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        std::string drv = to_drv(ds[i]);
        arr.push_back(drv);
        text += drv + "\n\n";
        if (!out_dir.empty()) {
          std::filesystem::create_directories(out_dir);
          char name[32];
          std::snprintf(name, sizeof name, "d%03zu.drv", i);
          std::ofstream out(std::filesystem::path(out_dir) / name);
          if (!out) throw UsageError("cannot write into " + out_dir);
          out << drv << "\n";
        }
      }
      std::cerr << "seed " << seed << ", " << ds.size() << " derivations\n";
      if (out_dir.empty()) emit(format, arr, text);
      return ds.size() == count ? kOk : kUnknown;
    };
  });

  // suite
  bool quick = false;
  std::vector<int> only;
  std::string data_dir = default_data_dir();
  auto* suite = app.add_subcommand("suite", "Run the acceptance battery");
  suite->add_flag("--quick", quick, "Smaller corpora and universes");
  suite->add_option("--only", only, "Criterion numbers")->delimiter(',');
  suite->add_option("--data", data_dir, "Directory of the bundled theories");
  suite->add_option("--seed", seed, "Random seed");
  add_format(suite);
  suite->callback([&] {
    action = [&] {
      require_format(format, false);
      AcceptanceOptions ao;
      ao.data_dir = data_dir;
      ao.quick = quick;
      ao.seed = seed;
      auto ids = criterion_ids();
      for (int id : only)
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw UsageError("no criterion " + std::to_string(id));
      bool ok = true;
      Json arr = Json::array();
      for (int id : only.empty() ? ids : only) {
        auto r = run_criterion(id, ao);
        ok = ok && r.pass;
        if (format == "json") {
          Json j;
          j["id"] = r.id;
          j["name"] = r.name;
          j["pass"] = r.pass;
          arr.push_back(j);
        } else {
          std::cout << to_line(r) << std::endl;
        }
      }
      if (format == "json") std::cout << arr.dump(2) << "\n";
      return ok ? kOk : kFail;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return action ? action() : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "mdm: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "mdm: " << e.what() << "\n";
    return kUsage;
  }
}
