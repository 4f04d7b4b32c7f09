// aritylab — command-line front end for the finite-structure definability
// library: arity computation, formula evaluation, symmetry reports, structure
// constructions, generators, and a self-check suite over the bundled
// fixtures.
//
// Exit codes: 0 success, 1 self-check failure, 2 input error, 3 resource cap.
#include <chrono>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aritylab/aritylab.hpp"

using namespace aritylab;

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::string tuple_str(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(t[i]);
  }
  return out + ")";
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

// Collects one command's output: either the JSON envelope or plain text lines.
struct CommandOutput {
  std::string command;
  bool json = false;
  Json input_digest;    // string or array; omitted while null
  Json element_names;   // array; omitted while null
  Json results = Json::object();
  std::vector<std::string> text;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  CommandOutput(std::string cmd, bool json_mode) : command(std::move(cmd)), json(json_mode) {}

  void line(std::string s) { text.push_back(std::move(s)); }

  FiniteStructure load(const std::string& path) {
    FiniteStructure s = load_structure(path);
    input_digest = structure_digest(s);
    if (!s.element_names.empty()) element_names = s.element_names;
    return s;
  }

  void emit() const {
    if (json) {
      Json env;
      env["command"] = command;
      env["tool_version"] = kToolVersion;
      if (!input_digest.is_null()) env["input_digest"] = input_digest;
      if (!element_names.is_null()) env["element_names"] = element_names;
      env["results"] = results;
      env["timing_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();
      std::cout << env.dump(2) << "\n";
    } else {
      for (const std::string& s : text) std::cout << s << "\n";
    }
  }
};

// Shared option bag; each subcommand binds the fields it uses.
struct Opts {
  std::string file;
  std::string second;
  std::string formula;
  std::string vars;
  std::string relation;
  std::string out;
  std::string family;
  std::string fixtures = "fixtures";
  std::vector<std::string> files;
  int max_k = 0;
  int k = 2;
  int level = 1;
  int m = 0;
  int width = 4;
  int fiber = 1;
  std::uint64_t seed = 0;
  bool json = false;
  bool list = false;
};

StructureFormat format_for_path(const std::string& path) {
  const std::string suffix = ".json";
  if (path.size() >= suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return StructureFormat::json;
  return StructureFormat::dsl;
}

// Write the structure to `out` (format by extension), or print the canonical
// JSON document when no output path was given and we are in text mode.
void deliver_structure(CommandOutput& cmd, const FiniteStructure& s, const std::string& out) {
  if (!out.empty()) {
    write_file(out, save_structure(s, format_for_path(out)));
    cmd.results["output"] = out;
    cmd.results["digest"] = structure_digest(s);
    cmd.line("wrote " + out);
  } else if (cmd.json) {
    cmd.results["structure"] = structure_to_json(s);
  } else {
    cmd.line(save_structure(s, StructureFormat::json));
    if (!cmd.text.empty() && !cmd.text.back().empty() && cmd.text.back().back() == '\n')
      cmd.text.back().pop_back();
  }
}

// ── subcommand bodies ───────────────────────────────────────────────────────

void run_arity(const Opts& o) {
  CommandOutput cmd("arity", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const ArityReport report = theory_arity(s, o.max_k);
  cmd.results = arity_report_to_json(report);
  cmd.line("structure: " + report.structure);
  cmd.line("arity: " + std::to_string(report.arity));
  for (const KDiagnostic& kd : report.per_k) {
    std::string row = "k=" + std::to_string(kd.k) + ": orbits=" + std::to_string(kd.orbits);
    for (const LevelDiagnostic& ld : kd.fingerprint_classes)
      row += " level" + std::to_string(ld.level) + "=" + std::to_string(ld.classes);
    cmd.line(row);
  }
  for (const RejectedLevel& r : report.rejected)
    cmd.line("rejected n=" + std::to_string(r.level) + " at k=" + std::to_string(r.k) + ": " +
             tuple_str(r.pair.first) + " vs " + tuple_str(r.pair.second));
  cmd.emit();
}

void run_eval(const Opts& o) {
  CommandOutput cmd("eval", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const Formula f = parse_formula(o.formula);
  const std::vector<std::string> vars = split_csv(o.vars);
  cmd.results["formula"] = print_formula(f);
  if (vars.empty()) {
    const bool value = check_sentence(s, f);
    cmd.results["value"] = value;
    cmd.line(value ? "true" : "false");
  } else {
    const Relation x = evaluate(s, f, vars);
    cmd.results["vars"] = vars;
    cmd.results["count"] = x.count();
    Json tuples = Json::array();
    for (const Tuple& t : x.tuples()) {
      tuples.push_back(t);
      cmd.line(tuple_str(t));
    }
    cmd.results["tuples"] = std::move(tuples);
    cmd.line("count: " + std::to_string(x.count()));
  }
  cmd.emit();
}

void run_orbits(const Opts& o) {
  CommandOutput cmd("orbits", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const OrbitPartition p = orbit_partition(s, o.k);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(p.count), 0);
  for (std::int32_t id : p.orbit_of) ++sizes[static_cast<std::size_t>(id)];
  cmd.results["k"] = p.arity;
  cmd.results["count"] = p.count;
  Json orbits = Json::array();
  cmd.line("k=" + std::to_string(p.arity) + " orbits: " + std::to_string(p.count));
  for (std::int32_t id = 0; id < p.count; ++id) {
    const Tuple rep =
        decode_tuple(p.representatives[static_cast<std::size_t>(id)], s.universe, p.arity);
    Json j;
    j["id"] = id;
    j["size"] = sizes[static_cast<std::size_t>(id)];
    j["representative"] = rep;
    orbits.push_back(std::move(j));
    cmd.line(std::to_string(id) + ": size " + std::to_string(sizes[static_cast<std::size_t>(id)]) +
             " rep " + tuple_str(rep));
  }
  cmd.results["orbits"] = std::move(orbits);
  cmd.emit();
}

void run_aut(const Opts& o) {
  CommandOutput cmd("aut", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const AutomorphismGroup g = automorphisms(s);
  cmd.results["order"] = g.size();
  cmd.line("order: " + std::to_string(g.size()));
  if (g.size() <= 120) {
    Json elems = Json::array();
    for (const Permutation& p : g.elements) {
      elems.push_back(p);
      cmd.line(tuple_str(p));
    }
    cmd.results["elements"] = std::move(elems);
  }
  cmd.emit();
}

void run_transitive(const Opts& o) {
  CommandOutput cmd("transitive", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const TransitivityProfile p = transitivity_profile(s);
  cmd.results = transitivity_profile_to_json(p);
  for (std::size_t i = 0; i < p.transitive.size(); ++i)
    cmd.line("n=" + std::to_string(i + 1) + ": " + (p.transitive[i] ? "transitive" : "not transitive"));
  cmd.line("largest: " + std::to_string(p.largest));
  cmd.emit();
}

void run_qe_check(const Opts& o) {
  CommandOutput cmd("qe-check", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const QeResult r = qe_check(s);
  cmd.results = qe_result_to_json(r);
  if (r.value) {
    cmd.line("quantifier elimination: yes");
  } else {
    cmd.line("quantifier elimination: no (failing k=" + std::to_string(r.failing_k) + ": " +
             tuple_str(r.witness->first) + " vs " + tuple_str(r.witness->second) + ")");
  }
  cmd.emit();
}

void run_ba(const Opts& o) {
  CommandOutput cmd("ba", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const BaAtoms b = ba_atoms(s, o.k, o.level);
  cmd.results = ba_atoms_to_json(b);
  cmd.line("k=" + std::to_string(b.k) + " n=" + std::to_string(b.level) +
           ": atoms=" + std::to_string(b.atom_count) + " orbits=" + std::to_string(b.orbit_count) +
           " saturated=" + (b.atom_count == b.orbit_count ? "yes" : "no"));
  cmd.emit();
}

void run_formula_arity(const Opts& o) {
  CommandOutput cmd("formula-arity", o.json);
  const FiniteStructure s = cmd.load(o.file);
  Relation x(s.universe, 1);
  if (!o.relation.empty()) {
    x = s.relation(o.relation);
    cmd.results["target"] = o.relation;
  } else if (!o.formula.empty()) {
    x = evaluate(s, o.formula, split_csv(o.vars));
    cmd.results["target"] = print_formula(parse_formula(o.formula));
  } else {
    throw InputError("formula-arity needs --relation or --formula");
  }
  cmd.results["k"] = x.arity();
  const int arity = formula_arity(s, x);
  cmd.results["arity"] = arity;
  cmd.line("arity: " + std::to_string(arity));
  cmd.emit();
}

void run_axioms(const Opts& o) {
  CommandOutput cmd("axioms", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const AxiomFamily family = o.family == "ball" ? AxiomFamily::ball : AxiomFamily::circular;
  if (o.family != "ball" && o.family != "circular")
    throw InputError("--family must be 'circular' or 'ball'");
  const AxiomReport report = check_axioms(s, family);
  cmd.results = axiom_report_to_json(report);
  for (const AxiomCheck& c : report.checks) {
    std::string row = c.name + ": " + (c.pass ? "pass" : "fail");
    if (!c.pass) {
      row += " at";
      for (const auto& [var, value] : c.counterexample)
        row += " " + var + "=" + std::to_string(value);
    }
    cmd.line(row);
  }
  cmd.line(std::string("all_pass: ") + (report.all_pass ? "yes" : "no"));
  cmd.emit();
}

void run_binarize(const Opts& o, bool unary) {
  CommandOutput cmd(unary ? "unarize" : "binarize", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const FiniteStructure expanded = unary ? unarize(s) : binarize(s);
  cmd.results["universe"] = expanded.universe;
  cmd.results["relations"] = expanded.relations.size();
  deliver_structure(cmd, expanded, o.out);
  cmd.emit();
}

void run_djunion(const Opts& o) {
  CommandOutput cmd("djunion", o.json);
  std::vector<FiniteStructure> parts;
  Json digests = Json::array();
  for (const std::string& path : o.files) {
    parts.push_back(load_structure(path));
    digests.push_back(structure_digest(parts.back()));
  }
  cmd.input_digest = std::move(digests);
  const DisjointUnionResult u = disjoint_union(parts);
  cmd.results["universe"] = u.structure.universe;
  cmd.results["offsets"] = u.offsets;
  Json renames = Json::array();
  for (const RelationRename& r : u.renames) {
    Json j;
    j["part"] = r.part;
    j["from"] = r.from;
    j["to"] = r.to;
    renames.push_back(std::move(j));
    cmd.line("renamed part " + std::to_string(r.part) + " " + r.from + " -> " + r.to);
  }
  cmd.results["renames"] = std::move(renames);
  cmd.line("universe: " + std::to_string(u.structure.universe));
  deliver_structure(cmd, u.structure, o.out);
  cmd.emit();
}

void run_compose(const Opts& o) {
  CommandOutput cmd("compose", o.json);
  const FiniteStructure outer = load_structure(o.file);
  const FiniteStructure inner = load_structure(o.second);
  cmd.input_digest = Json::array({structure_digest(outer), structure_digest(inner)});
  const CompositionResult c = compose(outer, inner);
  cmd.results["universe"] = c.structure.universe;
  cmd.results["outer_size"] = c.outer_size;
  cmd.results["inner_size"] = c.inner_size;
  cmd.line("universe: " + std::to_string(c.structure.universe) + " (outer " +
           std::to_string(c.outer_size) + " x inner " + std::to_string(c.inner_size) + ")");
  deliver_structure(cmd, c.structure, o.out);
  cmd.emit();
}

void run_edef_check(const Opts& o) {
  CommandOutput cmd("edef-check", o.json);
  const FiniteStructure s = cmd.load(o.file);
  const bool value = e_definable_check(s, o.fiber);
  cmd.results["fiber"] = o.fiber;
  cmd.results["e_definable"] = value;
  cmd.line(std::string("e-definable: ") + (value ? "yes" : "no"));
  cmd.emit();
}

void run_gen(const Opts& o) {
  CommandOutput cmd("gen", o.json);
  FiniteStructure s("g", 1);
  if (o.family == "pure-set") {
    s = pure_set(o.m);
  } else if (o.family == "successor-cycle") {
    s = successor_cycle(o.m);
  } else if (o.family == "cyclic-order") {
    s = cyclic_order(o.m);
  } else if (o.family == "tetra4") {
    s = tetra4();
  } else if (o.family == "n-ball") {
    const BallOrderResult ball = n_ball_order(o.m, o.width);
    s = ball.structure;
    cmd.results["axioms"] = axiom_report_to_json(ball.report);
    cmd.line(std::string("axioms all_pass: ") + (ball.report.all_pass ? "yes" : "no"));
  } else if (o.family == "random-invariant") {
    if (o.m < 1) throw InputError("random-invariant needs -m >= 1");
    FiniteStructure base = pure_set(o.m);
    const Relation x = random_invariant_relation(base, o.k, o.seed);
    s = expand_with(base, "X", x);
    s.name = "rand" + std::to_string(o.m) + "_" + std::to_string(o.k) + "_" +
             std::to_string(o.seed);
  } else {
    throw InputError("unknown family '" + o.family +
                     "' (expected pure-set, successor-cycle, cyclic-order, n-ball, tetra4, "
                     "or random-invariant)");
  }
  cmd.input_digest = structure_digest(s);
  if (!s.element_names.empty()) cmd.element_names = s.element_names;
  cmd.results["name"] = s.name;
  deliver_structure(cmd, s, o.out);
  cmd.emit();
}

// ── self-check suite ────────────────────────────────────────────────────────

struct Expect {
  std::vector<std::string> failures;
  void operator()(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct SelfCheck {
  std::string id;
  std::string description;
  std::function<void(Expect&, const std::string&)> run;
};

// Replay a recorded axiom counterexample: the assignment must falsify the
// quantifier-free matrix of the failed sentence.
bool counterexample_replays(const FiniteStructure& s, const AxiomCheck& check) {
  Formula f = parse_formula(check.formula);
  std::vector<std::string> prefix;
  while (f->kind == FormulaKind::forall) {
    prefix.push_back(f->name);
    f = f->child;
  }
  if (check.counterexample.size() != prefix.size()) return false;
  Tuple point;
  for (const auto& [var, value] : check.counterexample) {
    (void)var;
    point.push_back(value);
  }
  return !evaluate(s, f, prefix).test(point);
}

std::vector<FiniteStructure> fixture_corpus(const std::string& fx) {
  std::vector<FiniteStructure> out;
  for (const char* name : {"tetra4", "pure2", "pure3", "pure4", "pure5", "s3", "s4", "s5", "s6",
                           "c3", "c4", "c5"})
    out.push_back(load_structure(fx + "/" + name + ".json"));
  return out;
}

std::vector<SelfCheck> self_checks() {
  std::vector<SelfCheck> checks;

  checks.push_back({"tetra-profile",
                    "oriented tetrahedron fixture: 12 triples, automorphism order 12, 2- but not "
                    "3-transitive, quantifier elimination, theory arity 3",
                    [](Expect& expect, const std::string& fx) {
                      const FiniteStructure s = load_structure(fx + "/tetra4.json");
                      expect(s == tetra4(), "fixture matches the built-in generator");
                      expect(s.relation("R").count() == 12, "relation has 12 triples");
                      expect(automorphisms(s).size() == 12, "automorphism group has order 12");
                      expect(n_transitive(s, 2), "2-transitive");
                      expect(!n_transitive(s, 3), "not 3-transitive");
                      expect(qe_check(s).value, "admits quantifier elimination");
                      expect(theory_arity_value(s) == 3, "theory arity is 3");
                    }});

  checks.push_back({"successor-arity",
                    "directed 4-cycle fixture: quantifier elimination and theory arity 2",
                    [](Expect& expect, const std::string& fx) {
                      const FiniteStructure s = load_structure(fx + "/s4.json");
                      expect(s == successor_cycle(4), "fixture matches the built-in generator");
                      expect(qe_check(s).value, "admits quantifier elimination");
                      expect(theory_arity_value(s) == 2, "theory arity is 2");
                    }});

  checks.push_back({"circular-axioms",
                    "circular order axioms co1-co4 hold on the cycle candidates for m = 3..6",
                    [](Expect& expect, const std::string&) {
                      for (int m = 3; m <= 6; ++m) {
                        const AxiomReport r = check_axioms(cyclic_order(m), AxiomFamily::circular);
                        expect(r.all_pass, "all axioms pass at m = " + std::to_string(m));
                      }
                    }});

  checks.push_back({"circular-arity",
                    "cycle candidates have theory arity 2 for m = 3..6, and the ternary relation "
                    "is 2-ary by both the fingerprint check and the closure oracle",
                    [](Expect& expect, const std::string& fx) {
                      expect(load_structure(fx + "/c5.dsl") == cyclic_order(5),
                             "text fixture matches the built-in generator");
                      for (int m = 3; m <= 6; ++m) {
                        const FiniteStructure s = cyclic_order(m);
                        expect(theory_arity_value(s) == 2,
                               "theory arity 2 at m = " + std::to_string(m));
                        expect(formula_arity(s, s.relation("K3")) == 2,
                               "relation arity 2 at m = " + std::to_string(m));
                        expect(is_nary(s, s.relation("K3"), 2).value ==
                                   closure_oracle(s, s.relation("K3"), 2),
                               "both 2-ary routes agree at m = " + std::to_string(m));
                      }
                    }});

  checks.push_back({"ball-candidates",
                    "width-4 gap-sum candidates (m = 5, 6) satisfy the rotation axiom, fail the "
                    "rest, and every recorded counterexample replays",
                    [](Expect& expect, const std::string&) {
                      for (int m : {5, 6}) {
                        const BallOrderResult ball = n_ball_order(m, 4);
                        expect(!ball.report.all_pass,
                               "candidate fails the axiom list at m = " + std::to_string(m));
                        for (const AxiomCheck& c : ball.report.checks) {
                          if (c.name == "nbo1") {
                            expect(c.pass, "rotation axiom passes at m = " + std::to_string(m));
                          } else {
                            expect(!c.pass, c.name + " fails at m = " + std::to_string(m));
                            expect(counterexample_replays(ball.structure, c),
                                   c.name + " counterexample replays at m = " + std::to_string(m));
                          }
                        }
                      }
                    }});

  checks.push_back({"expansion-collapse",
                    "naming every element (or every pair) collapses theory arity to 1 on all "
                    "fixtures with universe size at most 5",
                    [](Expect& expect, const std::string& fx) {
                      for (const FiniteStructure& s : fixture_corpus(fx)) {
                        if (s.universe > 5) continue;
                        expect(theory_arity_value(unarize(s)) == 1,
                               "unarize(" + s.name + ") has arity 1");
                        expect(theory_arity_value(binarize(s)) == 1,
                               "binarize(" + s.name + ") has arity 1");
                      }
                    }});

  checks.push_back({"union-law",
                    "theory arity of a disjoint union equals the maximum over its parts on seven "
                    "fixture pairs",
                    [](Expect& expect, const std::string&) {
                      const std::vector<std::pair<FiniteStructure, FiniteStructure>> pairs = {
                          {pure_set(2), pure_set(3)},      {pure_set(2), cyclic_order(3)},
                          {pure_set(1), pure_set(2)},      {cyclic_order(3), cyclic_order(3)},
                          {cyclic_order(3), successor_cycle(3)}, {pure_set(2), successor_cycle(4)},
                          {pure_set(2), pure_set(2)}};
                      for (const auto& [a, b] : pairs) {
                        const int expected =
                            std::max(theory_arity_value(a), theory_arity_value(b));
                        const DisjointUnionResult u = disjoint_union({a, b});
                        expect(theory_arity_value(u.structure) == expected,
                               a.name + " + " + b.name + " has arity max of parts (" +
                                   std::to_string(expected) + ")");
                      }
                    }});

  checks.push_back({"composition-law",
                    "composing the 3-cycle circular order with a 2-point fiber keeps the fiber "
                    "relation definable and theory arity 2; a 1-point fiber changes nothing; "
                    "composing pure sets makes the fiber relation undefinable",
                    [](Expect& expect, const std::string&) {
                      const CompositionResult a = compose(cyclic_order(3), pure_set(2));
                      expect(e_definable_check(a.structure, a.inner_size),
                             "2-point fiber relation is definable");
                      expect(theory_arity_value(a.structure) == 2,
                             "composed structure has arity 2");
                      const CompositionResult b = compose(cyclic_order(3), pure_set(1));
                      expect(b.structure.relation("K3") == cyclic_order(3).relation("K3"),
                             "1-point fiber leaves the relation unchanged");
                      expect(theory_arity_value(b.structure) == 2,
                             "1-point fiber leaves the arity at 2");
                      const CompositionResult c = compose(pure_set(2), pure_set(2));
                      expect(!e_definable_check(c.structure, c.inner_size),
                             "pure-set fiber relation is flagged as undefinable");
                    }});

  checks.push_back({"transitivity-bridge",
                    "on every fixture: n-transitive but not (n+1)-transitive forces theory arity "
                    "at least n+1",
                    [](Expect& expect, const std::string& fx) {
                      for (const FiniteStructure& s : fixture_corpus(fx)) {
                        const TransitivityProfile p = transitivity_profile(s);
                        const int arity = theory_arity_value(s);
                        for (std::size_t i = 0; i + 1 < p.transitive.size(); ++i)
                          if (p.transitive[i] && !p.transitive[i + 1])
                            expect(arity >= static_cast<int>(i) + 2,
                                   s.name + ": arity >= " + std::to_string(i + 2));
                      }
                    }});

  checks.push_back({"atom-bridge",
                    "on every fixture and every level n below the universe size: theory arity at "
                    "most n holds exactly when the level-n algebra atoms match the orbit count "
                    "for every width up to the universe size",
                    [](Expect& expect, const std::string& fx) {
                      for (const FiniteStructure& s : fixture_corpus(fx)) {
                        const int arity = theory_arity_value(s);
                        for (int n = 1; n < s.universe; ++n) {
                          bool saturated = true;
                          for (int k = n + 1; k <= s.universe; ++k) {
                            const BaAtoms b = ba_atoms(s, k, n);
                            if (b.atom_count != b.orbit_count) saturated = false;
                          }
                          expect((arity <= n) == saturated,
                                 s.name + " at n = " + std::to_string(n));
                        }
                      }
                    }});

  checks.push_back({"arity-dynamics",
                    "expanding the 4-point pure set with the cyclic ternary relation raises "
                    "theory arity from 1 to 2; naming every tetrahedron point lowers it from 3 "
                    "to 1",
                    [](Expect& expect, const std::string& fx) {
                      const FiniteStructure p4 = pure_set(4);
                      expect(theory_arity_value(p4) == 1, "pure set has arity 1");
                      const FiniteStructure grown =
                          expand_with(p4, "K3", cyclic_order(4).relation("K3"));
                      expect(theory_arity_value(grown) == 2, "expanded structure has arity 2");
                      const FiniteStructure t4 = load_structure(fx + "/tetra4.json");
                      expect(theory_arity_value(t4) == 3, "tetrahedron has arity 3");
                      expect(theory_arity_value(unarize(t4)) == 1,
                             "named tetrahedron has arity 1");
                    }});

  return checks;
}

int run_verify(const Opts& o) {
  CommandOutput cmd("verify", o.json);
  const std::vector<SelfCheck> checks = self_checks();

  if (o.list) {
    Json listing = Json::array();
    for (const SelfCheck& c : checks) {
      Json j;
      j["id"] = c.id;
      j["description"] = c.description;
      listing.push_back(std::move(j));
      cmd.line(c.id + ": " + c.description);
    }
    cmd.results["checks"] = std::move(listing);
    cmd.emit();
    return 0;
  }

  bool all_pass = true;
  Json rows = Json::array();
  for (const SelfCheck& c : checks) {
    Expect expect;
    c.run(expect, o.fixtures);
    const bool pass = expect.failures.empty();
    all_pass = all_pass && pass;
    Json j;
    j["id"] = c.id;
    j["description"] = c.description;
    j["pass"] = pass;
    if (!pass) j["failures"] = expect.failures;
    rows.push_back(std::move(j));
    std::string row = std::string(pass ? "PASS" : "FAIL") + " " + c.id + ": " + c.description;
    if (!pass)
      for (const std::string& f : expect.failures) row += "\n  failed: " + f;
    cmd.line(row);
  }
  cmd.results["all_pass"] = all_pass;
  cmd.results["checks"] = std::move(rows);
  cmd.line(all_pass ? "all checks passed" : "some checks FAILED");
  cmd.emit();
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-structure definability and arity toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  int exit_code = 0;

  auto add_json = [](CLI::App* sub, std::shared_ptr<Opts> o) {
    sub->add_flag("--json", o->json, "emit a JSON report envelope");
  };

  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("arity", "compute the theory arity of a structure");
    sub->add_option("file", o->file, "structure file (JSON or text)")->required();
    sub->add_option("--max-k", o->max_k, "largest tuple width to scan (default: universe size)");
    add_json(sub, o);
    sub->callback([o]() { run_arity(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("eval", "evaluate a formula on a structure");
    sub->add_option("-f,--formula", o->formula, "formula text")->required();
    sub->add_option("-s,--structure", o->file, "structure file")->required();
    sub->add_option("--vars", o->vars, "comma-separated free-variable context");
    add_json(sub, o);
    sub->callback([o]() { run_eval(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("verify", "run the bundled self-check suite");
    sub->add_option("--fixtures", o->fixtures, "fixture directory (default: fixtures)");
    sub->add_flag("--list", o->list, "list the checks without running them");
    add_json(sub, o);
    sub->callback([o, &exit_code]() { exit_code = run_verify(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("orbits", "orbit partition of k-tuples");
    sub->add_option("file", o->file, "structure file")->required();
    sub->add_option("-k", o->k, "tuple width")->required();
    add_json(sub, o);
    sub->callback([o]() { run_orbits(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("aut", "automorphism group of a structure");
    sub->add_option("file", o->file, "structure file")->required();
    add_json(sub, o);
    sub->callback([o]() { run_aut(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("transitive", "transitivity profile of a structure");
    sub->add_option("file", o->file, "structure file")->required();
    add_json(sub, o);
    sub->callback([o]() { run_transitive(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("qe-check", "atomic-type quantifier elimination check");
    sub->add_option("file", o->file, "structure file")->required();
    add_json(sub, o);
    sub->callback([o]() { run_qe_check(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("ba", "atom count of the level-n cylinder algebra on M^k");
    sub->add_option("file", o->file, "structure file")->required();
    sub->add_option("-k", o->k, "tuple width")->required();
    sub->add_option("-n", o->level, "fingerprint level")->required();
    add_json(sub, o);
    sub->callback([o]() { run_ba(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub =
        app.add_subcommand("formula-arity", "arity of a named relation or evaluated formula");
    sub->add_option("file", o->file, "structure file")->required();
    sub->add_option("--relation", o->relation, "relation name in the structure");
    sub->add_option("-f,--formula", o->formula, "formula text");
    sub->add_option("--vars", o->vars, "comma-separated free-variable context");
    add_json(sub, o);
    sub->callback([o]() { run_formula_arity(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("axioms", "check the circular or ball order axioms");
    sub->add_option("file", o->file, "structure file")->required();
    sub->add_option("--family", o->family, "axiom family: circular or ball")->required();
    add_json(sub, o);
    sub->callback([o]() { run_axioms(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("binarize", "expand with a singleton for every pair");
    sub->add_option("file", o->file, "structure file")->required();
    sub->add_option("-o,--out", o->out, "output structure file");
    add_json(sub, o);
    sub->callback([o]() { run_binarize(*o, false); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("unarize", "expand with a singleton for every element");
    sub->add_option("file", o->file, "structure file")->required();
    sub->add_option("-o,--out", o->out, "output structure file");
    add_json(sub, o);
    sub->callback([o]() { run_binarize(*o, true); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("djunion", "disjoint union of structures with part marks");
    sub->add_option("files", o->files, "structure files")->required()->expected(-1);
    sub->add_option("-o,--out", o->out, "output structure file");
    add_json(sub, o);
    sub->callback([o]() { run_djunion(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("compose", "compose an outer structure with a fiber");
    sub->add_option("outer", o->file, "outer structure file")->required();
    sub->add_option("inner", o->second, "inner (fiber) structure file")->required();
    sub->add_option("-o,--out", o->out, "output structure file");
    add_json(sub, o);
    sub->callback([o]() { run_compose(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub =
        app.add_subcommand("edef-check", "is the same-fiber equivalence relation definable?");
    sub->add_option("file", o->file, "structure file")->required();
    sub->add_option("--fiber", o->fiber, "fiber size")->required();
    add_json(sub, o);
    sub->callback([o]() { run_edef_check(*o); });
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("gen", "generate a bundled structure family");
    sub->add_option("family", o->family,
                    "pure-set | successor-cycle | cyclic-order | n-ball | tetra4 | "
                    "random-invariant")
        ->required();
    sub->add_option("-m", o->m, "universe size");
    sub->add_option("-n", o->width, "relation width for n-ball (default 4)");
    sub->add_option("-k", o->k, "relation arity for random-invariant (default 2)");
    sub->add_option("--seed", o->seed, "seed for random-invariant");
    sub->add_option("-o,--out", o->out, "output structure file");
    add_json(sub, o);
    sub->callback([o]() { run_gen(*o); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
