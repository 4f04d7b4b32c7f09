// Serialization: the JSON structure format, the line-oriented text DSL,
// content digests, and JSON emitters for every report type.
//
// Both structure formats are canonical on output (fixed key order, tuples in
// lexicographic order), so saving is deterministic and digests are stable.
// Input validation is strict: unknown JSON keys are rejected.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aritylab/core.hpp"
#include "aritylab/engine.hpp"
#include "aritylab/generators.hpp"
#include "aritylab/structure.hpp"

namespace aritylab {

using Json = nlohmann::ordered_json;

enum class StructureFormat { json, dsl };

// ── files ───────────────────────────────────────────────────────────────────

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

// ── JSON structure format ───────────────────────────────────────────────────

inline Json structure_to_json(const FiniteStructure& s) {
  s.validate();
  Json j;
  j["name"] = s.name;
  j["universe"] = s.universe;
  if (!s.element_names.empty()) j["element_names"] = s.element_names;
  Json rels = Json::object();
  for (const auto& [rel_name, rel] : s.relations) {
    Json r;
    r["arity"] = rel.arity();
    Json tuples = Json::array();
    for (const Tuple& t : rel.tuples()) tuples.push_back(t);
    r["tuples"] = std::move(tuples);
    rels[rel_name] = std::move(r);
  }
  j["relations"] = std::move(rels);
  return j;
}

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed,
                                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& a : allowed)
      if (a == key) { ok = true; break; }
    if (!ok) throw InputError("unknown key '" + key + "' in " + where);
  }
}

}  // namespace detail

inline FiniteStructure structure_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("structure document must be a JSON object");
  detail::reject_unknown_keys(j, {"name", "universe", "element_names", "relations"}, "structure");
  if (!j.contains("name") || !j["name"].is_string())
    throw InputError("structure needs a string 'name'");
  if (!j.contains("universe") || !j["universe"].is_number_integer())
    throw InputError("structure needs an integer 'universe'");
  const int m = j["universe"].get<int>();
  FiniteStructure s(j["name"].get<std::string>(), m);
  if (j.contains("element_names")) {
    if (!j["element_names"].is_array())
      throw InputError("'element_names' must be an array of strings");
    for (const auto& n : j["element_names"]) {
      if (!n.is_string()) throw InputError("'element_names' must be an array of strings");
      s.element_names.push_back(n.get<std::string>());
    }
  }
  if (j.contains("relations")) {
    if (!j["relations"].is_object()) throw InputError("'relations' must be an object");
    for (const auto& [rel_name, spec] : j["relations"].items()) {
      if (!spec.is_object()) throw InputError("relation '" + rel_name + "' must be an object");
      detail::reject_unknown_keys(spec, {"arity", "tuples"}, "relation '" + rel_name + "'");
      if (!spec.contains("arity") || !spec["arity"].is_number_integer())
        throw InputError("relation '" + rel_name + "' needs an integer 'arity'");
      const int arity = spec["arity"].get<int>();
      if (arity < 1) throw InputError("relation '" + rel_name + "' must have arity at least 1");
      Relation rel(m, arity);
      if (spec.contains("tuples")) {
        if (!spec["tuples"].is_array())
          throw InputError("relation '" + rel_name + "' tuples must be an array");
        for (const auto& jt : spec["tuples"]) {
          if (!jt.is_array() || static_cast<int>(jt.size()) != arity)
            throw InputError("relation '" + rel_name + "': every tuple must be an array of length " +
                             std::to_string(arity));
          Tuple t;
          for (const auto& v : jt) {
            if (!v.is_number_integer())
              throw InputError("relation '" + rel_name + "': tuple entries must be integers");
            t.push_back(v.get<int>());
          }
          try {
            rel.set(t);
          } catch (const InputError& e) {
            throw InputError("relation '" + rel_name + "': " + e.what());
          }
        }
      }
      s.add_relation(rel_name, std::move(rel));
    }
  }
  s.validate();
  return s;
}

// ── text DSL ────────────────────────────────────────────────────────────────
//
//   # comment
//   structure c5;
//   universe 5;
//   relation K3/3 {
//     (0, 0, 0)
//     ...
//   }
//
// Semicolons and newlines are interchangeable separators; element names are
// not expressible in this format.

namespace detail {

struct DslScanner {
  explicit DslScanner(std::string_view src) : src_(src) {}

  // Tokens: words, integers, and the punctuation ( ) , { } / ;
  std::string next() {
    skip();
    if (at_ >= src_.size()) return "";
    const char c = src_[at_];
    if (std::string("(),{}/;").find(c) != std::string::npos) {
      ++at_;
      return std::string(1, c);
    }
    std::size_t end = at_;
    while (end < src_.size() && std::string(" \t\r\n#(),{}/;").find(src_[end]) == std::string::npos)
      ++end;
    std::string word(src_.substr(at_, end - at_));
    at_ = end;
    return word;
  }

  std::string peek() {
    const std::size_t save = at_;
    std::string t = next();
    at_ = save;
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < at_ && i < src_.size(); ++i)
      if (src_[i] == '\n') ++line;
    throw InputError("structure text error near line " + std::to_string(line) + ": " + message);
  }

 private:
  void skip() {
    for (;;) {
      while (at_ < src_.size() && (src_[at_] == ' ' || src_[at_] == '\t' || src_[at_] == '\r' ||
                                   src_[at_] == '\n' || src_[at_] == ';'))
        ++at_;
      if (at_ < src_.size() && src_[at_] == '#') {
        while (at_ < src_.size() && src_[at_] != '\n') ++at_;
        continue;
      }
      return;
    }
  }

  std::string_view src_;
  std::size_t at_ = 0;
};

inline int dsl_int(DslScanner& scan, const std::string& what) {
  const std::string t = scan.next();
  if (t.empty()) scan.fail("expected " + what + ", got end of input");
  for (char c : t)
    if (c < '0' || c > '9') scan.fail("expected " + what + ", got '" + t + "'");
  return std::stoi(t);
}

}  // namespace detail

inline FiniteStructure parse_structure_dsl(const std::string& text) {
  detail::DslScanner scan(text);
  std::string name;
  int universe = -1;
  std::vector<std::pair<std::string, Relation>> rels;
  for (;;) {
    const std::string t = scan.next();
    if (t.empty()) break;
    if (t == "structure") {
      name = scan.next();
      if (!is_identifier(name)) scan.fail("structure name must be an identifier");
    } else if (t == "universe") {
      universe = detail::dsl_int(scan, "universe size");
    } else if (t == "relation") {
      if (universe < 1) scan.fail("'universe' must come before any relation");
      const std::string rel_name = scan.next();
      if (!is_identifier(rel_name)) scan.fail("relation name must be an identifier");
      if (scan.next() != "/") scan.fail("expected '/' after relation name");
      const int arity = detail::dsl_int(scan, "relation arity");
      if (arity < 1) scan.fail("relation arity must be at least 1");
      if (scan.next() != "{") scan.fail("expected '{' opening the tuple list");
      Relation rel(universe, arity);
      for (;;) {
        const std::string inner = scan.next();
        if (inner == "}") break;
        if (inner != "(") scan.fail("expected '(' starting a tuple or '}'");
        Tuple tuple;
        for (int i = 0; i < arity; ++i) {
          if (i && scan.next() != ",") scan.fail("expected ',' inside tuple");
          tuple.push_back(detail::dsl_int(scan, "element index"));
        }
        if (scan.next() != ")") scan.fail("expected ')' closing the tuple");
        try {
          rel.set(tuple);
        } catch (const InputError& e) {
          scan.fail(e.what());
        }
      }
      rels.emplace_back(rel_name, std::move(rel));
    } else {
      scan.fail("unknown directive '" + t + "'");
    }
  }
  if (name.empty()) throw InputError("structure text must declare 'structure <name>'");
  if (universe < 1) throw InputError("structure text must declare 'universe <m>'");
  FiniteStructure s(name, universe);
  for (auto& [rel_name, rel] : rels) s.add_relation(rel_name, std::move(rel));
  return s;
}

inline std::string save_structure_dsl(const FiniteStructure& s) {
  s.validate();
  std::string out;
  out += "structure " + s.name + ";\n";
  out += "universe " + std::to_string(s.universe) + ";\n";
  for (const auto& [rel_name, rel] : s.relations) {
    out += "relation " + rel_name + "/" + std::to_string(rel.arity()) + " {\n";
    for (const Tuple& t : rel.tuples()) {
      out += "  (";
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(t[i]);
      }
      out += ")\n";
    }
    out += "}\n";
  }
  return out;
}

// ── format-dispatch entry points ────────────────────────────────────────────

inline FiniteStructure load_structure_text(const std::string& text, StructureFormat format) {
  if (format == StructureFormat::json) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError("malformed JSON structure document");
    return structure_from_json(j);
  }
  return parse_structure_dsl(text);
}

inline std::string save_structure(const FiniteStructure& s, StructureFormat format) {
  if (format == StructureFormat::json) return structure_to_json(s).dump(2) + "\n";
  return save_structure_dsl(s);
}

// Load from a file, sniffing the format: a document whose first non-space
// character is '{' is JSON, anything else is the DSL.
inline FiniteStructure load_structure(const std::string& path) {
  const std::string text = read_file(path);
  std::size_t at = 0;
  while (at < text.size() &&
         (text[at] == ' ' || text[at] == '\t' || text[at] == '\r' || text[at] == '\n'))
    ++at;
  const bool json = at < text.size() && text[at] == '{';
  return load_structure_text(text, json ? StructureFormat::json : StructureFormat::dsl);
}

// Stable content digest (FNV-1a over the canonical compact JSON form).
inline std::string structure_digest(const FiniteStructure& s) {
  return hex64(fnv1a64(structure_to_json(s).dump()));
}

// ── report serialization ────────────────────────────────────────────────────

inline Json witness_to_json(const Witness& w) {
  return Json::array({w.first, w.second});
}

inline Json arity_report_to_json(const ArityReport& report) {
  Json j;
  j["structure"] = report.structure;
  j["arity"] = report.arity;
  Json per_k = Json::array();
  for (const KDiagnostic& kd : report.per_k) {
    Json d;
    d["k"] = kd.k;
    d["orbits"] = kd.orbits;
    Json levels = Json::array();
    for (const LevelDiagnostic& ld : kd.fingerprint_classes) {
      Json l;
      l["n"] = ld.level;
      l["classes"] = ld.classes;
      levels.push_back(std::move(l));
    }
    d["fingerprint_classes"] = std::move(levels);
    per_k.push_back(std::move(d));
  }
  j["per_k"] = std::move(per_k);
  Json witnesses = Json::array();
  for (const RejectedLevel& r : report.rejected) witnesses.push_back(witness_to_json(r.pair));
  j["witnesses"] = std::move(witnesses);
  return j;
}

inline Json axiom_report_to_json(const AxiomReport& report) {
  Json j;
  j["structure"] = report.structure;
  j["family"] = report.family == AxiomFamily::circular ? "circular" : "ball";
  j["all_pass"] = report.all_pass;
  Json checks = Json::array();
  for (const AxiomCheck& c : report.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["formula"] = c.formula;
    jc["pass"] = c.pass;
    if (!c.pass) {
      Json cex = Json::object();
      for (const auto& [var, value] : c.counterexample) cex[var] = value;
      jc["counterexample"] = std::move(cex);
    }
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  return j;
}

inline Json qe_result_to_json(const QeResult& r) {
  Json j;
  j["quantifier_elimination"] = r.value;
  if (!r.value) {
    j["failing_k"] = r.failing_k;
    j["witness"] = witness_to_json(*r.witness);
  }
  return j;
}

inline Json transitivity_profile_to_json(const TransitivityProfile& p) {
  Json j;
  Json levels = Json::array();
  for (std::size_t i = 0; i < p.transitive.size(); ++i) {
    Json l;
    l["n"] = static_cast<int>(i) + 1;
    l["transitive"] = static_cast<bool>(p.transitive[i]);
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  j["largest"] = p.largest;
  return j;
}

inline Json ba_atoms_to_json(const BaAtoms& b) {
  Json j;
  j["k"] = b.k;
  j["n"] = b.level;
  j["atoms"] = b.atom_count;
  j["orbits"] = b.orbit_count;
  j["saturated"] = b.atom_count == b.orbit_count;
  return j;
}

inline Json nary_result_to_json(const NaryResult& r, int n) {
  Json j;
  j["n"] = n;
  j["is_nary"] = r.value;
  if (r.witness) j["witness"] = witness_to_json(*r.witness);
  return j;
}

}  // namespace aritylab
