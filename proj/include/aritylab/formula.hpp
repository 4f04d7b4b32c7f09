// First-order formulas over a relational signature: immutable AST, text
// parser, minimal-parenthesis printer, and table-driven evaluation against a
// finite structure.
//
// Grammar (lowest to highest precedence):
//   formula := iff
//   iff     := imp ("<->" imp)*                      left-folded
//   imp     := or ("->" imp)?                        right-associative
//   or      := and ("|" and)*
//   and     := un ("&" un)*
//   un      := "~" un | ("exists"|"forall") VAR "." un | atom
//   atom    := NAME "(" VAR ("," VAR)* ")" | VAR "=" VAR
//            | "true" | "false" | "(" formula ")"
// A quantifier body is a `un`, so `exists x . P(x) & Q(x)` conjoins the
// quantified formula with Q(x). Keywords are reserved and not usable as
// variable or relation names.
//
// Evaluation computes, bottom-up, the full truth table of each subformula
// over the current variable scope as a dense Relation; quantifiers project
// the last (least significant) coordinate. Inner bindings shadow outer ones.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "aritylab/core.hpp"
#include "aritylab/structure.hpp"

namespace aritylab {

enum class FormulaKind {
  constant,     // true / false
  atom,         // NAME(v1,...,vk)
  equality,     // v = w
  negation,     // ~f
  conjunction,  // f & g
  disjunction,  // f | g
  implication,  // f -> g
  equivalence,  // f <-> g
  exists,       // exists v . f
  forall,       // forall v . f
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  FormulaKind kind = FormulaKind::constant;
  bool value = false;              // constant
  std::string name;                // atom: relation name; quantifier: bound variable
  std::vector<std::string> args;   // atom arguments (repetition allowed)
  std::string lhs_var, rhs_var;    // equality operands
  Formula child;                   // unary child / binary lhs / quantifier body
  Formula rhs;                     // binary rhs
};

// ── constructors ────────────────────────────────────────────────────────────

inline Formula f_const(bool value) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::constant;
  n->value = value;
  return n;
}
inline Formula f_true() { return f_const(true); }
inline Formula f_false() { return f_const(false); }

inline Formula f_atom(std::string name, std::vector<std::string> args) {
  if (!is_identifier(name)) throw InputError("atom name must be an identifier: '" + name + "'");
  if (args.empty()) throw InputError("atom '" + name + "' needs at least one argument");
  for (const auto& a : args)
    if (!is_identifier(a)) throw InputError("atom argument must be a variable: '" + a + "'");
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::atom;
  n->name = std::move(name);
  n->args = std::move(args);
  return n;
}

inline Formula f_eq(std::string lhs, std::string rhs) {
  if (!is_identifier(lhs) || !is_identifier(rhs))
    throw InputError("equality operands must be variables");
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::equality;
  n->lhs_var = std::move(lhs);
  n->rhs_var = std::move(rhs);
  return n;
}

inline Formula f_unary(FormulaKind kind, Formula child) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->child = std::move(child);
  return n;
}
inline Formula f_not(Formula f) { return f_unary(FormulaKind::negation, std::move(f)); }

inline Formula f_binary(FormulaKind kind, Formula lhs, Formula rhs) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->child = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}
inline Formula f_and(Formula a, Formula b) { return f_binary(FormulaKind::conjunction, std::move(a), std::move(b)); }
inline Formula f_or(Formula a, Formula b) { return f_binary(FormulaKind::disjunction, std::move(a), std::move(b)); }
inline Formula f_implies(Formula a, Formula b) { return f_binary(FormulaKind::implication, std::move(a), std::move(b)); }
inline Formula f_iff(Formula a, Formula b) { return f_binary(FormulaKind::equivalence, std::move(a), std::move(b)); }

inline Formula f_quant(FormulaKind kind, std::string var, Formula body) {
  if (!is_identifier(var)) throw InputError("quantified variable must be an identifier: '" + var + "'");
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->name = std::move(var);
  n->child = std::move(body);
  return n;
}
inline Formula f_exists(std::string var, Formula body) {
  return f_quant(FormulaKind::exists, std::move(var), std::move(body));
}
inline Formula f_forall(std::string var, Formula body) {
  return f_quant(FormulaKind::forall, std::move(var), std::move(body));
}

// ── structural equality and free variables ──────────────────────────────────

inline bool structurally_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::constant: return a->value == b->value;
    case FormulaKind::atom: return a->name == b->name && a->args == b->args;
    case FormulaKind::equality: return a->lhs_var == b->lhs_var && a->rhs_var == b->rhs_var;
    case FormulaKind::negation: return structurally_equal(a->child, b->child);
    case FormulaKind::conjunction:
    case FormulaKind::disjunction:
    case FormulaKind::implication:
    case FormulaKind::equivalence:
      return structurally_equal(a->child, b->child) && structurally_equal(a->rhs, b->rhs);
    case FormulaKind::exists:
    case FormulaKind::forall:
      return a->name == b->name && structurally_equal(a->child, b->child);
  }
  return false;
}

namespace detail {

inline bool name_in(const std::vector<std::string>& xs, const std::string& x) {
  for (const auto& s : xs)
    if (s == x) return true;
  return false;
}

inline void collect_free_vars(const Formula& f, std::vector<std::string>& bound,
                              std::vector<std::string>& out) {
  switch (f->kind) {
    case FormulaKind::constant:
      return;
    case FormulaKind::atom:
      for (const auto& a : f->args)
        if (!name_in(bound, a) && !name_in(out, a)) out.push_back(a);
      return;
    case FormulaKind::equality:
      for (const auto& v : {f->lhs_var, f->rhs_var})
        if (!name_in(bound, v) && !name_in(out, v)) out.push_back(v);
      return;
    case FormulaKind::negation:
      collect_free_vars(f->child, bound, out);
      return;
    case FormulaKind::conjunction:
    case FormulaKind::disjunction:
    case FormulaKind::implication:
    case FormulaKind::equivalence:
      collect_free_vars(f->child, bound, out);
      collect_free_vars(f->rhs, bound, out);
      return;
    case FormulaKind::exists:
    case FormulaKind::forall:
      bound.push_back(f->name);
      collect_free_vars(f->child, bound, out);
      bound.pop_back();
      return;
  }
}

}  // namespace detail

// Free variables in order of first lexical occurrence, left to right.
inline std::vector<std::string> free_vars(const Formula& f) {
  if (!f) throw InputError("null formula");
  std::vector<std::string> bound, out;
  detail::collect_free_vars(f, bound, out);
  return out;
}

// ── parser ──────────────────────────────────────────────────────────────────

namespace detail {

enum class TokKind { lparen, rparen, comma, dot, eq, tilde, amp, pipe, arrow, darrow, ident, end };

struct Token {
  TokKind kind = TokKind::end;
  std::string text;
  std::size_t pos = 0;
};

struct FormulaLexer {
  explicit FormulaLexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& message, std::size_t pos) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < src_.size(); ++i) {
      if (src_[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
    throw InputError("formula syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + message);
  }

 private:
  void advance() {
    while (at_ < src_.size() && (src_[at_] == ' ' || src_[at_] == '\t' || src_[at_] == '\n' || src_[at_] == '\r'))
      ++at_;
    current_ = Token{};
    current_.pos = at_;
    if (at_ >= src_.size()) { current_.kind = TokKind::end; return; }
    const char c = src_[at_];
    auto symbol = [&](TokKind k, std::size_t len, const char* text) {
      current_.kind = k;
      current_.text = text;
      at_ += len;
    };
    switch (c) {
      case '(': symbol(TokKind::lparen, 1, "("); return;
      case ')': symbol(TokKind::rparen, 1, ")"); return;
      case ',': symbol(TokKind::comma, 1, ","); return;
      case '.': symbol(TokKind::dot, 1, "."); return;
      case '=': symbol(TokKind::eq, 1, "="); return;
      case '~': symbol(TokKind::tilde, 1, "~"); return;
      case '&': symbol(TokKind::amp, 1, "&"); return;
      case '|': symbol(TokKind::pipe, 1, "|"); return;
      case '-':
        if (at_ + 1 < src_.size() && src_[at_ + 1] == '>') { symbol(TokKind::arrow, 2, "->"); return; }
        fail("expected '->' after '-'", at_);
      case '<':
        if (at_ + 2 < src_.size() && src_[at_ + 1] == '-' && src_[at_ + 2] == '>') {
          symbol(TokKind::darrow, 3, "<->");
          return;
        }
        fail("expected '<->' after '<'", at_);
      default: break;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t end = at_ + 1;
      while (end < src_.size() &&
             ((src_[end] >= 'a' && src_[end] <= 'z') || (src_[end] >= 'A' && src_[end] <= 'Z') ||
              (src_[end] >= '0' && src_[end] <= '9') || src_[end] == '_'))
        ++end;
      current_.kind = TokKind::ident;
      current_.text = std::string(src_.substr(at_, end - at_));
      at_ = end;
      return;
    }
    fail(std::string("unexpected character '") + c + "'", at_);
  }

  std::string_view src_;
  std::size_t at_ = 0;
  Token current_;
};

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view src) : lex_(src) {}

  Formula parse() {
    Formula f = parse_iff(0);
    if (lex_.peek().kind != TokKind::end)
      lex_.fail("unexpected trailing input '" + lex_.peek().text + "'", lex_.peek().pos);
    return f;
  }

 private:
  static constexpr int kMaxDepth = 256;

  void check_depth(int depth) {
    if (depth > kMaxDepth) throw InputError("formula nests deeper than " + std::to_string(kMaxDepth));
  }

  static bool is_keyword(const std::string& s) {
    return s == "exists" || s == "forall" || s == "true" || s == "false";
  }

  Formula parse_iff(int depth) {
    check_depth(depth);
    Formula f = parse_imp(depth + 1);
    while (lex_.peek().kind == TokKind::darrow) {
      lex_.take();
      f = f_iff(std::move(f), parse_imp(depth + 1));
    }
    return f;
  }

  Formula parse_imp(int depth) {
    check_depth(depth);
    Formula f = parse_or(depth + 1);
    if (lex_.peek().kind == TokKind::arrow) {
      lex_.take();
      return f_implies(std::move(f), parse_imp(depth + 1));
    }
    return f;
  }

  Formula parse_or(int depth) {
    check_depth(depth);
    Formula f = parse_and(depth + 1);
    while (lex_.peek().kind == TokKind::pipe) {
      lex_.take();
      f = f_or(std::move(f), parse_and(depth + 1));
    }
    return f;
  }

  Formula parse_and(int depth) {
    check_depth(depth);
    Formula f = parse_un(depth + 1);
    while (lex_.peek().kind == TokKind::amp) {
      lex_.take();
      f = f_and(std::move(f), parse_un(depth + 1));
    }
    return f;
  }

  Formula parse_un(int depth) {
    check_depth(depth);
    const Token& t = lex_.peek();
    if (t.kind == TokKind::tilde) {
      lex_.take();
      return f_not(parse_un(depth + 1));
    }
    if (t.kind == TokKind::ident && (t.text == "exists" || t.text == "forall")) {
      const bool existential = t.text == "exists";
      lex_.take();
      Token var = expect(TokKind::ident, "quantified variable");
      if (is_keyword(var.text)) lex_.fail("keyword '" + var.text + "' cannot be a variable", var.pos);
      expect(TokKind::dot, "'.' after quantified variable");
      Formula body = parse_un(depth + 1);
      return existential ? f_exists(var.text, std::move(body)) : f_forall(var.text, std::move(body));
    }
    return parse_atom(depth + 1);
  }

  Formula parse_atom(int depth) {
    check_depth(depth);
    Token t = lex_.take();
    if (t.kind == TokKind::lparen) {
      Formula inner = parse_iff(depth + 1);
      expect(TokKind::rparen, "')'");
      return inner;
    }
    if (t.kind != TokKind::ident)
      lex_.fail("expected an atom, got '" + (t.kind == TokKind::end ? "end of input" : t.text) + "'", t.pos);
    if (t.text == "true") return f_true();
    if (t.text == "false") return f_false();
    if (t.text == "exists" || t.text == "forall")
      lex_.fail("quantifier '" + t.text + "' is not valid here", t.pos);
    if (lex_.peek().kind == TokKind::lparen) {
      lex_.take();
      std::vector<std::string> args;
      for (;;) {
        Token arg = expect(TokKind::ident, "variable");
        if (is_keyword(arg.text)) lex_.fail("keyword '" + arg.text + "' cannot be a variable", arg.pos);
        args.push_back(arg.text);
        if (lex_.peek().kind == TokKind::comma) { lex_.take(); continue; }
        break;
      }
      expect(TokKind::rparen, "')'");
      return f_atom(t.text, std::move(args));
    }
    if (lex_.peek().kind == TokKind::eq) {
      lex_.take();
      Token rhs = expect(TokKind::ident, "variable");
      if (is_keyword(rhs.text)) lex_.fail("keyword '" + rhs.text + "' cannot be a variable", rhs.pos);
      return f_eq(t.text, rhs.text);
    }
    lex_.fail("expected '(' or '=' after '" + t.text + "'", lex_.peek().pos);
  }

  Token expect(TokKind kind, const std::string& what) {
    Token t = lex_.take();
    if (t.kind != kind)
      lex_.fail("expected " + what + ", got '" + (t.kind == TokKind::end ? "end of input" : t.text) + "'",
                t.pos);
    return t;
  }

  FormulaLexer lex_;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  return detail::FormulaParser(text).parse();
}

// ── printer ─────────────────────────────────────────────────────────────────

namespace detail {

// Precedence levels, low to high: <-> (0), -> (1), | (2), & (3), un (4), atom (5).
inline int formula_precedence(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::equivalence: return 0;
    case FormulaKind::implication: return 1;
    case FormulaKind::disjunction: return 2;
    case FormulaKind::conjunction: return 3;
    case FormulaKind::negation:
    case FormulaKind::exists:
    case FormulaKind::forall: return 4;
    default: return 5;
  }
}

inline void print_rec(const Formula& f, int min_prec, std::string& out) {
  const int prec = formula_precedence(f);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f->kind) {
    case FormulaKind::constant:
      out += f->value ? "true" : "false";
      break;
    case FormulaKind::atom:
      out += f->name;
      out += '(';
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) out += ", ";
        out += f->args[i];
      }
      out += ')';
      break;
    case FormulaKind::equality:
      out += f->lhs_var;
      out += " = ";
      out += f->rhs_var;
      break;
    case FormulaKind::negation:
      out += '~';
      print_rec(f->child, 4, out);
      break;
    case FormulaKind::exists:
    case FormulaKind::forall:
      out += f->kind == FormulaKind::exists ? "exists " : "forall ";
      out += f->name;
      out += " . ";
      print_rec(f->child, 4, out);
      break;
    case FormulaKind::conjunction:
      print_rec(f->child, 3, out);
      out += " & ";
      print_rec(f->rhs, 4, out);
      break;
    case FormulaKind::disjunction:
      print_rec(f->child, 2, out);
      out += " | ";
      print_rec(f->rhs, 3, out);
      break;
    case FormulaKind::implication:
      print_rec(f->child, 2, out);  // lhs must not itself be a bare '->'
      out += " -> ";
      print_rec(f->rhs, 1, out);
      break;
    case FormulaKind::equivalence:
      print_rec(f->child, 0, out);
      out += " <-> ";
      print_rec(f->rhs, 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

// Minimal parentheses; parse_formula(print_formula(f)) is structurally f.
inline std::string print_formula(const Formula& f) {
  if (!f) throw InputError("null formula");
  std::string out;
  detail::print_rec(f, 0, out);
  return out;
}

// ── evaluation ──────────────────────────────────────────────────────────────

namespace detail {

// Position of `var` in the scope; inner (later) bindings shadow outer ones.
inline int scope_position(const std::vector<std::string>& scope, const std::string& var) {
  for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i)
    if (scope[static_cast<std::size_t>(i)] == var) return i;
  return -1;
}

inline Relation eval_rec(const FiniteStructure& s, const Formula& f,
                         std::vector<std::string>& scope) {
  const int m = s.universe;
  const int k = static_cast<int>(scope.size());
  switch (f->kind) {
    case FormulaKind::constant:
      return f->value ? Relation::full(m, k) : Relation::empty(m, k);
    case FormulaKind::atom: {
      const Relation& rel = s.relation(f->name);
      if (rel.arity() != static_cast<int>(f->args.size()))
        throw InputError("atom '" + f->name + "' has " + std::to_string(f->args.size()) +
                         " arguments but the relation has arity " + std::to_string(rel.arity()));
      std::vector<int> positions;
      positions.reserve(f->args.size());
      for (const auto& a : f->args) {
        int pos = scope_position(scope, a);
        if (pos < 0) throw InputError("variable '" + a + "' is not in scope");
        positions.push_back(pos);
      }
      Relation out(m, k);
      const std::size_t total = out.domain_size();
      Tuple t(static_cast<std::size_t>(k));
      Tuple sel(f->args.size());
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int pos = k - 1; pos >= 0; --pos) {
          t[static_cast<std::size_t>(pos)] = static_cast<int>(rest % static_cast<std::size_t>(m));
          rest /= static_cast<std::size_t>(m);
        }
        for (std::size_t i = 0; i < positions.size(); ++i)
          sel[i] = t[static_cast<std::size_t>(positions[i])];
        if (rel.test(sel)) out.set(idx);
      }
      return out;
    }
    case FormulaKind::equality: {
      int lp = scope_position(scope, f->lhs_var);
      int rp = scope_position(scope, f->rhs_var);
      if (lp < 0) throw InputError("variable '" + f->lhs_var + "' is not in scope");
      if (rp < 0) throw InputError("variable '" + f->rhs_var + "' is not in scope");
      Relation out(m, k);
      const std::size_t total = out.domain_size();
      Tuple t(static_cast<std::size_t>(k));
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int pos = k - 1; pos >= 0; --pos) {
          t[static_cast<std::size_t>(pos)] = static_cast<int>(rest % static_cast<std::size_t>(m));
          rest /= static_cast<std::size_t>(m);
        }
        if (t[static_cast<std::size_t>(lp)] == t[static_cast<std::size_t>(rp)]) out.set(idx);
      }
      return out;
    }
    case FormulaKind::negation:
      return eval_rec(s, f->child, scope).complement();
    case FormulaKind::conjunction:
      return eval_rec(s, f->child, scope) & eval_rec(s, f->rhs, scope);
    case FormulaKind::disjunction:
      return eval_rec(s, f->child, scope) | eval_rec(s, f->rhs, scope);
    case FormulaKind::implication:
      return eval_rec(s, f->child, scope).complement() | eval_rec(s, f->rhs, scope);
    case FormulaKind::equivalence:
      return (eval_rec(s, f->child, scope) ^ eval_rec(s, f->rhs, scope)).complement();
    case FormulaKind::exists:
    case FormulaKind::forall: {
      scope.push_back(f->name);
      Relation inner = eval_rec(s, f->child, scope);
      scope.pop_back();
      // The bound variable is the last (least significant) coordinate: the
      // inner table is m consecutive values per outer assignment.
      Relation out(m, k);
      const std::size_t total = out.domain_size();
      const bool existential = f->kind == FormulaKind::exists;
      for (std::size_t idx = 0; idx < total; ++idx) {
        bool acc = !existential;
        for (int d = 0; d < m; ++d) {
          const bool bit = inner.test(idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(d));
          acc = existential ? (acc || bit) : (acc && bit);
        }
        if (acc) out.set(idx);
      }
      return out;
    }
  }
  throw std::logic_error("unhandled formula kind");
}

}  // namespace detail

// Truth table of `f` over the ordered free-variable context `ctx`:
// the result's i-th coordinate is the value of ctx[i]. Every free variable
// of `f` must appear in ctx; ctx entries must be distinct (extras allowed).
inline Relation evaluate(const FiniteStructure& s, const Formula& f,
                         const std::vector<std::string>& ctx) {
  if (!f) throw InputError("null formula");
  s.validate();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (!is_identifier(ctx[i])) throw InputError("context variable must be an identifier: '" + ctx[i] + "'");
    for (std::size_t j = i + 1; j < ctx.size(); ++j)
      if (ctx[i] == ctx[j]) throw InputError("context variables must be distinct: '" + ctx[i] + "'");
  }
  for (const std::string& v : free_vars(f))
    if (!detail::name_in(ctx, v))
      throw InputError("free variable '" + v + "' missing from the evaluation context");
  std::vector<std::string> scope = ctx;
  return detail::eval_rec(s, f, scope);
}

inline Relation evaluate(const FiniteStructure& s, std::string_view text,
                         const std::vector<std::string>& ctx) {
  return evaluate(s, parse_formula(text), ctx);
}

// Truth value of a sentence (no free variables allowed).
inline bool check_sentence(const FiniteStructure& s, const Formula& f) {
  std::vector<std::string> fv = free_vars(f);
  if (!fv.empty())
    throw InputError("not a sentence: free variable '" + fv.front() + "'");
  return evaluate(s, f, {}).test(std::size_t{0});
}

inline bool check_sentence(const FiniteStructure& s, std::string_view text) {
  return check_sentence(s, parse_formula(text));
}

}  // namespace aritylab
