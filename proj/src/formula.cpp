#include <algorithm>
#include <cctype>
#include <functional>

#include "dbagg/folang.hpp"

namespace dbagg {

struct Formula::Node {
  Kind kind = Kind::Eq;
  Term a, b;                  // Eq
  std::string name;           // Atom symbol or Forall variable
  std::vector<Term> args;     // Atom
  std::vector<Formula> kids;  // Not: 1, Implies: 2, Forall: 1
};

Formula make_formula(Formula::Node node) {
  return Formula(std::make_shared<const Formula::Node>(std::move(node)));
}

Term Term::var(std::string name) {
  Term t;
  t.kind_ = Kind::Variable;
  t.name_ = std::move(name);
  return t;
}

Term Term::constant(Value value) {
  Term t;
  t.kind_ = Kind::Constant;
  t.value_ = std::move(value);
  return t;
}

Formula::Kind Formula::kind() const { return node_->kind; }

namespace {
void expect(const Formula::Node& n, Formula::Kind k, const char* what) {
  if (n.kind != k) throw Error(std::string("formula accessor ") + what + " used on wrong node kind");
}
}  // namespace

const Term& Formula::lhs() const { expect(*node_, Kind::Eq, "lhs"); return node_->a; }
const Term& Formula::rhs() const { expect(*node_, Kind::Eq, "rhs"); return node_->b; }
const std::string& Formula::symbol() const { expect(*node_, Kind::Atom, "symbol"); return node_->name; }
const std::vector<Term>& Formula::args() const { expect(*node_, Kind::Atom, "args"); return node_->args; }
const Formula& Formula::child() const { expect(*node_, Kind::Not, "child"); return node_->kids[0]; }
const Formula& Formula::left() const { expect(*node_, Kind::Implies, "left"); return node_->kids[0]; }
const Formula& Formula::right() const { expect(*node_, Kind::Implies, "right"); return node_->kids[1]; }
const std::string& Formula::variable() const { expect(*node_, Kind::Forall, "variable"); return node_->name; }
const Formula& Formula::body() const { expect(*node_, Kind::Forall, "body"); return node_->kids[0]; }

std::strong_ordering operator<=>(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return std::strong_ordering::equal;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  switch (a.kind) {
    case Formula::Kind::Eq:
      if (auto c = a.a <=> b.a; c != 0) return c;
      return a.b <=> b.b;
    case Formula::Kind::Atom:
      if (auto c = a.name.compare(b.name) <=> 0; c != 0) return c;
      return a.args <=> b.args;
    case Formula::Kind::Forall:
      if (auto c = a.name.compare(b.name) <=> 0; c != 0) return c;
      return a.kids[0] <=> b.kids[0];
    case Formula::Kind::Not:
    case Formula::Kind::Implies:
      return a.kids <=> b.kids;
  }
  return std::strong_ordering::equal;
}

bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }

// ---------------------------------------------------------- constructors

Formula eq(Term a, Term b) {
  Formula::Node n;
  n.kind = Formula::Kind::Eq;
  n.a = std::move(a);
  n.b = std::move(b);
  return make_formula(std::move(n));
}

Formula atom(std::string symbol, std::vector<Term> args) {
  Formula::Node n;
  n.kind = Formula::Kind::Atom;
  n.name = std::move(symbol);
  n.args = std::move(args);
  return make_formula(std::move(n));
}

Formula negation(Formula f) {
  Formula::Node n;
  n.kind = Formula::Kind::Not;
  n.kids.push_back(std::move(f));
  return make_formula(std::move(n));
}

Formula implies(Formula a, Formula b) {
  Formula::Node n;
  n.kind = Formula::Kind::Implies;
  n.kids.push_back(std::move(a));
  n.kids.push_back(std::move(b));
  return make_formula(std::move(n));
}

Formula forall(std::string variable, Formula body) {
  Formula::Node n;
  n.kind = Formula::Kind::Forall;
  n.name = std::move(variable);
  n.kids.push_back(std::move(body));
  return make_formula(std::move(n));
}

Formula forall(const std::vector<std::string>& variables, Formula body) {
  for (auto it = variables.rbegin(); it != variables.rend(); ++it) body = forall(*it, body);
  return body;
}

Formula conj(Formula a, Formula b) { return negation(implies(std::move(a), negation(std::move(b)))); }
Formula disj(Formula a, Formula b) { return implies(negation(std::move(a)), std::move(b)); }

Formula conj(const std::vector<Formula>& parts) {
  if (parts.empty()) throw Error("empty conjunction");
  Formula out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = conj(out, parts[i]);
  return out;
}

Formula disj(const std::vector<Formula>& parts) {
  if (parts.empty()) throw Error("empty disjunction");
  Formula out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = disj(out, parts[i]);
  return out;
}

Formula exists(std::string variable, Formula body) {
  return negation(forall(std::move(variable), negation(std::move(body))));
}

Formula exists(const std::vector<std::string>& variables, Formula body) {
  for (auto it = variables.rbegin(); it != variables.rend(); ++it) body = exists(*it, body);
  return body;
}

Formula neq(Term a, Term b) { return negation(eq(std::move(a), std::move(b))); }

// ---------------------------------------------------------------- resugar

namespace {

bool encodes_and_or_exists(const Formula& negated) {
  const Formula& c = negated.child();
  using K = Formula::Kind;
  return (c.kind() == K::Implies && c.right().kind() == K::Not) || (c.kind() == K::Forall && c.body().kind() == K::Not);
}

}  // namespace

std::shared_ptr<const Sugar> resugar(const Formula& f) {
  auto s = std::make_shared<Sugar>();
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
      s->kind = Sugar::Kind::Eq;
      s->lhs = f.lhs();
      s->rhs = f.rhs();
      break;
    case K::Atom:
      s->kind = Sugar::Kind::Atom;
      s->symbol = f.symbol();
      s->args = f.args();
      break;
    case K::Not: {
      const Formula& c = f.child();
      if (c.kind() == K::Implies && c.right().kind() == K::Not) {
        s->kind = Sugar::Kind::And;
        s->children = {resugar(c.left()), resugar(c.right().child())};
      } else if (c.kind() == K::Forall && c.body().kind() == K::Not) {
        s->kind = Sugar::Kind::Exists;
        s->variable = c.variable();
        s->children = {resugar(c.body().child())};
      } else if (c.kind() == K::Eq) {
        s->kind = Sugar::Kind::Neq;
        s->lhs = c.lhs();
        s->rhs = c.rhs();
      } else {
        s->kind = Sugar::Kind::Not;
        s->children = {resugar(c)};
      }
      break;
    }
    case K::Implies:
      // A negated left side reads as a disjunction, unless the negation is
      // itself the encoding of a conjunction or an existential: then
      // "a and b -> c" is the reading a writer of the formula meant.
      if (f.left().kind() == K::Not && !encodes_and_or_exists(f.left())) {
        s->kind = Sugar::Kind::Or;
        s->children = {resugar(f.left().child()), resugar(f.right())};
      } else {
        s->kind = Sugar::Kind::Implies;
        s->children = {resugar(f.left()), resugar(f.right())};
      }
      break;
    case K::Forall:
      s->kind = Sugar::Kind::Forall;
      s->variable = f.variable();
      s->children = {resugar(f.body())};
      break;
  }
  return s;
}

// -------------------------------------------------------------- traversal

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto term = [&](const Term& t) {
    if (t.is_variable() && !bound.count(t.name())) out.insert(t.name());
  };
  switch (f.kind()) {
    case Formula::Kind::Eq:
      term(f.lhs());
      term(f.rhs());
      break;
    case Formula::Kind::Atom:
      for (const auto& t : f.args()) term(t);
      break;
    case Formula::Kind::Not:
      collect_free(f.child(), bound, out);
      break;
    case Formula::Kind::Implies:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      break;
    case Formula::Kind::Forall: {
      bool fresh = bound.insert(f.variable()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.variable());
      break;
    }
  }
}

template <class Fn>
void visit(const Formula& f, const Fn& fn) {
  fn(f);
  switch (f.kind()) {
    case Formula::Kind::Not:
      visit(f.child(), fn);
      break;
    case Formula::Kind::Implies:
      visit(f.left(), fn);
      visit(f.right(), fn);
      break;
    case Formula::Kind::Forall:
      visit(f.body(), fn);
      break;
    default:
      break;
  }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    auto term = [&](const Term& t) {
      if (t.is_variable()) out.insert(t.name());
    };
    if (g.kind() == Formula::Kind::Eq) {
      term(g.lhs());
      term(g.rhs());
    } else if (g.kind() == Formula::Kind::Atom) {
      for (const auto& t : g.args()) term(t);
    } else if (g.kind() == Formula::Kind::Forall) {
      out.insert(g.variable());
    }
  });
  return out;
}

std::set<Value> constants(const Formula& f) {
  std::set<Value> out;
  visit(f, [&](const Formula& g) {
    auto term = [&](const Term& t) {
      if (!t.is_variable()) out.insert(t.value());
    };
    if (g.kind() == Formula::Kind::Eq) {
      term(g.lhs());
      term(g.rhs());
    } else if (g.kind() == Formula::Kind::Atom) {
      for (const auto& t : g.args()) term(t);
    }
  });
  return out;
}

std::set<std::string> relation_symbols(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Atom) out.insert(g.symbol());
  });
  return out;
}

std::size_t depth(const Formula& f) {
  std::function<std::size_t(const Sugar&)> rec = [&](const Sugar& s) -> std::size_t {
    std::size_t d = 0;
    for (const auto& c : s.children) d = std::max(d, rec(*c));
    return d + 1;
  };
  return rec(*resugar(f));
}

void validate(const Formula& f, const Schema& schema) {
  visit(f, [&](const Formula& g) {
    if (g.kind() != Formula::Kind::Atom) return;
    const std::size_t arity = schema.arity(g.symbol());
    if (g.args().size() != arity) {
      throw ValidationError("atom " + g.symbol() + " has " + std::to_string(g.args().size()) +
                            " arguments but the symbol has arity " + std::to_string(arity));
    }
  });
}

// ----------------------------------------------------------- alpha renaming

namespace {

Term rename_term(const Term& t, const std::string& from, const std::string& to) {
  return t.is_variable() && t.name() == from ? Term::var(to) : t;
}

/// Replaces free occurrences of `from` by `to`.
Formula substitute(const Formula& f, const std::string& from, const std::string& to) {
  switch (f.kind()) {
    case Formula::Kind::Eq:
      return eq(rename_term(f.lhs(), from, to), rename_term(f.rhs(), from, to));
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      for (const auto& t : f.args()) args.push_back(rename_term(t, from, to));
      return atom(f.symbol(), std::move(args));
    }
    case Formula::Kind::Not:
      return negation(substitute(f.child(), from, to));
    case Formula::Kind::Implies:
      return implies(substitute(f.left(), from, to), substitute(f.right(), from, to));
    case Formula::Kind::Forall:
      if (f.variable() == from) return f;
      return forall(f.variable(), substitute(f.body(), from, to));
  }
  return f;
}

std::string base_name(const std::string& name) {
  auto pos = name.rfind('_');
  if (pos == std::string::npos || pos + 1 == name.size()) return name;
  for (std::size_t i = pos + 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return name;
  }
  return name.substr(0, pos);
}

struct Renamer {
  std::set<std::string> free;
  std::set<std::string> used;

  std::string fresh(const std::string& name) {
    const std::string base = base_name(name);
    for (std::size_t k = 1;; ++k) {
      std::string candidate = base + "_" + std::to_string(k);
      if (used.insert(candidate).second) return candidate;
    }
  }

  Formula run(const Formula& f, std::set<std::string>& bound) {
    switch (f.kind()) {
      case Formula::Kind::Eq:
      case Formula::Kind::Atom:
        return f;
      case Formula::Kind::Not:
        return negation(run(f.child(), bound));
      case Formula::Kind::Implies:
        return implies(run(f.left(), bound), run(f.right(), bound));
      case Formula::Kind::Forall: {
        std::string v = f.variable();
        Formula body = f.body();
        if (bound.count(v) || free.count(v)) {
          std::string nv = fresh(v);
          body = substitute(body, v, nv);
          v = nv;
        }
        bound.insert(v);
        Formula out = forall(v, run(body, bound));
        bound.erase(v);
        return out;
      }
    }
    return f;
  }
};

}  // namespace

Formula rename_apart(const Formula& f) {
  Renamer r{free_variables(f), variables(f)};
  std::set<std::string> bound;
  return r.run(f, bound);
}

// ---------------------------------------------------------------- printing

namespace {

std::string quote(const std::string& token) {
  std::string out = "\"";
  for (char c : token) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

enum Prec { kImplies = 1, kOr = 2, kAnd = 3, kUnary = 4 };

struct Printer {
  std::string out;

  void term(const Term& t) {
    if (t.is_variable()) {
      out += t.name();
    } else if (t.value().is_null()) {
      out += "null";
    } else {
      out += quote(t.value().token());
    }
  }

  static bool is_binary(Sugar::Kind k) {
    return k == Sugar::Kind::And || k == Sugar::Kind::Or || k == Sugar::Kind::Implies;
  }
  static bool is_quantifier(Sugar::Kind k) {
    return k == Sugar::Kind::Forall || k == Sugar::Kind::Exists;
  }

  // `min_prec` is the binding strength the context demands; `tail` is true
  // when nothing follows this subformula inside the enclosing group, so an
  // unparenthesized quantifier cannot swallow anything extra.
  void print(const Sugar& s, int min_prec, bool tail) {
    switch (s.kind) {
      case Sugar::Kind::Eq:
      case Sugar::Kind::Neq:
        term(s.lhs);
        out += s.kind == Sugar::Kind::Eq ? " = " : " != ";
        term(s.rhs);
        return;
      case Sugar::Kind::Atom:
        out += s.symbol + "(";
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          if (i) out += ", ";
          term(s.args[i]);
        }
        out += ")";
        return;
      case Sugar::Kind::Not:
        out += "not ";
        print(*s.children[0], kUnary, tail);
        return;
      case Sugar::Kind::And:
      case Sugar::Kind::Or:
      case Sugar::Kind::Implies: {
        const int prec = s.kind == Sugar::Kind::And ? kAnd : s.kind == Sugar::Kind::Or ? kOr : kImplies;
        const bool parens = prec < min_prec;
        if (parens) out += "(";
        const bool inner_tail = parens || tail;
        // and/or are left-associative, -> is right-associative.
        const int left_prec = s.kind == Sugar::Kind::Implies ? prec + 1 : prec;
        const int right_prec = s.kind == Sugar::Kind::Implies ? prec : prec + 1;
        print(*s.children[0], left_prec, false);
        out += s.kind == Sugar::Kind::And ? " and " : s.kind == Sugar::Kind::Or ? " or " : " -> ";
        print(*s.children[1], right_prec, inner_tail);
        if (parens) out += ")";
        return;
      }
      case Sugar::Kind::Forall:
      case Sugar::Kind::Exists: {
        const bool parens = !tail;
        if (parens) out += "(";
        out += s.kind == Sugar::Kind::Forall ? "forall " : "exists ";
        const Sugar* cur = &s;
        out += cur->variable;
        while (cur->children[0]->kind == s.kind) {
          cur = cur->children[0].get();
          out += ", " + cur->variable;
        }
        out += ". ";
        const Sugar& body = *cur->children[0];
        if (is_binary(body.kind)) {
          out += "(";
          print(body, 0, true);
          out += ")";
        } else {
          print(body, 0, true);
        }
        if (parens) out += ")";
        return;
      }
    }
  }
};

}  // namespace

std::string to_string(const Term& t) {
  Printer p;
  p.term(t);
  return p.out;
}

std::string to_string(const Formula& f) {
  Printer p;
  p.print(*resugar(f), 0, true);
  return p.out;
}

std::string to_string(const Query& q) {
  std::string out = "ans(";
  for (std::size_t i = 0; i < q.head.size(); ++i) {
    if (i) out += ", ";
    out += q.head[i];
  }
  return out + ") :- " + to_string(q.body);
}

std::string to_string(const AnswerSet& a) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : a.tuples) {
    if (!first) out += ", ";
    first = false;
    out += to_string(t);
  }
  return out + "}";
}

Query make_query(std::vector<std::string> head, Formula body) {
  std::set<std::string> seen;
  for (const auto& v : head) {
    if (!seen.insert(v).second) throw ValidationError("query head repeats variable '" + v + "'");
  }
  if (seen != free_variables(body)) {
    std::string fv;
    for (const auto& v : free_variables(body)) fv += (fv.empty() ? "" : ", ") + v;
    throw ValidationError("query head must list exactly the free variables of the body {" + fv + "}");
  }
  return Query{std::move(head), std::move(body)};
}

// ---------------------------------------------------------- classification

namespace {

bool in_pos_existential(const Sugar& s) {
  switch (s.kind) {
    case Sugar::Kind::Eq:
    case Sugar::Kind::Atom:
      return true;
    case Sugar::Kind::Or:
    case Sugar::Kind::Exists:
      return std::all_of(s.children.begin(), s.children.end(),
                         [](const auto& c) { return in_pos_existential(*c); });
    default:
      return false;
  }
}

bool in_pos_universal(const Sugar& s) {
  switch (s.kind) {
    case Sugar::Kind::Eq:
    case Sugar::Kind::Atom:
      return true;
    case Sugar::Kind::And:
    case Sugar::Kind::Forall:
      return std::all_of(s.children.begin(), s.children.end(),
                         [](const auto& c) { return in_pos_universal(*c); });
    default:
      return false;
  }
}

bool is_atom_block(const Sugar& s) {
  if (s.kind == Sugar::Kind::Atom) return true;
  if (s.kind != Sugar::Kind::And) return false;
  return is_atom_block(*s.children[0]) && is_atom_block(*s.children[1]);
}

bool in_cq(const Sugar& s) {
  if (is_atom_block(s)) return true;
  if (s.kind == Sugar::Kind::Or || s.kind == Sugar::Kind::Exists) {
    return std::all_of(s.children.begin(), s.children.end(),
                       [](const auto& c) { return in_cq(*c); });
  }
  return false;
}

bool ground_atom(const Sugar& s) {
  return s.kind == Sugar::Kind::Atom &&
         std::none_of(s.args.begin(), s.args.end(), [](const Term& t) { return t.is_variable(); });
}

}  // namespace

FragmentFlags classify(const Formula& phi) {
  auto s = resugar(phi);
  FragmentFlags f;
  f.pos_existential = in_pos_existential(*s);
  f.pos_universal = in_pos_universal(*s);
  f.conjunctive_query = in_cq(*s);
  f.lit_pos = ground_atom(*s);
  f.lit_neg = s->kind == Sugar::Kind::Not && ground_atom(*s->children[0]);
  f.sentence = free_variables(phi).empty();
  return f;
}

std::string to_string(const FragmentFlags& flags) {
  std::vector<std::string> names;
  if (flags.pos_existential) names.push_back("exists-positive");
  if (flags.pos_universal) names.push_back("forall-positive");
  if (flags.conjunctive_query) names.push_back("cq");
  if (flags.lit_pos) names.push_back("lit+");
  if (flags.lit_neg) names.push_back("lit-");
  if (flags.sentence) names.push_back("sentence");
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : " ") + n;
  return out.empty() ? "fo" : out;
}

}  // namespace dbagg
