#pragma once

// First-order language over a relational schema with equality and constants,
// interpreted under active-domain semantics.
//
// The stored AST uses only Eq, Atom, Not, Implies and Forall. Conjunction,
// disjunction, existential quantification and inequality are built through
// their classical encodings and recovered by `resugar` for printing and
// fragment classification.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dbagg/core.hpp"

namespace dbagg {

class Term {
 public:
  enum class Kind { Variable, Constant };

  static Term var(std::string name);
  static Term constant(Value value);
  static Term constant(std::string token) { return constant(Value::constant(std::move(token))); }

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  const std::string& name() const { return name_; }
  const Value& value() const { return value_; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (auto c = a.name_.compare(b.name_) <=> 0; c != 0) return c;
    return a.value_ <=> b.value_;
  }

 private:
  Kind kind_ = Kind::Variable;
  std::string name_;
  Value value_;
};

class Formula {
 public:
  enum class Kind { Eq, Atom, Not, Implies, Forall };

  Kind kind() const;

  // Eq
  const Term& lhs() const;
  const Term& rhs() const;
  // Atom
  const std::string& symbol() const;
  const std::vector<Term>& args() const;
  // Not
  const Formula& child() const;
  // Implies
  const Formula& left() const;
  const Formula& right() const;
  // Forall
  const std::string& variable() const;
  const Formula& body() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend Formula make_formula(Node node);
  std::shared_ptr<const Node> node_;
};

// Primitive constructors.
Formula eq(Term a, Term b);
Formula atom(std::string symbol, std::vector<Term> args);
Formula negation(Formula f);
Formula implies(Formula a, Formula b);
Formula forall(std::string variable, Formula body);
Formula forall(const std::vector<std::string>& variables, Formula body);

// Derived forms, expanded into primitives.
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
/// Left-nested conjunction; requires a non-empty list.
Formula conj(const std::vector<Formula>& parts);
Formula disj(const std::vector<Formula>& parts);
Formula exists(std::string variable, Formula body);
Formula exists(const std::vector<std::string>& variables, Formula body);
Formula neq(Term a, Term b);

/// Surface view of a formula with the derived connectives restored.
struct Sugar {
  enum class Kind { Eq, Neq, Atom, Not, And, Or, Implies, Forall, Exists };
  Kind kind;
  Term lhs, rhs;                      // Eq, Neq
  std::string symbol;                 // Atom
  std::vector<Term> args;             // Atom
  std::string variable;               // Forall, Exists
  std::vector<std::shared_ptr<const Sugar>> children;  // 1 or 2
};
std::shared_ptr<const Sugar> resugar(const Formula& f);

std::set<std::string> free_variables(const Formula& f);
/// Every variable name occurring in the formula, bound or free.
std::set<std::string> variables(const Formula& f);
std::set<Value> constants(const Formula& f);
std::set<std::string> relation_symbols(const Formula& f);
std::size_t depth(const Formula& f);

/// Renames bound variables that shadow an enclosing binder or clash with a
/// free variable. New names have the form `x_1`, `x_2`, ...
Formula rename_apart(const Formula& f);

/// Throws ValidationError on unknown symbols or arity mismatches.
void validate(const Formula& f, const Schema& schema);

std::string to_string(const Term& t);
/// Concrete syntax accepted by parse_formula; constants are always quoted.
std::string to_string(const Formula& f);

struct ParseOptions {
  std::optional<Schema> schema;
  /// Bare identifiers that denote constants rather than variables.
  std::set<std::string> consts;
};

/// Grammar:
///   formula  := unary_or_binary, precedence not > and > or > -> (right assoc)
///   quantifier := (forall|exists) x[, y...] . formula   (extends maximally right)
///   primary  := P(t, ...) | t = t | t != t | ( formula )
///   term     := variable | "quoted" | 'quoted' | number | declared const | null
/// An optional header `consts a, b;` declares bare constants.
Formula parse_formula(std::string_view text, const ParseOptions& options = {});
Formula parse_formula(std::string_view text, const Schema& schema);

struct Query {
  std::vector<std::string> head;
  Formula body;
};

/// Validates that `head` lists the free variables of `body` exactly once each.
Query make_query(std::vector<std::string> head, Formula body);
/// `ans(x1, ..., xl) :- formula`
Query parse_query(std::string_view text, const ParseOptions& options = {});
Query parse_query(std::string_view text, const Schema& schema);
std::string to_string(const Query& q);

struct AnswerSet {
  std::size_t width = 0;
  Relation tuples;

  friend bool operator==(const AnswerSet&, const AnswerSet&) = default;
  friend auto operator<=>(const AnswerSet& a, const AnswerSet& b) {
    if (auto c = a.width <=> b.width; c != 0) return c;
    return a.tuples <=> b.tuples;
  }
};
std::string to_string(const AnswerSet& a);

using Assignment = std::map<std::string, Value, std::less<>>;

/// (d, sigma) |= phi. Quantifiers range over adom(d). Throws ValidationError
/// when a free variable of phi is unassigned.
bool satisfies(const Instance& d, const Assignment& sigma, const Formula& phi);

/// Tuples over adom(d)^l, ordered by q.head, that satisfy the body.
AnswerSet answer(const Instance& d, const Query& q);
/// Same, with head variables ranging over `range` instead of adom(d).
/// Quantifiers inside the body still range over adom(d).
AnswerSet answer(const Instance& d, const Query& q, const std::set<Value>& range);

/// Truth in d: satisfied under every assignment of the free variables into
/// adom(d), the formula's constants, and one value outside both.
bool is_true(const Instance& d, const Formula& phi);

struct FragmentFlags {
  bool pos_existential = false;
  bool pos_universal = false;
  bool conjunctive_query = false;
  bool lit_pos = false;
  bool lit_neg = false;
  bool sentence = false;

  friend bool operator==(const FragmentFlags&, const FragmentFlags&) = default;
};
FragmentFlags classify(const Formula& phi);
std::string to_string(const FragmentFlags& flags);

}  // namespace dbagg
