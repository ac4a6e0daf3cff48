#pragma once

// Integrity constraints of three structural families, each with a direct
// checker and a translation into a first-order sentence.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dbagg/core.hpp"
#include "dbagg/folang.hpp"

namespace dbagg {

/// key positions -> dependent positions on one symbol (1-based, disjoint).
struct FunctionalDependency {
  std::string symbol;
  std::vector<std::size_t> key_positions;
  std::vector<std::size_t> dependent_positions;

  bool is_key_dependency() const { return key_positions.size() == 1; }
  friend bool operator==(const FunctionalDependency&, const FunctionalDependency&) = default;
};

/// Every `symbol` tuple has its `position`-th value listed in the unary
/// relation `value_relation`.
struct ValueConstraint {
  std::string symbol;
  std::size_t position = 1;
  std::string value_relation;

  friend bool operator==(const ValueConstraint&, const ValueConstraint&) = default;
};

/// The last `width` values of every `source` tuple appear as the first
/// `width` values of some `target` tuple.
struct ReferentialConstraint {
  std::string source;
  std::string target;
  std::size_t width = 1;

  friend bool operator==(const ReferentialConstraint&, const ReferentialConstraint&) = default;
};

using Constraint = std::variant<FunctionalDependency, ValueConstraint, ReferentialConstraint>;

/// Throws ValidationError if the constraint does not fit the schema.
void validate(const Constraint& c, const Schema& schema);

bool check_fd(const Instance& d, const FunctionalDependency& c);
bool check_value(const Instance& d, const ValueConstraint& c);
bool check_ref(const Instance& d, const ReferentialConstraint& c);
bool check(const Instance& d, const Constraint& c);

/// First-order sentence equivalent to the constraint. Needs the schema for
/// arities. Variables are x1..xq (and y1..yq for the second tuple).
Formula to_formula(const Constraint& c, const Schema& schema);

/// One constraint per line:
///   fd P: 1 -> 2 3
///   value P[2] in Pv
///   ref P1 -> P2 on 1
/// Blank lines and `#` comments are ignored.
Constraint parse_constraint(std::string_view line);
std::vector<Constraint> parse_constraints(std::string_view text);
std::string to_string(const Constraint& c);

}  // namespace dbagg
