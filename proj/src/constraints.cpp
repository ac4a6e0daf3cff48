#include "dbagg/constraints.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

namespace dbagg {

namespace {

void check_position(std::size_t pos, std::size_t arity, const std::string& symbol) {
  if (pos == 0 || pos > arity) {
    throw ValidationError("position " + std::to_string(pos) + " is outside 1.." +
                          std::to_string(arity) + " for " + symbol);
  }
}

std::vector<std::string> names(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<Term> vars(const std::vector<std::string>& ns) {
  std::vector<Term> out;
  for (const auto& n : ns) out.push_back(Term::var(n));
  return out;
}

}  // namespace

void validate(const Constraint& c, const Schema& schema) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FunctionalDependency>) {
          const std::size_t q = schema.arity(k.symbol);
          if (k.key_positions.empty()) throw ValidationError("functional dependency needs key positions");
          std::set<std::size_t> seen;
          for (auto p : k.key_positions) {
            check_position(p, q, k.symbol);
            if (!seen.insert(p).second) throw ValidationError("repeated position in functional dependency");
          }
          for (auto p : k.dependent_positions) {
            check_position(p, q, k.symbol);
            if (!seen.insert(p).second) {
              throw ValidationError("key and dependent positions of a functional dependency must be disjoint");
            }
          }
        } else if constexpr (std::is_same_v<T, ValueConstraint>) {
          check_position(k.position, schema.arity(k.symbol), k.symbol);
          if (schema.arity(k.value_relation) != 1) {
            throw ValidationError("value relation " + k.value_relation + " must be unary");
          }
        } else {
          const std::size_t q1 = schema.arity(k.source);
          const std::size_t q2 = schema.arity(k.target);
          if (k.width == 0 || k.width > q1 || k.width > q2) {
            throw ValidationError("referential width " + std::to_string(k.width) +
                                  " exceeds the arity of " + k.source + " or " + k.target);
          }
        }
      },
      c);
}

bool check_fd(const Instance& d, const FunctionalDependency& c) {
  validate(Constraint{c}, d.schema());
  // Group by key projection; all tuples in a group must agree on dependents.
  std::map<Tuple, Tuple> seen;
  for (const auto& t : d.relation(c.symbol)) {
    Tuple key, dep;
    for (auto p : c.key_positions) key.push_back(t[p - 1]);
    for (auto p : c.dependent_positions) dep.push_back(t[p - 1]);
    auto [it, inserted] = seen.emplace(std::move(key), dep);
    if (!inserted && it->second != dep) return false;
  }
  return true;
}

bool check_value(const Instance& d, const ValueConstraint& c) {
  validate(Constraint{c}, d.schema());
  const Relation& allowed = d.relation(c.value_relation);
  for (const auto& t : d.relation(c.symbol)) {
    if (!allowed.count(Tuple{t[c.position - 1]})) return false;
  }
  return true;
}

bool check_ref(const Instance& d, const ReferentialConstraint& c) {
  validate(Constraint{c}, d.schema());
  std::set<Tuple> prefixes;
  for (const auto& t : d.relation(c.target)) prefixes.emplace(t.begin(), t.begin() + c.width);
  for (const auto& t : d.relation(c.source)) {
    if (!prefixes.count(Tuple(t.end() - c.width, t.end()))) return false;
  }
  return true;
}

bool check(const Instance& d, const Constraint& c) {
  return std::visit(
      [&](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FunctionalDependency>) return check_fd(d, k);
        else if constexpr (std::is_same_v<T, ValueConstraint>) return check_value(d, k);
        else return check_ref(d, k);
      },
      c);
}

Formula to_formula(const Constraint& c, const Schema& schema) {
  validate(c, schema);
  return std::visit(
      [&](const auto& k) -> Formula {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, FunctionalDependency>) {
          const std::size_t q = schema.arity(k.symbol);
          auto xs = names("x", q);
          auto ys = names("y", q);
          std::vector<Formula> premise = {atom(k.symbol, vars(xs)), atom(k.symbol, vars(ys))};
          for (auto p : k.key_positions) premise.push_back(eq(Term::var(xs[p - 1]), Term::var(ys[p - 1])));
          std::vector<Formula> conclusion;
          for (auto p : k.dependent_positions) {
            conclusion.push_back(eq(Term::var(xs[p - 1]), Term::var(ys[p - 1])));
          }
          // An empty dependent list is vacuous; x1 = x1 stands in for "true".
          if (conclusion.empty()) conclusion.push_back(eq(Term::var(xs[0]), Term::var(xs[0])));
          std::vector<std::string> bound = xs;
          bound.insert(bound.end(), ys.begin(), ys.end());
          return forall(bound, implies(conj(premise), conj(conclusion)));
        } else if constexpr (std::is_same_v<T, ValueConstraint>) {
          auto xs = names("x", schema.arity(k.symbol));
          return forall(xs, implies(atom(k.symbol, vars(xs)),
                                    atom(k.value_relation, {Term::var(xs[k.position - 1])})));
        } else {
          const std::size_t q1 = schema.arity(k.source);
          const std::size_t q2 = schema.arity(k.target);
          auto xs = names("x", q1);
          auto ys = names("y", q2);
          std::vector<Formula> parts = {atom(k.target, vars(ys))};
          for (std::size_t j = 1; j <= k.width; ++j) {
            parts.push_back(eq(Term::var(xs[q1 - k.width + j - 1]), Term::var(ys[j - 1])));
          }
          return forall(xs, implies(atom(k.source, vars(xs)), exists(ys, conj(parts))));
        }
      },
      c);
}

Constraint parse_constraint(std::string_view line) {
  static const std::regex fd_re(R"(^\s*fd\s+([A-Za-z_]\w*)\s*:\s*([\d\s]+?)\s*->\s*([\d\s]*?)\s*$)");
  static const std::regex value_re(R"(^\s*value\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]\s+in\s+([A-Za-z_]\w*)\s*$)");
  static const std::regex ref_re(R"(^\s*ref\s+([A-Za-z_]\w*)\s*->\s*([A-Za-z_]\w*)\s+on\s+(\d+)\s*$)");
  const std::string s(line);
  std::smatch m;
  auto positions = [](const std::string& text) {
    std::vector<std::size_t> out;
    std::istringstream in(text);
    std::size_t p;
    while (in >> p) out.push_back(p);
    return out;
  };
  if (std::regex_match(s, m, fd_re)) {
    return FunctionalDependency{m[1], positions(m[2]), positions(m[3])};
  }
  if (std::regex_match(s, m, value_re)) {
    return ValueConstraint{m[1], std::stoul(m[2]), m[3]};
  }
  if (std::regex_match(s, m, ref_re)) {
    return ReferentialConstraint{m[1], m[2], std::stoul(m[3])};
  }
  throw ParseError("unrecognized constraint '" + s + "'", 0);
}

std::vector<Constraint> parse_constraints(std::string_view text) {
  std::vector<Constraint> out;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_constraint(line));
      } catch (const ParseError& e) {
        throw ParseError("unrecognized constraint '" + std::string(line) + "'", offset);
      }
    }
    offset = end + 1;
  }
  return out;
}

std::string to_string(const Constraint& c) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, FunctionalDependency>) {
          os << "fd " << k.symbol << ":";
          for (auto p : k.key_positions) os << " " << p;
          os << " ->";
          for (auto p : k.dependent_positions) os << " " << p;
        } else if constexpr (std::is_same_v<T, ValueConstraint>) {
          os << "value " << k.symbol << "[" << k.position << "] in " << k.value_relation;
        } else {
          os << "ref " << k.source << " -> " << k.target << " on " << k.width;
        }
        return os.str();
      },
      c);
}

}  // namespace dbagg
