#pragma once

// Aggregation procedures mapping a profile of instances to a set of winning
// instances (a singleton for resolute rules).

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dbagg/constraints.hpp"
#include "dbagg/core.hpp"
#include "dbagg/folang.hpp"

namespace dbagg {

/// Per-symbol (and optionally per-tuple) acceptance thresholds in 0..n+1.
struct QuotaSpec {
  /// Used for symbols absent from `per_symbol`.
  std::optional<int> uniform;
  std::map<std::string, int, std::less<>> per_symbol;
  std::map<std::pair<std::string, Tuple>, int> exceptions;

  static QuotaSpec of(int q) { return QuotaSpec{q, {}, {}}; }
  /// Throws ValidationError when no quota is defined for the symbol.
  int default_quota(std::string_view symbol) const;
  int quota(std::string_view symbol, const Tuple& t) const;
  bool is_uniform() const;
  friend bool operator==(const QuotaSpec&, const QuotaSpec&) = default;
};

/// Extra candidate tuples for rules that may accept tuples nobody holds.
struct TupleUniverse {
  std::map<std::string, Relation, std::less<>> extras;
  const Relation& extra(std::string_view symbol) const;
};

namespace rules {
struct Union {};
struct Intersection {};
struct Majority {};
struct Quota {
  QuotaSpec spec;
};
struct TrivialZero {};
struct TrivialTop {};
struct DistanceBased {
  /// Explicit candidate list; when absent, every instance whose relations
  /// are subsets of the profile union is a candidate.
  std::optional<std::vector<Instance>> candidates;
  std::vector<Constraint> constraints;
  std::vector<Formula> formulas;
};
struct AverageVoter {};
struct RelationwiseAverageVoter {};
struct Dictatorship {
  std::size_t agent = 1;
};
struct Oligarchy {
  std::vector<std::size_t> coalition;
};
struct MergeIncomplete {};
/// Arbitrary procedure, used for fixtures. Must return at least one instance.
struct Custom {
  std::string name;
  std::function<std::vector<Instance>(const Profile&)> fn;
};
}  // namespace rules

using RuleKind = std::variant<rules::Union, rules::Intersection, rules::Majority, rules::Quota,
                              rules::TrivialZero, rules::TrivialTop, rules::DistanceBased,
                              rules::AverageVoter, rules::RelationwiseAverageVoter,
                              rules::Dictatorship, rules::Oligarchy, rules::MergeIncomplete,
                              rules::Custom>;

struct Rule {
  RuleKind kind;
  std::optional<TupleUniverse> universe;

  Rule with_universe(TupleUniverse u) const {
    Rule r = *this;
    r.universe = std::move(u);
    return r;
  }
};

Rule union_rule();
Rule intersection_rule();
Rule majority_rule();
Rule quota_rule(int q);
Rule quota_rule(QuotaSpec spec);
Rule trivial_zero_rule(TupleUniverse universe);
Rule trivial_top_rule();
Rule distance_rule(std::vector<Constraint> constraints = {}, std::vector<Formula> formulas = {});
Rule distance_rule_over(std::vector<Instance> candidates, std::vector<Constraint> constraints = {});
Rule average_voter_rule();
Rule relationwise_average_voter_rule();
Rule dictatorship_rule(std::size_t agent);
Rule oligarchy_rule(std::vector<std::size_t> coalition);
Rule merge_rule();
Rule custom_rule(std::string name, std::function<std::vector<Instance>(const Profile&)> fn);

/// Majority threshold ceil((n+1)/2).
int majority_quota(std::size_t n);

/// Descriptor understood by parse_rule, or a readable name for custom rules.
std::string to_string(const Rule& rule);

/// union, intersection, majority, quota:<k>, quota:P=2,Q=1, distance,
/// avg-voter, relwise-avg, dictator:<i>, oligarchy:1,3, merge,
/// trivial-zero, trivial-top.
Rule parse_rule(std::string_view descriptor);

struct AggregationLimits {
  std::size_t max_candidates = std::size_t{1} << 20;
  std::size_t max_merge_selections = 1'000'000;
};

class AggregationOutcome {
 public:
  /// Sorts and deduplicates; throws if empty.
  explicit AggregationOutcome(std::vector<Instance> winners);

  const std::vector<Instance>& winners() const { return winners_; }
  std::size_t size() const { return winners_.size(); }
  bool resolute() const { return winners_.size() == 1; }
  /// The only winner; throws Error when there is a tie.
  const Instance& sole() const;
  const Instance& lex_smallest() const { return winners_.front(); }
  auto begin() const { return winners_.begin(); }
  auto end() const { return winners_.end(); }

  friend bool operator==(const AggregationOutcome&, const AggregationOutcome&) = default;

 private:
  std::vector<Instance> winners_;
};

AggregationOutcome aggregate(const Rule& rule, const Profile& p, const AggregationLimits& limits = {});

/// Pointwise agreement merge with null at disagreeing coordinates, followed
/// by removal of tuples refined by another candidate.
Relation merge_relation(const Profile& p, std::string_view symbol, const AggregationLimits& limits = {});

/// Number of instances in the default distance candidate space, or nullopt
/// if it exceeds the cap.
std::optional<std::size_t> count_candidates(const Profile& p, const AggregationLimits& limits = {});
/// Materializes the candidate space (default when `explicit_list` is null).
/// Throws LimitExceeded when the default space exceeds the cap.
std::vector<Instance> distance_candidates(const Profile& p, const std::vector<Instance>* explicit_list = nullptr,
                                          const AggregationLimits& limits = {});

/// Sum of symmetric distances from `d` to every profile member.
std::size_t total_distance(const Instance& d, const Profile& p);

}  // namespace dbagg
