#pragma once

// Aggregate-then-query versus query-then-aggregate.
//
// Answers on both sides of the diagram are evaluated over one shared range of
// values: the active domain of the profile, of every winner, and the query's
// constants. With per-instance active domains, a disjunctive query such as
// P(x) or P(y) would range y over different values on each side and the
// comparison would measure the range rather than the rule.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dbagg/aggregators.hpp"
#include "dbagg/folang.hpp"
#include "dbagg/oracle.hpp"

namespace dbagg {

enum class AnswerRange { ActiveDomain, Shared };

struct PreservationOptions {
  AnswerRange range = AnswerRange::Shared;
  AggregationLimits limits;
};

class AnswerProfile {
 public:
  /// Throws ValidationError when widths differ or the list is empty.
  explicit AnswerProfile(std::vector<AnswerSet> answers);

  const std::vector<AnswerSet>& answers() const { return answers_; }
  std::size_t width() const { return answers_.front().width; }
  std::size_t agents() const { return answers_.size(); }

 private:
  std::vector<AnswerSet> answers_;
};

/// Name of the single relation symbol answers are wrapped in.
inline constexpr const char* kAnswerSymbol = "ans";
/// Stand-in tuple value for the true answer of a width-0 query.
inline constexpr const char* kTrueMarker = "#true";

AnswerProfile answer_profile(const Profile& p, const Query& q, const std::set<Value>& range);

/// F*: applies the rule to the answer sets viewed as one-symbol instances.
std::set<AnswerSet> induced_aggregate(const Rule& rule, const AnswerProfile& ap, const AggregationLimits& limits = {});

struct CommutationReport {
  std::string rule;
  std::string query;
  bool commutes = true;
  /// Answers of the winners.
  std::set<AnswerSet> left;
  /// Winners of the induced rule on the per-agent answers.
  std::set<AnswerSet> right;
  std::string diff;
};

CommutationReport check_commutes(const Rule& rule, const Query& q, const Profile& p,
                                 const PreservationOptions& options = {});

/// The intersection of per-agent answers is contained in every winner's answer.
bool check_unanimity_containment(const Query& q, const Rule& rule, const Profile& p,
                                 const PreservationOptions& options = {});
/// Every winner's answer is contained in the union of per-agent answers.
bool check_groundedness_containment(const Query& q, const Rule& rule, const Profile& p,
                                    const PreservationOptions& options = {});

/// Answer sets minimizing the summed symmetric distance to all others; ties kept.
std::set<AnswerSet> ave_answers(const AnswerProfile& ap);

/// Every winner's answer is a subset of some member of ave_answers.
bool check_ave_containment(const Query& q, const Rule& rule, const Profile& p, const PreservationOptions& options = {});

enum class PreservationCheck { Commutes, UnanimityContainment, GroundednessContainment, AveContainment };

struct SweepReport {
  std::size_t pairs = 0;
  std::size_t failures = 0;
  std::optional<Profile> profile;
  std::optional<Query> query;
  /// Filled for the first failure of a commutation sweep.
  std::optional<CommutationReport> first;
};

/// Runs one check on every (profile, query) pair, aggregating each profile once.
SweepReport sweep(PreservationCheck check, const Rule& rule, const std::vector<Query>& queries,
                  const ProfileSpace& space, const PreservationOptions& options = {});

}  // namespace dbagg
