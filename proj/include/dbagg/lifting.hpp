#pragma once

// Collective rationality: does a rule preserve a constraint that every agent
// satisfies? All verdicts are relative to a finite profile space.

#include <optional>
#include <string>
#include <vector>

#include "dbagg/aggregators.hpp"
#include "dbagg/constraints.hpp"
#include "dbagg/folang.hpp"
#include "dbagg/oracle.hpp"

namespace dbagg {

/// Which winners of a non-resolute rule must satisfy the constraint.
enum class WinnerReading { Every, Some };

struct LiftOptions {
  WinnerReading reading = WinnerReading::Every;
  AggregationLimits limits;
};

struct LiftReport {
  std::string rule;
  std::string constraint;
  std::string space;
  bool lifted = true;
  /// Set when the rule only ever outputs instances satisfying the constraint
  /// (a distance rule restricted to consistent candidates); no search is run.
  bool by_construction = false;
  /// Profiles of the space whose members all satisfy the constraint.
  std::size_t profiles_considered = 0;
  std::optional<Profile> profile;
  std::optional<Instance> winner;
};

/// `phi` must be a sentence.
LiftReport check_lifting(const Rule& rule, const Formula& phi, const ProfileSpace& space, const LiftOptions& options = {});
LiftReport check_lifting(const Rule& rule, const Constraint& c, const ProfileSpace& space, const LiftOptions& options = {});

struct PredictionRow {
  std::string rule;
  bool predicted = false;
  LiftReport observed;
  bool agrees() const { return predicted == observed.lifted; }
};

struct PredictionReport {
  std::vector<PredictionRow> rows;
  std::size_t disagreements() const;
};

/// Uniform quota q in 1..n lifts the dependency exactly when q > n/2.
PredictionReport verify_prop1(std::size_t n, const FunctionalDependency& fd, const ProfileSpace& space,
                              const LiftOptions& options = {});

struct Prop2Report {
  bool grounded = false;
  LiftReport lifting;
  /// Grounded implies lifted.
  bool consistent() const { return !grounded || lifting.lifted; }
};

Prop2Report verify_prop2(const Rule& rule, const ValueConstraint& vc, const ProfileSpace& space,
                         const LiftOptions& options = {});

/// Sweeps the quota of the target symbol over 1..n with every other symbol at
/// `source_quota`; the constraint is lifted exactly when the target quota is 1.
PredictionReport verify_prop3(std::size_t n, const ReferentialConstraint& rc, int source_quota,
                              const ProfileSpace& space, const LiftOptions& options = {});

struct LiteralReport {
  bool unanimous = false;
  bool grounded = false;
  /// One verdict per supplied literal.
  std::vector<LiftReport> literals;
  /// U and G together imply every literal is lifted.
  bool consistent() const;
};

/// Each formula must be a ground atom or a negated ground atom.
LiteralReport check_lit_theorem(const Rule& rule, const std::vector<Formula>& literals, const ProfileSpace& space,
                                const LiftOptions& options = {});

struct DictatorshipReport {
  bool generalized_dictatorship = true;
  /// For each profile (in space order) the first agent whose instance equals
  /// the canonically smallest winner.
  std::vector<std::size_t> g;
  std::optional<Profile> counterexample;
};

DictatorshipReport is_generalized_dictatorship(const Rule& rule, const ProfileSpace& space,
                                               const AggregationLimits& limits = {});

/// F(D) = rho(D_agent): values outside the key set of rho are fixed.
Rule permuted_dictatorship_rule(ValueMap rho, std::size_t agent = 1);

}  // namespace dbagg
