#pragma once

// Checkers for the social-choice axioms over finite profile spaces.
//
// Non-resolute rules are held to every winner: an axiom passes only if it
// holds whichever winner is taken as the output. Verdicts are relative to the
// space; a pass means "no counterexample in this space".

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbagg/aggregators.hpp"
#include "dbagg/core.hpp"
#include "dbagg/oracle.hpp"

namespace dbagg {

enum class Axiom { U, G, A, I, NPos, NNeg, NPerm, M };

/// "U", "G", "A", "I", "N+", "N-", "NP", "M".
Axiom parse_axiom(std::string_view name);
std::string to_string(Axiom a);

struct AxiomWitness {
  /// One profile, or two for independence and monotonicity (D then D').
  std::vector<Profile> profiles;
  std::string symbol;
  std::vector<Tuple> tuples;
  /// Agent order pi(1..n) for anonymity.
  std::vector<std::size_t> agent_order;
  /// Domain permutation for permutation-neutrality.
  ValueMap permutation;
  std::string detail;
};

struct AxiomReport {
  Axiom axiom;
  bool passed = true;
  std::optional<AxiomWitness> witness;
  std::size_t profiles_checked = 0;
  std::string space;
};

struct AxiomOptions {
  /// Extra tuples considered by the neutrality checks besides the profile union.
  std::optional<TupleUniverse> neutrality_universe;
  /// Domain permutations for NP; when empty, each profile is tested under
  /// every transposition of adjacent values of its active domain and one
  /// cyclic shift.
  std::vector<ValueMap> permutations;
  /// Monotonicity compares all pairs when |space|^2 fits; otherwise seeded
  /// base profiles are each compared against the whole space.
  std::size_t max_pairs = 4'000'000;
  std::uint64_t seed = 0;
  AggregationLimits limits;
};

AxiomReport check_axiom(Axiom axiom, const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});

AxiomReport check_unanimity(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});
AxiomReport check_groundedness(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});
AxiomReport check_anonymity(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});
AxiomReport check_independence(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});
AxiomReport check_pos_neutrality(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});
AxiomReport check_neg_neutrality(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});
AxiomReport check_perm_neutrality(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});
AxiomReport check_monotonicity(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options = {});

/// Re-runs the check on the space made of the witness profiles only.
AxiomReport replay(Axiom axiom, const Rule& rule, const AxiomWitness& witness, const AxiomOptions& options = {});

struct QuotaLemmaRow {
  std::string rule;
  bool anonymity = false;
  bool independence = false;
  bool monotonicity = false;
};

struct QuotaLemmaReport {
  std::vector<QuotaLemmaRow> rows;
  /// Only the quota-rules-satisfy-A-I-M direction is checked.
  std::string note;
  bool all_pass() const;
};

/// Checks A, I and M for every rule in `family` (normally quota rules).
QuotaLemmaReport verify_quota_lemma(const std::vector<Rule>& family, const ProfileSpace& space,
                                    const AxiomOptions& options = {});

}  // namespace dbagg
