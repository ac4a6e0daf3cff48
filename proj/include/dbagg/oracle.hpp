#pragma once

// Finite spaces of instances, profiles and formulas: the ground truth behind
// every property sweep. Exhaustive spaces are enumerated in canonical order;
// sampled spaces are reproducible from a seed (std::mt19937_64, values drawn
// with `next() % bound`).

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dbagg/constraints.hpp"
#include "dbagg/core.hpp"
#include "dbagg/folang.hpp"

namespace dbagg {

enum class SpaceMode { Exhaustive, Sampled };

struct SpaceSpec {
  Schema schema;
  std::vector<Value> domain;
  std::size_t max_tuples = 2;  // per relation
  std::size_t agents = 2;
  /// Instances failing any of these are dropped from the pool.
  std::vector<Constraint> constraints;
  /// Additional instance filter (not serializable).
  std::function<bool(const Instance&)> filter;
  SpaceMode mode = SpaceMode::Exhaustive;
  std::uint64_t seed = 0;
  /// Number of sampled instances / profiles in sampled mode.
  std::size_t count = 100;
  /// Upper bound on the unfiltered instance count in exhaustive mode.
  std::size_t cap = std::size_t{1} << 22;
  /// Symbols whose relation is identical for all agents of a profile.
  std::set<std::string> shared_symbols;

  std::string describe() const;
};

/// Domain tokens "a", "b", "c", ... (first `n` letters).
std::vector<Value> letter_domain(std::size_t n);

/// Exhaustive: every instance with at most `max_tuples` tuples per relation
/// over `domain`, filtered, in canonical order. Sampled: `count` instances.
std::vector<Instance> enum_instances(const SpaceSpec& spec);

/// Lazily indexed finite sequence of profiles.
class ProfileSpace {
 public:
  /// n-fold product of `pool`; agents agree on `shared` symbols when non-empty.
  static ProfileSpace product(std::vector<Instance> pool, std::size_t agents,
                              const std::set<std::string>& shared = {});
  static ProfileSpace of(std::vector<Profile> profiles);

  std::size_t size() const { return size_; }
  Profile at(std::size_t index) const;
  bool empty() const { return size_ == 0; }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < size_; ++i) fn(at(i));
  }

  std::string description;

 private:
  std::vector<Instance> pool_;
  std::vector<std::vector<std::size_t>> groups_;  // pool indices per group
  std::vector<std::size_t> group_offsets_;
  std::size_t agents_ = 0;
  std::vector<Profile> explicit_;
  std::size_t size_ = 0;
};

/// Exhaustive: product of enum_instances. Sampled: `count` profiles whose
/// members are drawn independently.
ProfileSpace enum_profiles(const SpaceSpec& spec);

enum class Fragment { ExistsPositive, ForallPositive, ConjunctiveQuery, FirstOrder };
Fragment parse_fragment(std::string_view name);
std::string to_string(Fragment f);
bool fragment_member(const FragmentFlags& flags, Fragment f);

struct FormulaGenOptions {
  std::vector<std::string> variables = {"x", "y", "z"};
  std::vector<Value> constants;
  /// Close every generated formula by quantifying its free variables.
  bool sentences = false;
  /// Skip formulas with more free variables than this.
  std::size_t max_free = 3;
};

/// Up to `count` distinct formulas of the fragment with resugared depth at
/// most `max_depth` (closure quantifiers of sentences excluded). Deterministic
/// in `seed`; returns fewer when the fragment is exhausted.
std::vector<Formula> enum_formulas(const Schema& schema, Fragment fragment, std::size_t max_depth,
                                   std::uint64_t seed, std::size_t count, const FormulaGenOptions& options = {});

/// Query with the free variables of `body` as head, in name order.
Query query_of(const Formula& body);

}  // namespace dbagg
