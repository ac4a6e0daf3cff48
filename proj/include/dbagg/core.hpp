#pragma once

// Relational building blocks: schemas, values (with the distinguished null),
// tuples, instances and profiles of instances.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dbagg/error.hpp"

namespace dbagg {

/// A domain element: either an opaque constant token or the null marker.
/// Constants order lexicographically by token; null sorts after every constant.
class Value {
 public:
  Value() = default;  // null

  static Value constant(std::string token) {
    Value v;
    v.token_ = std::move(token);
    v.null_ = false;
    return v;
  }
  static Value null() { return Value{}; }

  bool is_null() const noexcept { return null_; }
  /// Empty for null.
  const std::string& token() const noexcept { return token_; }
  /// Display form; null renders as "null".
  std::string to_string() const { return null_ ? std::string("null") : token_; }

  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.null_ != b.null_) {
      return a.null_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return a.token_.compare(b.token_) <=> 0;
  }
  friend bool operator==(const Value& a, const Value& b) {
    return a.null_ == b.null_ && a.token_ == b.token_;
  }

 private:
  std::string token_;
  bool null_ = true;
};

/// Shorthand for Value::constant.
inline Value val(std::string token) { return Value::constant(std::move(token)); }

using Tuple = std::vector<Value>;
/// Duplicate-free, canonically ordered set of tuples.
using Relation = std::set<Tuple>;
using RelationMap = std::map<std::string, Relation, std::less<>>;

std::string to_string(const Tuple& tuple);
/// Builds a tuple of constants, "null" is not special here.
Tuple make_tuple(std::initializer_list<std::string_view> tokens);

/// Finite set of relation symbols with their arities. Cheap to copy.
class Schema {
 public:
  using SymbolMap = std::map<std::string, std::size_t, std::less<>>;

  Schema();
  /// Throws ValidationError when empty, when an arity is zero, or when a
  /// symbol is not an identifier.
  explicit Schema(SymbolMap symbols);
  Schema(std::initializer_list<std::pair<const std::string, std::size_t>> symbols);

  std::size_t arity(std::string_view symbol) const;
  bool contains(std::string_view symbol) const;
  const SymbolMap& symbols() const { return *symbols_; }
  std::size_t size() const { return symbols_->size(); }
  std::string to_string() const;

  friend bool operator==(const Schema& a, const Schema& b) {
    return a.symbols_ == b.symbols_ || *a.symbols_ == *b.symbols_;
  }

 private:
  std::shared_ptr<const SymbolMap> symbols_;
};

/// Assignment of a finite relation to every symbol of a schema.
///
/// Storage is canonical (sets of tuples in Value order) and shared between
/// copies until one of them is modified.
class Instance {
 public:
  explicit Instance(Schema schema);

  const Schema& schema() const { return schema_; }
  const Relation& relation(std::string_view symbol) const;
  const RelationMap& relations() const { return *relations_; }

  /// Adds a tuple; duplicates are absorbed. Throws on unknown symbol or
  /// arity mismatch.
  void insert(std::string_view symbol, Tuple tuple);
  void erase(std::string_view symbol, const Tuple& tuple);
  void set_relation(std::string_view symbol, Relation tuples);

  std::size_t tuple_count() const;
  bool empty() const { return tuple_count() == 0; }
  std::string to_string() const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.schema_ == b.schema_ &&
           (a.relations_ == b.relations_ || *a.relations_ == *b.relations_);
  }
  friend std::strong_ordering operator<=>(const Instance& a, const Instance& b) {
    if (a.relations_ == b.relations_) return std::strong_ordering::equal;
    return *a.relations_ <=> *b.relations_;
  }

 private:
  Relation& mutable_relation(std::string_view symbol);
  void check_tuple(std::string_view symbol, const Tuple& tuple) const;

  Schema schema_;
  std::shared_ptr<RelationMap> relations_;
};

/// Agents accepting a tuple. Agents are numbered from 1; at most 64.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::uint64_t mask) : mask_(mask) {}
  static SupportSet of(std::initializer_list<std::size_t> agents);
  static SupportSet everyone(std::size_t n);

  void add(std::size_t agent);
  bool contains(std::size_t agent) const;
  std::size_t size() const;
  bool empty() const { return mask_ == 0; }
  std::vector<std::size_t> agents() const;
  SupportSet complement(std::size_t n) const;
  std::uint64_t mask() const { return mask_; }
  std::string to_string() const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;
  friend auto operator<=>(const SupportSet&, const SupportSet&) = default;

 private:
  std::uint64_t mask_ = 0;
};

inline constexpr std::size_t kMaxAgents = 64;

/// Ordered list of n >= 1 instances over one schema.
class Profile {
 public:
  explicit Profile(std::vector<Instance> instances);

  std::size_t agents() const { return instances_.size(); }
  const Schema& schema() const { return instances_.front().schema(); }
  /// 0-based access.
  const Instance& operator[](std::size_t index) const { return instances_[index]; }
  /// 1-based access, throws on out-of-range agent.
  const Instance& agent(std::size_t agent) const;
  const std::vector<Instance>& instances() const { return instances_; }
  auto begin() const { return instances_.begin(); }
  auto end() const { return instances_.end(); }
  std::string to_string() const;

  friend bool operator==(const Profile&, const Profile&) = default;
  friend auto operator<=>(const Profile& a, const Profile& b) {
    return a.instances_ <=> b.instances_;
  }

 private:
  std::vector<Instance> instances_;
};

/// Finite map on values; used as a permutation of the domain.
using ValueMap = std::map<Value, Value>;

/// Values occurring in some tuple of `d`. Null is included only when it occurs.
std::set<Value> active_domain(const Instance& d);
std::set<Value> active_domain(const Profile& p);

/// {i | t in D_i(symbol)}.
SupportSet support(const Profile& p, std::string_view symbol, const Tuple& t);
/// Support of every tuple in the union of the profile's relations for `symbol`.
std::map<Tuple, SupportSet> supports(const Profile& p, std::string_view symbol);

/// Replaces every value by its image. `rho` must be a bijection of its key set
/// covering adom(d); null is fixed (mapping null elsewhere is rejected).
Instance permute(const Instance& d, const ValueMap& rho);
Profile permute(const Profile& p, const ValueMap& rho);
/// Like permute, but values outside the key set of `rho` are left unchanged.
Instance permute_partial(const Instance& d, const ValueMap& rho);
Tuple permute_partial(const Tuple& t, const ValueMap& rho);

/// Sum over symbols of |d1(P) \ d2(P)| + |d2(P) \ d1(P)|.
std::size_t symmetric_distance(const Instance& d1, const Instance& d2);
std::size_t symmetric_distance(const Relation& r1, const Relation& r2);

/// Canonical copy. Storage is always canonical, so this only documents intent
/// at call sites that compare instances built from unordered input.
Instance canonicalize(const Instance& d);

Relation relation_union(const Profile& p, std::string_view symbol);
Relation relation_intersection(const Profile& p, std::string_view symbol);
bool is_subset(const Relation& a, const Relation& b);

}  // namespace dbagg
