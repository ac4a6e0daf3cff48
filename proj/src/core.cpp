#include "dbagg/core.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace dbagg {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_reserved(std::string_view s) {
  static const std::set<std::string_view> kReserved = {"forall", "exists", "and", "or",
                                                       "not",    "null",   "consts"};
  return kReserved.count(s) > 0;
}

}  // namespace

std::string to_string(const Tuple& tuple) {
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ", ";
    out += tuple[i].to_string();
  }
  return out + ")";
}

Tuple make_tuple(std::initializer_list<std::string_view> tokens) {
  Tuple t;
  t.reserve(tokens.size());
  for (auto tok : tokens) t.push_back(Value::constant(std::string(tok)));
  return t;
}

// ---------------------------------------------------------------- Schema

Schema::Schema() : symbols_(std::make_shared<const SymbolMap>()) {}

Schema::Schema(SymbolMap symbols) {
  if (symbols.empty()) throw ValidationError("schema must declare at least one relation symbol");
  for (const auto& [name, arity] : symbols) {
    if (!is_identifier(name) || is_reserved(name)) {
      throw ValidationError("invalid relation symbol '" + name + "'");
    }
    if (arity == 0) throw ValidationError("relation symbol '" + name + "' has arity 0");
  }
  symbols_ = std::make_shared<const SymbolMap>(std::move(symbols));
}

Schema::Schema(std::initializer_list<std::pair<const std::string, std::size_t>> symbols)
    : Schema(SymbolMap(symbols.begin(), symbols.end())) {}

std::size_t Schema::arity(std::string_view symbol) const {
  auto it = symbols_->find(symbol);
  if (it == symbols_->end()) {
    throw ValidationError("unknown relation symbol '" + std::string(symbol) + "'");
  }
  return it->second;
}

bool Schema::contains(std::string_view symbol) const { return symbols_->count(symbol) > 0; }

std::string Schema::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, arity] : *symbols_) {
    if (!first) out += ", ";
    first = false;
    out += name + "/" + std::to_string(arity);
  }
  return out + "}";
}

// -------------------------------------------------------------- Instance

Instance::Instance(Schema schema)
    : schema_(std::move(schema)), relations_(std::make_shared<RelationMap>()) {
  if (schema_.size() == 0) throw ValidationError("instance requires a non-empty schema");
  for (const auto& [name, arity] : schema_.symbols()) relations_->emplace(name, Relation{});
}

const Relation& Instance::relation(std::string_view symbol) const {
  auto it = relations_->find(symbol);
  if (it == relations_->end()) {
    throw ValidationError("unknown relation symbol '" + std::string(symbol) + "'");
  }
  return it->second;
}

Relation& Instance::mutable_relation(std::string_view symbol) {
  if (relations_.use_count() > 1) relations_ = std::make_shared<RelationMap>(*relations_);
  auto it = relations_->find(symbol);
  if (it == relations_->end()) {
    throw ValidationError("unknown relation symbol '" + std::string(symbol) + "'");
  }
  return it->second;
}

void Instance::check_tuple(std::string_view symbol, const Tuple& tuple) const {
  const std::size_t arity = schema_.arity(symbol);
  if (tuple.size() != arity) {
    throw ValidationError("tuple " + dbagg::to_string(tuple) + " has length " +
                          std::to_string(tuple.size()) + " but " + std::string(symbol) +
                          " has arity " + std::to_string(arity));
  }
}

void Instance::insert(std::string_view symbol, Tuple tuple) {
  check_tuple(symbol, tuple);
  mutable_relation(symbol).insert(std::move(tuple));
}

void Instance::erase(std::string_view symbol, const Tuple& tuple) {
  schema_.arity(symbol);
  if (!relation(symbol).count(tuple)) return;
  mutable_relation(symbol).erase(tuple);
}

void Instance::set_relation(std::string_view symbol, Relation tuples) {
  for (const auto& t : tuples) check_tuple(symbol, t);
  mutable_relation(symbol) = std::move(tuples);
}

std::size_t Instance::tuple_count() const {
  std::size_t n = 0;
  for (const auto& [name, rel] : *relations_) n += rel.size();
  return n;
}

std::string Instance::to_string() const {
  std::string out = "{";
  bool first_symbol = true;
  for (const auto& [name, rel] : *relations_) {
    if (!first_symbol) out += "; ";
    first_symbol = false;
    out += name + ": {";
    bool first = true;
    for (const auto& t : rel) {
      if (!first) out += ", ";
      first = false;
      out += dbagg::to_string(t);
    }
    out += "}";
  }
  return out + "}";
}

Instance canonicalize(const Instance& d) { return d; }

// ------------------------------------------------------------ SupportSet

SupportSet SupportSet::of(std::initializer_list<std::size_t> agents) {
  SupportSet s;
  for (auto a : agents) s.add(a);
  return s;
}

SupportSet SupportSet::everyone(std::size_t n) {
  if (n > kMaxAgents) throw ValidationError("at most 64 agents are supported");
  return SupportSet(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
}

void SupportSet::add(std::size_t agent) {
  if (agent == 0 || agent > kMaxAgents) {
    throw ValidationError("agent index " + std::to_string(agent) + " out of range");
  }
  mask_ |= std::uint64_t{1} << (agent - 1);
}

bool SupportSet::contains(std::size_t agent) const {
  if (agent == 0 || agent > kMaxAgents) return false;
  return (mask_ >> (agent - 1)) & 1u;
}

std::size_t SupportSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<std::size_t> SupportSet::agents() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kMaxAgents; ++i) {
    if ((mask_ >> i) & 1u) out.push_back(i + 1);
  }
  return out;
}

SupportSet SupportSet::complement(std::size_t n) const {
  return SupportSet(everyone(n).mask() & ~mask_);
}

std::string SupportSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto a : agents()) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(a);
  }
  return out + "}";
}

// --------------------------------------------------------------- Profile

Profile::Profile(std::vector<Instance> instances) : instances_(std::move(instances)) {
  if (instances_.empty()) throw ValidationError("a profile needs at least one instance");
  if (instances_.size() > kMaxAgents) throw ValidationError("at most 64 agents are supported");
  for (const auto& d : instances_) {
    if (!(d.schema() == instances_.front().schema())) {
      throw ValidationError("profile instances do not share one schema");
    }
  }
}

const Instance& Profile::agent(std::size_t agent) const {
  if (agent == 0 || agent > instances_.size()) {
    throw ValidationError("agent index " + std::to_string(agent) + " out of range 1.." +
                          std::to_string(instances_.size()));
  }
  return instances_[agent - 1];
}

std::string Profile::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    os << "D" << (i + 1) << " = " << instances_[i].to_string();
    if (i + 1 < instances_.size()) os << "\n";
  }
  return os.str();
}

// ------------------------------------------------------------ operations

std::set<Value> active_domain(const Instance& d) {
  std::set<Value> out;
  for (const auto& [name, rel] : d.relations()) {
    for (const auto& t : rel) out.insert(t.begin(), t.end());
  }
  return out;
}

std::set<Value> active_domain(const Profile& p) {
  std::set<Value> out;
  for (const auto& d : p) {
    auto a = active_domain(d);
    out.insert(a.begin(), a.end());
  }
  return out;
}

SupportSet support(const Profile& p, std::string_view symbol, const Tuple& t) {
  const std::size_t arity = p.schema().arity(symbol);
  if (t.size() != arity) {
    throw ValidationError("tuple " + to_string(t) + " does not match arity " +
                          std::to_string(arity) + " of " + std::string(symbol));
  }
  SupportSet s;
  for (std::size_t i = 0; i < p.agents(); ++i) {
    if (p[i].relation(symbol).count(t)) s.add(i + 1);
  }
  return s;
}

std::map<Tuple, SupportSet> supports(const Profile& p, std::string_view symbol) {
  std::map<Tuple, SupportSet> out;
  for (std::size_t i = 0; i < p.agents(); ++i) {
    for (const auto& t : p[i].relation(symbol)) out[t].add(i + 1);
  }
  return out;
}

namespace {

void validate_bijection(const ValueMap& rho) {
  std::set<Value> image;
  for (const auto& [from, to] : rho) {
    if (from.is_null() != to.is_null()) {
      throw ValidationError("permutation must fix null");
    }
    if (!image.insert(to).second) {
      throw ValidationError("permutation maps two values to " + to.to_string());
    }
  }
  for (const auto& v : image) {
    if (!rho.count(v)) {
      throw ValidationError("permutation image " + v.to_string() + " is outside its domain");
    }
  }
}

}  // namespace

Tuple permute_partial(const Tuple& t, const ValueMap& rho) {
  Tuple out;
  out.reserve(t.size());
  for (const auto& v : t) {
    auto it = rho.find(v);
    out.push_back(it == rho.end() ? v : it->second);
  }
  return out;
}

Instance permute_partial(const Instance& d, const ValueMap& rho) {
  Instance out(d.schema());
  for (const auto& [name, rel] : d.relations()) {
    Relation mapped;
    for (const auto& t : rel) mapped.insert(permute_partial(t, rho));
    out.set_relation(name, std::move(mapped));
  }
  return out;
}

Instance permute(const Instance& d, const ValueMap& rho) {
  validate_bijection(rho);
  for (const auto& v : active_domain(d)) {
    if (v.is_null()) continue;
    if (!rho.count(v)) {
      throw ValidationError("permutation undefined on active-domain value " + v.to_string());
    }
  }
  return permute_partial(d, rho);
}

Profile permute(const Profile& p, const ValueMap& rho) {
  std::vector<Instance> out;
  out.reserve(p.agents());
  for (const auto& d : p) out.push_back(permute(d, rho));
  return Profile(std::move(out));
}

std::size_t symmetric_distance(const Relation& r1, const Relation& r2) {
  std::size_t common = 0;
  auto a = r1.begin();
  auto b = r2.begin();
  while (a != r1.end() && b != r2.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++common;
      ++a;
      ++b;
    }
  }
  return r1.size() + r2.size() - 2 * common;
}

std::size_t symmetric_distance(const Instance& d1, const Instance& d2) {
  if (!(d1.schema() == d2.schema())) {
    throw ValidationError("symmetric distance between instances of different schemas");
  }
  std::size_t total = 0;
  auto it2 = d2.relations().begin();
  for (const auto& [name, rel] : d1.relations()) {
    total += symmetric_distance(rel, it2->second);
    ++it2;
  }
  return total;
}

Relation relation_union(const Profile& p, std::string_view symbol) {
  Relation out;
  for (const auto& d : p) {
    const auto& r = d.relation(symbol);
    out.insert(r.begin(), r.end());
  }
  return out;
}

Relation relation_intersection(const Profile& p, std::string_view symbol) {
  Relation out = p[0].relation(symbol);
  for (std::size_t i = 1; i < p.agents(); ++i) {
    const auto& r = p[i].relation(symbol);
    for (auto it = out.begin(); it != out.end();) {
      it = r.count(*it) ? std::next(it) : out.erase(it);
    }
  }
  return out;
}

bool is_subset(const Relation& a, const Relation& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace dbagg
