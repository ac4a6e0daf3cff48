#include "dbagg/aggregators.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <limits>

namespace dbagg {

// ------------------------------------------------------------------ quotas

int QuotaSpec::default_quota(std::string_view symbol) const {
  auto it = per_symbol.find(symbol);
  if (it != per_symbol.end()) return it->second;
  if (uniform) return *uniform;
  throw ValidationError("no quota defined for symbol '" + std::string(symbol) + "'");
}

int QuotaSpec::quota(std::string_view symbol, const Tuple& t) const {
  auto it = exceptions.find({std::string(symbol), t});
  return it != exceptions.end() ? it->second : default_quota(symbol);
}

bool QuotaSpec::is_uniform() const {
  if (!exceptions.empty()) return false;
  std::set<int> values;
  if (uniform) values.insert(*uniform);
  for (const auto& [s, q] : per_symbol) values.insert(q);
  return values.size() <= 1;
}

const Relation& TupleUniverse::extra(std::string_view symbol) const {
  static const Relation kEmpty;
  auto it = extras.find(symbol);
  return it == extras.end() ? kEmpty : it->second;
}

int majority_quota(std::size_t n) { return static_cast<int>(n / 2 + 1); }

// ----------------------------------------------------------------- factories

Rule union_rule() { return Rule{rules::Union{}, std::nullopt}; }
Rule intersection_rule() { return Rule{rules::Intersection{}, std::nullopt}; }
Rule majority_rule() { return Rule{rules::Majority{}, std::nullopt}; }
Rule quota_rule(int q) { return Rule{rules::Quota{QuotaSpec::of(q)}, std::nullopt}; }
Rule quota_rule(QuotaSpec spec) { return Rule{rules::Quota{std::move(spec)}, std::nullopt}; }
Rule trivial_zero_rule(TupleUniverse universe) { return Rule{rules::TrivialZero{}, std::move(universe)}; }
Rule trivial_top_rule() { return Rule{rules::TrivialTop{}, std::nullopt}; }
Rule distance_rule(std::vector<Constraint> constraints, std::vector<Formula> formulas) {
  return Rule{rules::DistanceBased{std::nullopt, std::move(constraints), std::move(formulas)}, std::nullopt};
}
Rule distance_rule_over(std::vector<Instance> candidates, std::vector<Constraint> constraints) {
  return Rule{rules::DistanceBased{std::move(candidates), std::move(constraints), {}}, std::nullopt};
}
Rule average_voter_rule() { return Rule{rules::AverageVoter{}, std::nullopt}; }
Rule relationwise_average_voter_rule() { return Rule{rules::RelationwiseAverageVoter{}, std::nullopt}; }
Rule dictatorship_rule(std::size_t agent) {
  if (agent == 0) throw ValidationError("agents are numbered from 1");
  return Rule{rules::Dictatorship{agent}, std::nullopt};
}
Rule oligarchy_rule(std::vector<std::size_t> coalition) {
  if (coalition.empty()) throw ValidationError("oligarchy coalition must be non-empty");
  std::sort(coalition.begin(), coalition.end());
  if (coalition.front() == 0) throw ValidationError("agents are numbered from 1");
  coalition.erase(std::unique(coalition.begin(), coalition.end()), coalition.end());
  return Rule{rules::Oligarchy{std::move(coalition)}, std::nullopt};
}
Rule merge_rule() { return Rule{rules::MergeIncomplete{}, std::nullopt}; }
Rule custom_rule(std::string name, std::function<std::vector<Instance>(const Profile&)> fn) {
  return Rule{rules::Custom{std::move(name), std::move(fn)}, std::nullopt};
}

std::string to_string(const Rule& rule) {
  struct Namer {
    std::string operator()(const rules::Union&) const { return "union"; }
    std::string operator()(const rules::Intersection&) const { return "intersection"; }
    std::string operator()(const rules::Majority&) const { return "majority"; }
    std::string operator()(const rules::Quota& q) const {
      if (q.spec.per_symbol.empty() && q.spec.exceptions.empty() && q.spec.uniform) {
        return "quota:" + std::to_string(*q.spec.uniform);
      }
      std::string out = "quota:";
      bool first = true;
      for (const auto& [s, k] : q.spec.per_symbol) {
        out += (first ? "" : ",") + s + "=" + std::to_string(k);
        first = false;
      }
      if (q.spec.uniform) out += (first ? "*=" : ",*=") + std::to_string(*q.spec.uniform);
      if (!q.spec.exceptions.empty()) out += " (+" + std::to_string(q.spec.exceptions.size()) + " exceptions)";
      return out;
    }
    std::string operator()(const rules::TrivialZero&) const { return "trivial-zero"; }
    std::string operator()(const rules::TrivialTop&) const { return "trivial-top"; }
    std::string operator()(const rules::DistanceBased& d) const {
      std::string out = "distance";
      if (d.candidates) out += " over " + std::to_string(d.candidates->size()) + " candidates";
      for (const auto& c : d.constraints) out += " [" + to_string(c) + "]";
      for (const auto& f : d.formulas) out += " [" + to_string(f) + "]";
      return out;
    }
    std::string operator()(const rules::AverageVoter&) const { return "avg-voter"; }
    std::string operator()(const rules::RelationwiseAverageVoter&) const { return "relwise-avg"; }
    std::string operator()(const rules::Dictatorship& d) const { return "dictator:" + std::to_string(d.agent); }
    std::string operator()(const rules::Oligarchy& o) const {
      std::string out = "oligarchy:";
      for (std::size_t i = 0; i < o.coalition.size(); ++i) {
        out += (i ? "," : "") + std::to_string(o.coalition[i]);
      }
      return out;
    }
    std::string operator()(const rules::MergeIncomplete&) const { return "merge"; }
    std::string operator()(const rules::Custom& c) const { return c.name; }
  };
  return std::visit(Namer{}, rule.kind);
}

namespace {

std::size_t parse_index(std::string_view s, std::string_view descriptor) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("invalid number '" + std::string(s) + "' in rule '" + std::string(descriptor) + "'",
                     static_cast<std::size_t>(s.data() - descriptor.data()));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

Rule parse_rule(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  const std::string_view head = descriptor.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : descriptor.substr(colon + 1);
  auto no_arg = [&](Rule r) {
    if (colon != std::string_view::npos) {
      throw ParseError("rule '" + std::string(head) + "' takes no parameter", colon);
    }
    return r;
  };
  if (head == "union") return no_arg(union_rule());
  if (head == "intersection") return no_arg(intersection_rule());
  if (head == "majority") return no_arg(majority_rule());
  if (head == "distance") return no_arg(distance_rule());
  if (head == "avg-voter") return no_arg(average_voter_rule());
  if (head == "relwise-avg") return no_arg(relationwise_average_voter_rule());
  if (head == "merge") return no_arg(merge_rule());
  if (head == "trivial-top") return no_arg(trivial_top_rule());
  if (head == "trivial-zero") return no_arg(Rule{rules::TrivialZero{}, std::nullopt});
  if (head == "dictator") return dictatorship_rule(parse_index(arg, descriptor));
  if (head == "oligarchy") {
    std::vector<std::size_t> coalition;
    for (auto part : split(arg, ',')) coalition.push_back(parse_index(part, descriptor));
    return oligarchy_rule(std::move(coalition));
  }
  if (head == "quota") {
    if (arg.find('=') == std::string_view::npos) {
      return quota_rule(static_cast<int>(parse_index(arg, descriptor)));
    }
    QuotaSpec spec;
    for (auto part : split(arg, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("expected SYMBOL=QUOTA in '" + std::string(part) + "'",
                         static_cast<std::size_t>(part.data() - descriptor.data()));
      }
      const std::string symbol(part.substr(0, eq));
      const int q = static_cast<int>(parse_index(part.substr(eq + 1), descriptor));
      if (symbol == "*") {
        spec.uniform = q;
      } else {
        spec.per_symbol[symbol] = q;
      }
    }
    return quota_rule(std::move(spec));
  }
  throw ParseError("unknown rule '" + std::string(descriptor) + "'", 0);
}

// ----------------------------------------------------------------- outcome

AggregationOutcome::AggregationOutcome(std::vector<Instance> winners) : winners_(std::move(winners)) {
  if (winners_.empty()) throw Error("aggregation produced no winner");
  std::sort(winners_.begin(), winners_.end());
  winners_.erase(std::unique(winners_.begin(), winners_.end()), winners_.end());
}

const Instance& AggregationOutcome::sole() const {
  if (winners_.size() != 1) {
    throw Error("outcome is a tie between " + std::to_string(winners_.size()) + " instances");
  }
  return winners_.front();
}

std::size_t total_distance(const Instance& d, const Profile& p) {
  std::size_t total = 0;
  for (const auto& di : p) total += symmetric_distance(d, di);
  return total;
}

// ------------------------------------------------------------------- merge

Relation merge_relation(const Profile& p, std::string_view symbol, const AggregationLimits& limits) {
  const std::size_t n = p.agents();
  std::vector<std::vector<const Tuple*>> pools(n);
  std::size_t selections = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& t : p[i].relation(symbol)) pools[i].push_back(&t);
    if (pools[i].empty()) return {};
    if (selections > limits.max_merge_selections / pools[i].size()) {
      throw LimitExceeded("merge of " + std::string(symbol) + " exceeds " +
                          std::to_string(limits.max_merge_selections) + " selections");
    }
    selections *= pools[i].size();
  }
  const std::size_t arity = p.schema().arity(symbol);

  Relation candidates;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Tuple merged(arity);
    for (std::size_t k = 0; k < arity; ++k) {
      const Value& first = (*pools[0][idx[0]])[k];
      bool agree = true;
      for (std::size_t i = 1; i < n && agree; ++i) agree = (*pools[i][idx[i]])[k] == first;
      merged[k] = agree ? first : Value::null();
    }
    candidates.insert(std::move(merged));
    std::size_t i = 0;
    while (i < n && ++idx[i] == pools[i].size()) idx[i++] = 0;
    if (i == n) break;
  }

  // u is dropped when another candidate agrees with it on every non-null
  // coordinate of u, i.e. carries at least as much information.
  Relation out;
  for (const auto& u : candidates) {
    bool dominated = false;
    for (const auto& v : candidates) {
      if (&u == &v || u == v) continue;
      bool refines = true;
      for (std::size_t k = 0; k < arity && refines; ++k) refines = u[k].is_null() || u[k] == v[k];
      if (refines) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(u);
  }
  return out;
}

// ------------------------------------------------------ distance candidates

namespace {

struct UnionIndex {
  std::vector<std::pair<std::string, Tuple>> tuples;
  std::vector<std::uint64_t> agent_masks;
};

UnionIndex index_union(const Profile& p) {
  UnionIndex u;
  for (const auto& [symbol, arity] : p.schema().symbols()) {
    for (const auto& t : relation_union(p, symbol)) u.tuples.emplace_back(symbol, t);
  }
  if (u.tuples.size() < 64) {
    for (const auto& d : p) {
      std::uint64_t m = 0;
      for (std::size_t k = 0; k < u.tuples.size(); ++k) {
        if (d.relation(u.tuples[k].first).count(u.tuples[k].second)) m |= std::uint64_t{1} << k;
      }
      u.agent_masks.push_back(m);
    }
  }
  return u;
}

Instance instance_from_mask(const Schema& schema, const UnionIndex& u, std::uint64_t mask) {
  Instance d(schema);
  std::map<std::string, Relation> rels;
  for (std::size_t k = 0; k < u.tuples.size(); ++k) {
    if ((mask >> k) & 1u) rels[u.tuples[k].first].insert(u.tuples[k].second);
  }
  for (auto& [s, r] : rels) d.set_relation(s, std::move(r));
  return d;
}

std::size_t checked_space(const UnionIndex& u, const AggregationLimits& limits) {
  if (u.tuples.size() >= 63 || (std::uint64_t{1} << u.tuples.size()) > limits.max_candidates) {
    throw LimitExceeded("distance candidate space of 2^" + std::to_string(u.tuples.size()) +
                        " instances exceeds the cap of " + std::to_string(limits.max_candidates));
  }
  return std::size_t{1} << u.tuples.size();
}

}  // namespace

std::optional<std::size_t> count_candidates(const Profile& p, const AggregationLimits& limits) {
  try {
    return checked_space(index_union(p), limits);
  } catch (const LimitExceeded&) {
    return std::nullopt;
  }
}

std::vector<Instance> distance_candidates(const Profile& p, const std::vector<Instance>* explicit_list,
                                          const AggregationLimits& limits) {
  if (explicit_list) return *explicit_list;
  const UnionIndex u = index_union(p);
  const std::size_t size = checked_space(u, limits);
  std::vector<Instance> out;
  out.reserve(size);
  for (std::uint64_t m = 0; m < size; ++m) out.push_back(instance_from_mask(p.schema(), u, m));
  return out;
}

// ---------------------------------------------------------------- aggregate

namespace {

void check_quota_range(int q, std::size_t n) {
  if (q < 0 || q > static_cast<int>(n) + 1) {
    throw ValidationError("quota " + std::to_string(q) + " is outside 0.." + std::to_string(n + 1));
  }
}

Instance apply_quota(const QuotaSpec& spec, const std::optional<TupleUniverse>& universe, const Profile& p) {
  const std::size_t n = p.agents();
  Instance out(p.schema());
  for (const auto& [symbol, arity] : p.schema().symbols()) {
    const int base = spec.default_quota(symbol);
    check_quota_range(base, n);
    auto supp = supports(p, symbol);
    Relation candidates;
    for (const auto& [t, s] : supp) candidates.insert(t);
    if (base == 0) {
      if (!universe) {
        throw ValidationError("quota 0 for " + symbol +
                              " accepts every tuple; supply a finite tuple universe (extra tuples)");
      }
      for (const auto& t : universe->extra(symbol)) {
        if (t.size() != arity) throw ValidationError("extra tuple " + to_string(t) + " has wrong arity");
        candidates.insert(t);
      }
    }
    for (const auto& [key, q] : spec.exceptions) {
      check_quota_range(q, n);
      if (key.first == symbol && q == 0) candidates.insert(key.second);
    }
    Relation accepted;
    for (const auto& t : candidates) {
      auto it = supp.find(t);
      const int support = it == supp.end() ? 0 : static_cast<int>(it->second.size());
      if (support >= spec.quota(symbol, t)) accepted.insert(t);
    }
    out.set_relation(symbol, std::move(accepted));
  }
  return out;
}

bool admissible(const Instance& d, const rules::DistanceBased& rule) {
  for (const auto& c : rule.constraints) {
    if (!check(d, c)) return false;
  }
  for (const auto& f : rule.formulas) {
    if (!is_true(d, f)) return false;
  }
  return true;
}

std::vector<Instance> apply_distance(const rules::DistanceBased& rule, const Profile& p,
                                     const AggregationLimits& limits) {
  for (const auto& c : rule.constraints) validate(c, p.schema());
  for (const auto& f : rule.formulas) validate(f, p.schema());
  std::vector<Instance> winners;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  auto consider = [&](std::size_t dist, auto make) {
    if (dist > best) return;
    Instance d = make();
    if (!admissible(d, rule)) return;
    if (dist < best) {
      best = dist;
      winners.clear();
    }
    winners.push_back(std::move(d));
  };
  if (rule.candidates) {
    for (const auto& c : *rule.candidates) {
      if (!(c.schema() == p.schema())) throw ValidationError("candidate instance has a different schema");
      consider(total_distance(c, p), [&] { return c; });
    }
  } else {
    const UnionIndex u = index_union(p);
    const std::size_t size = checked_space(u, limits);
    for (std::uint64_t m = 0; m < size; ++m) {
      std::size_t dist = 0;
      for (auto a : u.agent_masks) dist += static_cast<std::size_t>(std::popcount(m ^ a));
      consider(dist, [&] { return instance_from_mask(p.schema(), u, m); });
    }
  }
  if (winners.empty()) throw Error("no candidate instance satisfies the distance rule's constraints");
  return winners;
}

std::vector<Instance> apply_relationwise_average(const Profile& p, const AggregationLimits& limits) {
  const std::size_t n = p.agents();
  std::vector<std::pair<std::string, std::vector<Relation>>> choices;
  std::size_t combos = 1;
  for (const auto& [symbol, arity] : p.schema().symbols()) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::set<Relation> argmin;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t sum = 0;
      for (std::size_t j = 0; j < n; ++j) sum += symmetric_distance(p[i].relation(symbol), p[j].relation(symbol));
      if (sum < best) {
        best = sum;
        argmin.clear();
      }
      if (sum == best) argmin.insert(p[i].relation(symbol));
    }
    combos *= argmin.size();
    if (combos > limits.max_candidates) throw LimitExceeded("too many relation-wise average winners");
    choices.emplace_back(symbol, std::vector<Relation>(argmin.begin(), argmin.end()));
  }
  std::vector<Instance> winners;
  std::vector<std::size_t> idx(choices.size(), 0);
  while (true) {
    Instance d(p.schema());
    for (std::size_t k = 0; k < choices.size(); ++k) d.set_relation(choices[k].first, choices[k].second[idx[k]]);
    winners.push_back(std::move(d));
    std::size_t k = 0;
    while (k < choices.size() && ++idx[k] == choices[k].second.size()) idx[k++] = 0;
    if (k == choices.size()) break;
  }
  return winners;
}

}  // namespace

AggregationOutcome aggregate(const Rule& rule, const Profile& p, const AggregationLimits& limits) {
  const std::size_t n = p.agents();
  struct Apply {
    const Rule& rule;
    const Profile& p;
    const AggregationLimits& limits;
    std::size_t n;

    std::vector<Instance> operator()(const rules::Union&) const {
      return {apply_quota(QuotaSpec::of(1), rule.universe, p)};
    }
    std::vector<Instance> operator()(const rules::Intersection&) const {
      return {apply_quota(QuotaSpec::of(static_cast<int>(n)), rule.universe, p)};
    }
    std::vector<Instance> operator()(const rules::Majority&) const {
      return {apply_quota(QuotaSpec::of(majority_quota(n)), rule.universe, p)};
    }
    std::vector<Instance> operator()(const rules::Quota& q) const {
      return {apply_quota(q.spec, rule.universe, p)};
    }
    std::vector<Instance> operator()(const rules::TrivialZero&) const {
      return {apply_quota(QuotaSpec::of(0), rule.universe, p)};
    }
    std::vector<Instance> operator()(const rules::TrivialTop&) const {
      return {apply_quota(QuotaSpec::of(static_cast<int>(n) + 1), rule.universe, p)};
    }
    std::vector<Instance> operator()(const rules::DistanceBased& d) const { return apply_distance(d, p, limits); }
    std::vector<Instance> operator()(const rules::AverageVoter&) const {
      std::size_t best = std::numeric_limits<std::size_t>::max();
      std::vector<Instance> winners;
      for (const auto& d : p) {
        const std::size_t sum = total_distance(d, p);
        if (sum < best) {
          best = sum;
          winners.clear();
        }
        if (sum == best) winners.push_back(d);
      }
      return winners;
    }
    std::vector<Instance> operator()(const rules::RelationwiseAverageVoter&) const {
      return apply_relationwise_average(p, limits);
    }
    std::vector<Instance> operator()(const rules::Dictatorship& d) const { return {p.agent(d.agent)}; }
    std::vector<Instance> operator()(const rules::Oligarchy& o) const {
      if (o.coalition.empty()) throw ValidationError("oligarchy coalition must be non-empty");
      Instance out(p.schema());
      for (const auto& [symbol, arity] : p.schema().symbols()) {
        Relation r = p.agent(o.coalition.front()).relation(symbol);
        for (auto i : o.coalition) {
          const Relation& ri = p.agent(i).relation(symbol);
          for (auto it = r.begin(); it != r.end();) it = ri.count(*it) ? std::next(it) : r.erase(it);
        }
        out.set_relation(symbol, std::move(r));
      }
      return {out};
    }
    std::vector<Instance> operator()(const rules::MergeIncomplete&) const {
      Instance out(p.schema());
      for (const auto& [symbol, arity] : p.schema().symbols()) {
        out.set_relation(symbol, merge_relation(p, symbol, limits));
      }
      return {out};
    }
    std::vector<Instance> operator()(const rules::Custom& c) const {
      auto winners = c.fn(p);
      for (const auto& w : winners) {
        if (!(w.schema() == p.schema())) throw ValidationError("custom rule returned a foreign schema");
      }
      return winners;
    }
  };
  return AggregationOutcome(std::visit(Apply{rule, p, limits, n}, rule.kind));
}

}  // namespace dbagg
