#include "dbagg/oracle.hpp"

#include <algorithm>
#include <sstream>

namespace dbagg {

std::vector<Value> letter_domain(std::size_t n) {
  std::vector<Value> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Value::constant(std::string(1, static_cast<char>('a' + i))));
  return out;
}

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  os << (mode == SpaceMode::Exhaustive ? "exhaustive" : "sampled") << " schema " << schema.to_string()
     << ", domain {";
  for (std::size_t i = 0; i < domain.size(); ++i) os << (i ? "," : "") << domain[i].to_string();
  os << "}, <=" << max_tuples << " tuples per relation, n=" << agents;
  if (!constraints.empty()) {
    os << ", members satisfy";
    for (const auto& c : constraints) os << " [" << to_string(c) << "]";
  }
  if (!shared_symbols.empty()) {
    os << ", shared";
    for (const auto& s : shared_symbols) os << " " << s;
  }
  if (mode == SpaceMode::Sampled) os << ", seed " << seed << ", count " << count;
  return os.str();
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t bound) { return bound == 0 ? 0 : static_cast<std::size_t>(gen_() % bound); }
  bool coin(std::size_t num, std::size_t den) { return below(den) < num; }

 private:
  std::mt19937_64 gen_;
};

std::vector<Tuple> all_tuples(const std::vector<Value>& domain, std::size_t arity) {
  std::vector<Value> dom(domain.begin(), domain.end());
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  std::vector<Tuple> out;
  if (dom.empty()) return out;
  std::vector<std::size_t> idx(arity, 0);
  while (true) {
    Tuple t;
    for (auto i : idx) t.push_back(dom[i]);
    out.push_back(std::move(t));
    std::size_t k = arity;
    while (k > 0 && ++idx[k - 1] == dom.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

std::size_t binomial_sum(std::size_t n, std::size_t k, std::size_t cap) {
  // sum_{j<=k} C(n, j), saturating at cap + 1.
  std::size_t total = 0;
  std::size_t c = 1;
  for (std::size_t j = 0; j <= k && j <= n; ++j) {
    total += c;
    if (total > cap) return cap + 1;
    c = c * (n - j) / (j + 1);
  }
  return total;
}

void subsets_upto(const std::vector<Tuple>& tuples, std::size_t k, std::size_t start, Relation& cur,
                  std::vector<Relation>& out) {
  out.push_back(cur);
  if (cur.size() == k) return;
  for (std::size_t i = start; i < tuples.size(); ++i) {
    cur.insert(tuples[i]);
    subsets_upto(tuples, k, i + 1, cur, out);
    cur.erase(tuples[i]);
  }
}

bool passes(const SpaceSpec& spec, const Instance& d) {
  for (const auto& c : spec.constraints) {
    if (!check(d, c)) return false;
  }
  return !spec.filter || spec.filter(d);
}

Instance sample_instance(const SpaceSpec& spec, Rng& rng, const std::map<std::string, std::vector<Tuple>>& tuples) {
  Instance d(spec.schema);
  for (const auto& [symbol, ts] : tuples) {
    const std::size_t size = rng.below(spec.max_tuples + 1);
    Relation r;
    for (std::size_t j = 0; j < size && !ts.empty(); ++j) r.insert(ts[rng.below(ts.size())]);
    d.set_relation(symbol, std::move(r));
  }
  return d;
}

std::map<std::string, std::vector<Tuple>> tuple_pools(const SpaceSpec& spec) {
  std::map<std::string, std::vector<Tuple>> out;
  for (const auto& [symbol, arity] : spec.schema.symbols()) out[symbol] = all_tuples(spec.domain, arity);
  return out;
}

}  // namespace

std::vector<Instance> enum_instances(const SpaceSpec& spec) {
  const auto pools = tuple_pools(spec);
  std::vector<Instance> out;
  if (spec.mode == SpaceMode::Sampled) {
    Rng rng(spec.seed);
    for (std::size_t i = 0; i < spec.count; ++i) {
      std::size_t attempts = 0;
      while (true) {
        Instance d = sample_instance(spec, rng, pools);
        if (passes(spec, d)) {
          out.push_back(std::move(d));
          break;
        }
        if (++attempts > 100000) throw LimitExceeded("could not sample an instance passing the space filter");
      }
    }
    return out;
  }

  std::size_t total = 1;
  std::vector<std::pair<std::string, std::vector<Relation>>> per_symbol;
  for (const auto& [symbol, ts] : pools) {
    const std::size_t count = binomial_sum(ts.size(), spec.max_tuples, spec.cap);
    if (count > spec.cap || total > spec.cap / count) {
      throw LimitExceeded("exhaustive space over " + spec.schema.to_string() + " exceeds the cap of " +
                          std::to_string(spec.cap) + " instances");
    }
    total *= count;
    std::vector<Relation> rels;
    Relation cur;
    subsets_upto(ts, spec.max_tuples, 0, cur, rels);
    per_symbol.emplace_back(symbol, std::move(rels));
  }
  std::vector<std::size_t> idx(per_symbol.size(), 0);
  while (true) {
    Instance d(spec.schema);
    for (std::size_t k = 0; k < per_symbol.size(); ++k) d.set_relation(per_symbol[k].first, per_symbol[k].second[idx[k]]);
    if (passes(spec, d)) out.push_back(std::move(d));
    std::size_t k = 0;
    while (k < per_symbol.size() && ++idx[k] == per_symbol[k].second.size()) idx[k++] = 0;
    if (k == per_symbol.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ------------------------------------------------------------ ProfileSpace

ProfileSpace ProfileSpace::product(std::vector<Instance> pool, std::size_t agents,
                                   const std::set<std::string>& shared) {
  if (agents == 0 || agents > kMaxAgents) throw ValidationError("agent count must be in 1..64");
  ProfileSpace s;
  s.agents_ = agents;
  s.pool_ = std::move(pool);
  std::map<std::vector<Relation>, std::size_t> group_of;
  for (std::size_t i = 0; i < s.pool_.size(); ++i) {
    std::vector<Relation> key;
    for (const auto& sym : shared) key.push_back(s.pool_[i].relation(sym));
    auto [it, inserted] = group_of.emplace(std::move(key), s.groups_.size());
    if (inserted) s.groups_.emplace_back();
    s.groups_[it->second].push_back(i);
  }
  for (const auto& g : s.groups_) {
    std::size_t count = 1;
    for (std::size_t a = 0; a < agents; ++a) {
      if (count > (std::size_t{1} << 40) / g.size()) throw LimitExceeded("profile space too large to index");
      count *= g.size();
    }
    s.group_offsets_.push_back(s.size_);
    s.size_ += count;
  }
  return s;
}

ProfileSpace ProfileSpace::of(std::vector<Profile> profiles) {
  ProfileSpace s;
  s.explicit_ = std::move(profiles);
  s.size_ = s.explicit_.size();
  s.description = "explicit list of " + std::to_string(s.size_) + " profiles";
  return s;
}

Profile ProfileSpace::at(std::size_t index) const {
  if (index >= size_) throw ValidationError("profile index out of range");
  if (!explicit_.empty()) return explicit_[index];
  const auto git = std::upper_bound(group_offsets_.begin(), group_offsets_.end(), index) - 1;
  const auto& group = groups_[static_cast<std::size_t>(git - group_offsets_.begin())];
  std::size_t local = index - *git;
  std::vector<std::size_t> digits(agents_);
  for (std::size_t a = agents_; a-- > 0;) {
    digits[a] = local % group.size();
    local /= group.size();
  }
  std::vector<Instance> members;
  members.reserve(agents_);
  for (auto d : digits) members.push_back(pool_[group[d]]);
  return Profile(std::move(members));
}

ProfileSpace enum_profiles(const SpaceSpec& spec) {
  if (spec.mode == SpaceMode::Exhaustive) {
    ProfileSpace s = ProfileSpace::product(enum_instances(spec), spec.agents, spec.shared_symbols);
    s.description = spec.describe();
    return s;
  }
  const auto pools = tuple_pools(spec);
  Rng rng(spec.seed);
  std::vector<Profile> profiles;
  for (std::size_t i = 0; i < spec.count; ++i) {
    std::vector<Instance> members;
    for (std::size_t a = 0; a < spec.agents; ++a) {
      std::size_t attempts = 0;
      while (true) {
        Instance d = sample_instance(spec, rng, pools);
        for (const auto& sym : spec.shared_symbols) {
          if (a > 0) d.set_relation(sym, members[0].relation(sym));
        }
        if (passes(spec, d)) {
          members.push_back(std::move(d));
          break;
        }
        if (++attempts > 100000) throw LimitExceeded("could not sample a profile member passing the space filter");
      }
    }
    profiles.emplace_back(std::move(members));
  }
  ProfileSpace s = ProfileSpace::of(std::move(profiles));
  s.description = spec.describe();
  return s;
}

// ---------------------------------------------------------------- formulas

Fragment parse_fragment(std::string_view name) {
  if (name == "exists-positive") return Fragment::ExistsPositive;
  if (name == "forall-positive") return Fragment::ForallPositive;
  if (name == "cq") return Fragment::ConjunctiveQuery;
  if (name == "fo") return Fragment::FirstOrder;
  throw ValidationError("unknown fragment '" + std::string(name) +
                        "' (expected exists-positive, forall-positive, cq or fo)");
}

std::string to_string(Fragment f) {
  switch (f) {
    case Fragment::ExistsPositive: return "exists-positive";
    case Fragment::ForallPositive: return "forall-positive";
    case Fragment::ConjunctiveQuery: return "cq";
    case Fragment::FirstOrder: return "fo";
  }
  return "fo";
}

bool fragment_member(const FragmentFlags& flags, Fragment f) {
  switch (f) {
    case Fragment::ExistsPositive: return flags.pos_existential;
    case Fragment::ForallPositive: return flags.pos_universal;
    case Fragment::ConjunctiveQuery: return flags.conjunctive_query;
    case Fragment::FirstOrder: return true;
  }
  return false;
}

namespace {

class FormulaGen {
 public:
  FormulaGen(const Schema& schema, Fragment fragment, const FormulaGenOptions& options, std::uint64_t seed)
      : fragment_(fragment), options_(options), rng_(seed) {
    for (const auto& [s, a] : schema.symbols()) symbols_.emplace_back(s, a);
    if (options_.variables.empty()) throw ValidationError("formula generation needs at least one variable");
  }

  Formula generate(std::size_t budget) {
    switch (fragment_) {
      case Fragment::ExistsPositive: return positive(budget, true);
      case Fragment::ForallPositive: return positive(budget, false);
      case Fragment::ConjunctiveQuery: return cq(budget);
      case Fragment::FirstOrder: return fo(budget);
    }
    return atom_formula();
  }

  Formula close(const Formula& f) {
    Formula out = f;
    const auto fv = free_variables(f);
    for (auto it = fv.rbegin(); it != fv.rend(); ++it) {
      bool universal = fragment_ == Fragment::ForallPositive ||
                       (fragment_ == Fragment::FirstOrder && rng_.coin(1, 2));
      out = universal ? forall(*it, out) : exists(*it, out);
    }
    return out;
  }

 private:
  Term term() {
    const std::size_t nv = options_.variables.size();
    const std::size_t nc = options_.constants.size();
    const std::size_t k = rng_.below(nv + nc);
    return k < nv ? Term::var(options_.variables[k]) : Term::constant(options_.constants[k - nv]);
  }

  Formula atom_formula() {
    const auto& [symbol, arity] = symbols_[rng_.below(symbols_.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < arity; ++i) args.push_back(term());
    return atom(symbol, std::move(args));
  }

  Formula base(bool allow_eq) {
    if (allow_eq && rng_.coin(1, 4)) return eq(term(), term());
    return atom_formula();
  }

  std::string binder(const Formula& body) {
    const auto fv = free_variables(body);
    if (!fv.empty() && rng_.coin(3, 4)) {
      auto it = fv.begin();
      std::advance(it, static_cast<long>(rng_.below(fv.size())));
      return *it;
    }
    return options_.variables[rng_.below(options_.variables.size())];
  }

  Formula positive(std::size_t budget, bool existential) {
    if (budget <= 1 || rng_.coin(1, 4)) return base(true);
    if (rng_.coin(1, 2)) {
      Formula a = positive(budget - 1, existential);
      Formula b = positive(budget - 1, existential);
      return existential ? disj(a, b) : conj(a, b);
    }
    Formula body = positive(budget - 1, existential);
    return existential ? exists(binder(body), body) : forall(binder(body), body);
  }

  Formula block(std::size_t budget) {
    const std::size_t atoms = 1 + rng_.below(std::min<std::size_t>(budget, 3));
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < atoms; ++i) parts.push_back(atom_formula());
    return conj(parts);
  }

  Formula cq(std::size_t budget) {
    if (budget <= 1 || rng_.coin(1, 3)) return block(budget);
    if (rng_.coin(1, 3)) return disj(cq(budget - 1), cq(budget - 1));
    Formula body = cq(budget - 1);
    return exists(binder(body), body);
  }

  Formula fo(std::size_t budget) {
    if (budget <= 1 || rng_.coin(1, 5)) return base(true);
    switch (rng_.below(7)) {
      case 0: return negation(fo(budget - 1));
      case 1: return conj(fo(budget - 1), fo(budget - 1));
      case 2: return disj(fo(budget - 1), fo(budget - 1));
      case 3: return implies(fo(budget - 1), fo(budget - 1));
      case 4: {
        Formula body = fo(budget - 1);
        return forall(binder(body), body);
      }
      default: {
        Formula body = fo(budget - 1);
        return exists(binder(body), body);
      }
    }
  }

  Fragment fragment_;
  FormulaGenOptions options_;
  Rng rng_;
  std::vector<std::pair<std::string, std::size_t>> symbols_;
};

}  // namespace

std::vector<Formula> enum_formulas(const Schema& schema, Fragment fragment, std::size_t max_depth,
                                   std::uint64_t seed, std::size_t count, const FormulaGenOptions& options) {
  if (max_depth == 0) throw ValidationError("formula depth must be at least 1");
  FormulaGen gen(schema, fragment, options, seed);
  std::set<Formula> seen;
  std::vector<Formula> out;
  const std::size_t max_attempts = 2000 * (count + 1);
  for (std::size_t attempt = 0; out.size() < count && attempt < max_attempts; ++attempt) {
    Formula f = rename_apart(gen.generate(max_depth));
    if (depth(f) > max_depth) continue;
    if (free_variables(f).size() > options.max_free) continue;
    if (options.sentences) f = rename_apart(gen.close(f));
    if (seen.insert(f).second) out.push_back(f);
  }
  return out;
}

Query query_of(const Formula& body) {
  const auto fv = free_variables(body);
  return make_query(std::vector<std::string>(fv.begin(), fv.end()), body);
}

}  // namespace dbagg
