#include "dbagg/axioms.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace dbagg {

Axiom parse_axiom(std::string_view name) {
  if (name == "U") return Axiom::U;
  if (name == "G") return Axiom::G;
  if (name == "A") return Axiom::A;
  if (name == "I") return Axiom::I;
  if (name == "N+") return Axiom::NPos;
  if (name == "N-") return Axiom::NNeg;
  if (name == "NP") return Axiom::NPerm;
  if (name == "M") return Axiom::M;
  throw ValidationError("unknown axiom '" + std::string(name) + "' (expected U, G, A, I, N+, N-, NP or M)");
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::U: return "U";
    case Axiom::G: return "G";
    case Axiom::A: return "A";
    case Axiom::I: return "I";
    case Axiom::NPos: return "N+";
    case Axiom::NNeg: return "N-";
    case Axiom::NPerm: return "NP";
    case Axiom::M: return "M";
  }
  return "?";
}

namespace {

AxiomReport start(Axiom a, const ProfileSpace& space) {
  AxiomReport r;
  r.axiom = a;
  r.space = space.description;
  return r;
}

AxiomReport fail(AxiomReport r, AxiomWitness w) {
  r.passed = false;
  r.witness = std::move(w);
  return r;
}

/// Candidate tuples for neutrality: union of the profile plus extras.
Relation neutrality_tuples(const Profile& p, const std::string& symbol, const AxiomOptions& options) {
  Relation out = relation_union(p, symbol);
  if (options.neutrality_universe) {
    const auto& extra = options.neutrality_universe->extra(symbol);
    out.insert(extra.begin(), extra.end());
  }
  return out;
}

}  // namespace

AxiomReport check_unanimity(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  AxiomReport r = start(Axiom::U, space);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    const auto outcome = aggregate(rule, p, options.limits);
    ++r.profiles_checked;
    for (const auto& [symbol, arity] : p.schema().symbols()) {
      for (const auto& t : relation_intersection(p, symbol)) {
        for (const auto& w : outcome) {
          if (!w.relation(symbol).count(t)) {
            return fail(r, {{p}, symbol, {t}, {}, {}, "unanimous tuple missing from a winner"});
          }
        }
      }
    }
  }
  return r;
}

AxiomReport check_groundedness(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  AxiomReport r = start(Axiom::G, space);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    const auto outcome = aggregate(rule, p, options.limits);
    ++r.profiles_checked;
    for (const auto& [symbol, arity] : p.schema().symbols()) {
      const Relation u = relation_union(p, symbol);
      for (const auto& w : outcome) {
        for (const auto& t : w.relation(symbol)) {
          if (!u.count(t)) return fail(r, {{p}, symbol, {t}, {}, {}, "winner contains a tuple no agent holds"});
        }
      }
    }
  }
  return r;
}

AxiomReport check_anonymity(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  AxiomReport r = start(Axiom::A, space);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    const std::size_t n = p.agents();
    const auto base = aggregate(rule, p, options.limits);
    ++r.profiles_checked;
    std::vector<std::vector<std::size_t>> orders;
    std::vector<std::size_t> pi(n);
    std::iota(pi.begin(), pi.end(), 1);
    if (n <= 6) {
      while (std::next_permutation(pi.begin(), pi.end())) orders.push_back(pi);
    } else {
      // A transposition and a full cycle generate every permutation.
      std::swap(pi[0], pi[1]);
      orders.push_back(pi);
      std::swap(pi[0], pi[1]);
      std::rotate(pi.begin(), pi.begin() + 1, pi.end());
      orders.push_back(pi);
    }
    for (const auto& order : orders) {
      std::vector<Instance> members;
      for (auto a : order) members.push_back(p.agent(a));
      const Profile permuted(std::move(members));
      if (!(aggregate(rule, permuted, options.limits) == base)) {
        return fail(r, {{p}, "", {}, order, {}, "outcome changes when agents are reordered"});
      }
    }
  }
  return r;
}

AxiomReport check_independence(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  AxiomReport r = start(Axiom::I, space);
  // Every (symbol, tuple, support) triple must be accepted uniformly across
  // all profiles and winners, so one pass with a map of first sightings
  // covers all ordered pairs.
  struct Seen {
    std::size_t profile;
    bool accepted;
  };
  std::map<std::tuple<std::string, Tuple, std::uint64_t>, Seen> seen;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    const auto outcome = aggregate(rule, p, options.limits);
    ++r.profiles_checked;
    for (const auto& [symbol, arity] : p.schema().symbols()) {
      for (const auto& [t, s] : supports(p, symbol)) {
        for (const auto& w : outcome) {
          const bool accepted = w.relation(symbol).count(t) > 0;
          auto [it, inserted] = seen.emplace(std::make_tuple(symbol, t, s.mask()), Seen{i, accepted});
          if (!inserted && it->second.accepted != accepted) {
            AxiomWitness wit{{space.at(it->second.profile), p}, symbol, {t}, {}, {},
                             "tuple with support " + s.to_string() + " accepted in one profile but not the other"};
            return fail(r, std::move(wit));
          }
        }
      }
    }
  }
  return r;
}

namespace {

AxiomReport check_neutrality(Axiom axiom, const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  AxiomReport r = start(axiom, space);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    const std::size_t n = p.agents();
    const auto outcome = aggregate(rule, p, options.limits);
    ++r.profiles_checked;
    for (const auto& [symbol, arity] : p.schema().symbols()) {
      std::map<std::uint64_t, std::vector<Tuple>> by_support;
      for (const auto& t : neutrality_tuples(p, symbol, options)) {
        by_support[support(p, symbol, t).mask()].push_back(t);
      }
      for (const auto& w : outcome) {
        const Relation& acc = w.relation(symbol);
        for (const auto& [mask, tuples] : by_support) {
          if (axiom == Axiom::NPos) {
            for (std::size_t k = 1; k < tuples.size(); ++k) {
              if (acc.count(tuples[0]) != acc.count(tuples[k])) {
                return fail(r, {{p}, symbol, {tuples[0], tuples[k]}, {}, {},
                                "tuples with equal support " + SupportSet(mask).to_string() + " treated differently"});
              }
            }
          } else {
            const std::uint64_t comp = SupportSet(mask).complement(n).mask();
            auto it = by_support.find(comp);
            if (it == by_support.end()) continue;
            for (const auto& t : tuples) {
              for (const auto& t2 : it->second) {
                if ((acc.count(t) > 0) == (acc.count(t2) > 0)) {
                  return fail(r, {{p}, symbol, {t, t2}, {}, {},
                                  "tuples with complementary supports " + SupportSet(mask).to_string() + " and " +
                                      SupportSet(comp).to_string() + " both " +
                                      (acc.count(t) ? "accepted" : "rejected")});
                }
              }
            }
          }
        }
      }
    }
  }
  return r;
}

std::vector<ValueMap> default_permutations(const Profile& p) {
  std::vector<Value> dom;
  for (const auto& v : active_domain(p)) {
    if (!v.is_null()) dom.push_back(v);
  }
  std::vector<ValueMap> out;
  for (std::size_t k = 0; k + 1 < dom.size(); ++k) {
    ValueMap rho;
    rho[dom[k]] = dom[k + 1];
    rho[dom[k + 1]] = dom[k];
    out.push_back(std::move(rho));
  }
  if (dom.size() > 2) {
    ValueMap rho;
    for (std::size_t k = 0; k < dom.size(); ++k) rho[dom[k]] = dom[(k + 1) % dom.size()];
    out.push_back(std::move(rho));
  }
  return out;
}

void check_bijection(const ValueMap& rho) {
  std::set<Value> image;
  for (const auto& [from, to] : rho) {
    if (from.is_null() != to.is_null()) throw ValidationError("permutation must fix null");
    image.insert(to);
  }
  std::set<Value> keys;
  for (const auto& [from, to] : rho) keys.insert(from);
  if (image != keys) throw ValidationError("permutation is not a bijection of its support");
}

}  // namespace

AxiomReport check_pos_neutrality(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  return check_neutrality(Axiom::NPos, rule, space, options);
}

AxiomReport check_neg_neutrality(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  return check_neutrality(Axiom::NNeg, rule, space, options);
}

AxiomReport check_perm_neutrality(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  AxiomReport r = start(Axiom::NPerm, space);
  for (const auto& rho : options.permutations) check_bijection(rho);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    const auto outcome = aggregate(rule, p, options.limits);
    ++r.profiles_checked;
    const auto perms = options.permutations.empty() ? default_permutations(p) : options.permutations;
    for (const auto& rho : perms) {
      std::vector<Instance> members;
      for (const auto& d : p) members.push_back(permute_partial(d, rho));
      const auto moved = aggregate(rule, Profile(std::move(members)), options.limits);
      std::vector<Instance> expected;
      for (const auto& w : outcome) expected.push_back(permute_partial(w, rho));
      if (!(moved == AggregationOutcome(std::move(expected)))) {
        return fail(r, {{p}, "", {}, {}, rho, "aggregating the permuted profile differs from permuting the outcome"});
      }
    }
  }
  return r;
}

AxiomReport check_monotonicity(const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  AxiomReport r = start(Axiom::M, space);
  const std::size_t size = space.size();
  std::vector<Profile> profiles;
  std::vector<AggregationOutcome> outcomes;
  profiles.reserve(size);
  outcomes.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    profiles.push_back(space.at(i));
    outcomes.push_back(aggregate(rule, profiles.back(), options.limits));
  }
  r.profiles_checked = size;

  std::vector<std::size_t> bases(size);
  std::iota(bases.begin(), bases.end(), 0);
  if (size > 0 && size * size > options.max_pairs) {
    const std::size_t k = std::max<std::size_t>(1, options.max_pairs / size);
    std::mt19937_64 gen(options.seed);
    std::vector<std::size_t> picked;
    for (std::size_t j = 0; j < k; ++j) picked.push_back(static_cast<std::size_t>(gen() % size));
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    bases = std::move(picked);
  }

  for (std::size_t bi : bases) {
    const Profile& p = profiles[bi];
    const std::size_t n = p.agents();
    for (const auto& [symbol, arity] : p.schema().symbols()) {
      Relation accepted;
      for (const auto& w : outcomes[bi]) accepted.insert(w.relation(symbol).begin(), w.relation(symbol).end());
      for (const auto& u : accepted) {
        for (std::size_t j = 0; j < size; ++j) {
          if (j == bi) continue;
          const Profile& q = profiles[j];
          if (q.agents() != n) continue;
          bool extension = true;
          for (std::size_t a = 0; a < n && extension; ++a) {
            const Relation& before = p[a].relation(symbol);
            const Relation& after = q[a].relation(symbol);
            if (before == after) continue;
            extension = after.count(u) && is_subset(before, after);
          }
          if (!extension) continue;
          for (const auto& w : outcomes[j]) {
            if (!w.relation(symbol).count(u)) {
              return fail(r, {{p, q}, symbol, {u}, {}, {}, "accepted tuple dropped after its support grew"});
            }
          }
        }
      }
    }
  }
  return r;
}

AxiomReport check_axiom(Axiom axiom, const Rule& rule, const ProfileSpace& space, const AxiomOptions& options) {
  switch (axiom) {
    case Axiom::U: return check_unanimity(rule, space, options);
    case Axiom::G: return check_groundedness(rule, space, options);
    case Axiom::A: return check_anonymity(rule, space, options);
    case Axiom::I: return check_independence(rule, space, options);
    case Axiom::NPos: return check_pos_neutrality(rule, space, options);
    case Axiom::NNeg: return check_neg_neutrality(rule, space, options);
    case Axiom::NPerm: return check_perm_neutrality(rule, space, options);
    case Axiom::M: return check_monotonicity(rule, space, options);
  }
  throw Error("unknown axiom");
}

AxiomReport replay(Axiom axiom, const Rule& rule, const AxiomWitness& witness, const AxiomOptions& options) {
  AxiomOptions o = options;
  if (axiom == Axiom::NPerm && !witness.permutation.empty()) o.permutations = {witness.permutation};
  ProfileSpace space = ProfileSpace::of(witness.profiles);
  space.description = "witness replay";
  return check_axiom(axiom, rule, space, o);
}

bool QuotaLemmaReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const QuotaLemmaRow& r) { return r.anonymity && r.independence && r.monotonicity; });
}

QuotaLemmaReport verify_quota_lemma(const std::vector<Rule>& family, const ProfileSpace& space,
                                    const AxiomOptions& options) {
  QuotaLemmaReport report;
  report.note =
      "checked: each listed rule satisfies A, I and M on the space; "
      "the converse (A, I and M imply a quota rule) quantifies over all aggregators and is left-to-right not machine-checked";
  for (const auto& rule : family) {
    QuotaLemmaRow row;
    row.rule = to_string(rule);
    row.anonymity = check_anonymity(rule, space, options).passed;
    row.independence = check_independence(rule, space, options).passed;
    row.monotonicity = check_monotonicity(rule, space, options).passed;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace dbagg
