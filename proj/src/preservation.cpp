#include "dbagg/preservation.hpp"

#include <algorithm>
#include <iterator>

namespace dbagg {

AnswerProfile::AnswerProfile(std::vector<AnswerSet> answers) : answers_(std::move(answers)) {
  if (answers_.empty()) throw ValidationError("answer profile needs at least one agent");
  for (const auto& a : answers_) {
    if (a.width != answers_.front().width) {
      throw ValidationError("answer sets of width " + std::to_string(answers_.front().width) + " and " +
                            std::to_string(a.width) + " in one profile");
    }
    for (const auto& t : a.tuples) {
      if (t.size() != a.width) throw ValidationError("answer tuple " + to_string(t) + " does not match its width");
    }
  }
}

AnswerProfile answer_profile(const Profile& p, const Query& q, const std::set<Value>& range) {
  std::vector<AnswerSet> out;
  out.reserve(p.agents());
  for (const auto& d : p) out.push_back(answer(d, q, range));
  return AnswerProfile(std::move(out));
}

namespace {

Instance wrap(const Schema& schema, const AnswerSet& a) {
  Instance d(schema);
  if (a.width == 0) {
    if (!a.tuples.empty()) d.insert(kAnswerSymbol, {Value::constant(kTrueMarker)});
  } else {
    d.set_relation(kAnswerSymbol, a.tuples);
  }
  return d;
}

AnswerSet unwrap(const Instance& d, std::size_t width) {
  AnswerSet a;
  a.width = width;
  const auto& rel = d.relation(kAnswerSymbol);
  if (width == 0) {
    if (!rel.empty()) a.tuples.insert(Tuple{});
  } else {
    a.tuples = rel;
  }
  return a;
}

std::set<AnswerSet> induced(const Rule& rule, const AnswerProfile& ap, const AggregationLimits& limits) {
  const Schema schema({{kAnswerSymbol, std::max<std::size_t>(ap.width(), 1)}});
  std::vector<Instance> wrapped;
  for (const auto& a : ap.answers()) wrapped.push_back(wrap(schema, a));
  std::set<AnswerSet> out;
  for (const auto& w : aggregate(rule, Profile(std::move(wrapped)), limits)) out.insert(unwrap(w, ap.width()));
  return out;
}

std::set<Value> range_for(const Profile& p, const AggregationOutcome& winners, const Query& q) {
  std::set<Value> r = active_domain(p);
  for (const auto& w : winners) {
    auto a = active_domain(w);
    r.insert(a.begin(), a.end());
  }
  auto c = constants(q.body);
  r.insert(c.begin(), c.end());
  return r;
}

bool subset(const AnswerSet& a, const AnswerSet& b) {
  return std::includes(b.tuples.begin(), b.tuples.end(), a.tuples.begin(), a.tuples.end());
}

std::string describe(const std::set<AnswerSet>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ", ";
    first = false;
    out += to_string(a);
  }
  return out + "}";
}

// Everything a check needs about one (profile, query) pair, with the winners
// computed by the caller so sweeps aggregate each profile once.
struct Pair {
  const Rule& rule;
  const Query& q;
  const Profile& p;
  const AggregationOutcome& winners;
  const PreservationOptions& options;

  AnswerSet on(const Instance& d, const std::set<Value>& shared) const {
    return options.range == AnswerRange::Shared ? answer(d, q, shared) : answer(d, q);
  }

  std::set<Value> shared() const {
    return options.range == AnswerRange::Shared ? range_for(p, winners, q) : std::set<Value>{};
  }

  AnswerProfile agents(const std::set<Value>& shared) const {
    std::vector<AnswerSet> out;
    for (const auto& d : p) out.push_back(on(d, shared));
    return AnswerProfile(std::move(out));
  }

  std::vector<AnswerSet> left(const std::set<Value>& shared) const {
    std::vector<AnswerSet> out;
    for (const auto& w : winners) out.push_back(on(w, shared));
    return out;
  }

  CommutationReport commutes() const {
    const auto w = shared();
    CommutationReport r;
    r.rule = to_string(rule);
    r.query = to_string(q);
    const auto l = left(w);
    r.left.insert(l.begin(), l.end());
    r.right = induced(rule, agents(w), options.limits);
    r.commutes = r.left == r.right;
    if (!r.commutes) {
      std::set<AnswerSet> lo, ro;
      std::set_difference(r.left.begin(), r.left.end(), r.right.begin(), r.right.end(), std::inserter(lo, lo.end()));
      std::set_difference(r.right.begin(), r.right.end(), r.left.begin(), r.left.end(), std::inserter(ro, ro.end()));
      r.diff = "left only: " + describe(lo) + "; right only: " + describe(ro);
    }
    return r;
  }

  bool unanimity() const {
    const auto w = shared();
    const auto ap = agents(w);
    AnswerSet common = ap.answers().front();
    for (const auto& a : ap.answers()) {
      Relation keep;
      std::set_intersection(common.tuples.begin(), common.tuples.end(), a.tuples.begin(), a.tuples.end(),
                            std::inserter(keep, keep.end()));
      common.tuples = std::move(keep);
    }
    const auto l = left(w);
    return std::all_of(l.begin(), l.end(), [&](const AnswerSet& a) { return subset(common, a); });
  }

  bool groundedness() const {
    const auto w = shared();
    AnswerSet all;
    all.width = q.head.size();
    const auto ap = agents(w);
    for (const auto& a : ap.answers()) all.tuples.insert(a.tuples.begin(), a.tuples.end());
    const auto l = left(w);
    return std::all_of(l.begin(), l.end(), [&](const AnswerSet& a) { return subset(a, all); });
  }

  bool ave() const {
    const auto w = shared();
    const auto members = ave_answers(agents(w));
    const auto l = left(w);
    return std::all_of(l.begin(), l.end(), [&](const AnswerSet& a) {
      return std::any_of(members.begin(), members.end(), [&](const AnswerSet& m) { return subset(a, m); });
    });
  }
};

}  // namespace

std::set<AnswerSet> induced_aggregate(const Rule& rule, const AnswerProfile& ap, const AggregationLimits& limits) {
  return induced(rule, ap, limits);
}

CommutationReport check_commutes(const Rule& rule, const Query& q, const Profile& p,
                                 const PreservationOptions& options) {
  const auto winners = aggregate(rule, p, options.limits);
  return Pair{rule, q, p, winners, options}.commutes();
}

bool check_unanimity_containment(const Query& q, const Rule& rule, const Profile& p,
                                 const PreservationOptions& options) {
  const auto winners = aggregate(rule, p, options.limits);
  return Pair{rule, q, p, winners, options}.unanimity();
}

bool check_groundedness_containment(const Query& q, const Rule& rule, const Profile& p,
                                    const PreservationOptions& options) {
  const auto winners = aggregate(rule, p, options.limits);
  return Pair{rule, q, p, winners, options}.groundedness();
}

std::set<AnswerSet> ave_answers(const AnswerProfile& ap) {
  const auto& a = ap.answers();
  std::vector<std::size_t> cost(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) cost[i] += symmetric_distance(a[i].tuples, a[j].tuples);
  }
  const auto best = *std::min_element(cost.begin(), cost.end());
  std::set<AnswerSet> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (cost[i] == best) out.insert(a[i]);
  }
  return out;
}

bool check_ave_containment(const Query& q, const Rule& rule, const Profile& p, const PreservationOptions& options) {
  const auto winners = aggregate(rule, p, options.limits);
  return Pair{rule, q, p, winners, options}.ave();
}

SweepReport sweep(PreservationCheck check, const Rule& rule, const std::vector<Query>& queries,
                  const ProfileSpace& space, const PreservationOptions& options) {
  SweepReport r;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    const auto winners = aggregate(rule, p, options.limits);
    for (const auto& q : queries) {
      const Pair pair{rule, q, p, winners, options};
      ++r.pairs;
      bool ok = true;
      std::optional<CommutationReport> report;
      switch (check) {
        case PreservationCheck::Commutes:
          report = pair.commutes();
          ok = report->commutes;
          break;
        case PreservationCheck::UnanimityContainment:
          ok = pair.unanimity();
          break;
        case PreservationCheck::GroundednessContainment:
          ok = pair.groundedness();
          break;
        case PreservationCheck::AveContainment:
          ok = pair.ave();
          break;
      }
      if (ok) continue;
      if (r.failures++ == 0) {
        r.profile = p;
        r.query = q;
        r.first = std::move(report);
      }
    }
  }
  return r;
}

}  // namespace dbagg
