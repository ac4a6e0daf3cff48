#include "dbagg/lifting.hpp"

#include <algorithm>

#include "dbagg/axioms.hpp"

namespace dbagg {

namespace {

template <class Holds>
LiftReport search(const Rule& rule, const std::string& label, const ProfileSpace& space, const LiftOptions& options,
                  const Holds& holds) {
  LiftReport r;
  r.rule = to_string(rule);
  r.constraint = label;
  r.space = space.description;
  std::map<Instance, bool> memo;
  auto member_holds = [&](const Instance& d) {
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    const bool v = holds(d);
    if (memo.size() < 100000) memo.emplace(d, v);
    return v;
  };
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    if (!std::all_of(p.begin(), p.end(), member_holds)) continue;
    ++r.profiles_considered;
    const auto outcome = aggregate(rule, p, options.limits);
    std::optional<Instance> bad;
    bool any_good = false;
    for (const auto& w : outcome) {
      if (holds(w)) {
        any_good = true;
      } else if (!bad) {
        bad = w;
      }
    }
    const bool violated = options.reading == WinnerReading::Every ? bad.has_value() : !any_good;
    if (violated) {
      r.lifted = false;
      r.profile = p;
      r.winner = bad;
      return r;
    }
  }
  return r;
}

const rules::DistanceBased* as_distance(const Rule& rule) { return std::get_if<rules::DistanceBased>(&rule.kind); }

}  // namespace

LiftReport check_lifting(const Rule& rule, const Formula& phi, const ProfileSpace& space, const LiftOptions& options) {
  if (!free_variables(phi).empty()) throw ValidationError("lifting is defined for sentences; formula has free variables");
  if (const auto* d = as_distance(rule)) {
    if (std::find(d->formulas.begin(), d->formulas.end(), phi) != d->formulas.end()) {
      LiftReport r;
      r.rule = to_string(rule);
      r.constraint = to_string(phi);
      r.space = space.description;
      r.by_construction = true;
      return r;
    }
  }
  return search(rule, to_string(phi), space, options, [&](const Instance& d) { return is_true(d, phi); });
}

LiftReport check_lifting(const Rule& rule, const Constraint& c, const ProfileSpace& space, const LiftOptions& options) {
  if (const auto* d = as_distance(rule)) {
    if (std::find(d->constraints.begin(), d->constraints.end(), c) != d->constraints.end()) {
      LiftReport r;
      r.rule = to_string(rule);
      r.constraint = to_string(c);
      r.space = space.description;
      r.by_construction = true;
      return r;
    }
  }
  return search(rule, to_string(c), space, options, [&](const Instance& d) { return check(d, c); });
}

std::size_t PredictionReport::disagreements() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.agrees(); }));
}

PredictionReport verify_prop1(std::size_t n, const FunctionalDependency& fd, const ProfileSpace& space,
                              const LiftOptions& options) {
  PredictionReport report;
  for (std::size_t q = 1; q <= n; ++q) {
    const Rule rule = quota_rule(static_cast<int>(q));
    PredictionRow row;
    row.rule = to_string(rule);
    row.predicted = 2 * q > n;
    row.observed = check_lifting(rule, Constraint{fd}, space, options);
    report.rows.push_back(std::move(row));
  }
  return report;
}

Prop2Report verify_prop2(const Rule& rule, const ValueConstraint& vc, const ProfileSpace& space,
                         const LiftOptions& options) {
  Prop2Report r;
  AxiomOptions ax;
  ax.limits = options.limits;
  r.grounded = check_groundedness(rule, space, ax).passed;
  r.lifting = check_lifting(rule, Constraint{vc}, space, options);
  return r;
}

PredictionReport verify_prop3(std::size_t n, const ReferentialConstraint& rc, int source_quota,
                              const ProfileSpace& space, const LiftOptions& options) {
  PredictionReport report;
  for (std::size_t q2 = 1; q2 <= n; ++q2) {
    QuotaSpec spec;
    spec.uniform = source_quota;
    spec.per_symbol[rc.target] = static_cast<int>(q2);
    if (rc.source != rc.target) spec.per_symbol[rc.source] = source_quota;
    const Rule rule = quota_rule(spec);
    PredictionRow row;
    row.rule = to_string(rule);
    row.predicted = q2 == 1;
    row.observed = check_lifting(rule, Constraint{rc}, space, options);
    report.rows.push_back(std::move(row));
  }
  return report;
}

bool LiteralReport::consistent() const {
  if (!(unanimous && grounded)) return true;
  return std::all_of(literals.begin(), literals.end(), [](const LiftReport& r) { return r.lifted; });
}

LiteralReport check_lit_theorem(const Rule& rule, const std::vector<Formula>& literals, const ProfileSpace& space,
                                const LiftOptions& options) {
  for (const auto& l : literals) {
    const auto flags = classify(l);
    if (!flags.lit_pos && !flags.lit_neg) {
      throw ValidationError("'" + to_string(l) + "' is not a ground literal");
    }
  }
  LiteralReport r;
  AxiomOptions ax;
  ax.limits = options.limits;
  r.unanimous = check_unanimity(rule, space, ax).passed;
  r.grounded = check_groundedness(rule, space, ax).passed;
  for (const auto& l : literals) r.literals.push_back(check_lifting(rule, l, space, options));
  return r;
}

DictatorshipReport is_generalized_dictatorship(const Rule& rule, const ProfileSpace& space,
                                               const AggregationLimits& limits) {
  DictatorshipReport r;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    const auto outcome = aggregate(rule, p, limits);
    std::optional<std::size_t> chosen;
    for (const auto& w : outcome) {
      std::optional<std::size_t> agent;
      for (std::size_t a = 0; a < p.agents() && !agent; ++a) {
        if (p[a] == w) agent = a + 1;
      }
      if (!agent) {
        r.generalized_dictatorship = false;
        r.counterexample = p;
        return r;
      }
      if (!chosen) chosen = agent;
    }
    r.g.push_back(*chosen);
  }
  return r;
}

Rule permuted_dictatorship_rule(ValueMap rho, std::size_t agent) {
  std::string name = "permuted-dictator:" + std::to_string(agent) + " rho=";
  for (const auto& [from, to] : rho) name += "(" + from.to_string() + "->" + to.to_string() + ")";
  return custom_rule(name, [rho = std::move(rho), agent](const Profile& p) {
    return std::vector<Instance>{permute_partial(p.agent(agent), rho)};
  });
}

}  // namespace dbagg
