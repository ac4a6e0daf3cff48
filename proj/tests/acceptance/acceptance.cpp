// Acceptance run: one PASS/FAIL line per criterion, detail lines indented.
//
//   acceptance        run every criterion
//   acceptance 7 9    run criteria 7 and 9
//
// Exit status is 0 only when every selected criterion passes.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dbagg/axioms.hpp"
#include "dbagg/constraints.hpp"
#include "dbagg/io.hpp"
#include "dbagg/lifting.hpp"
#include "dbagg/oracle.hpp"
#include "dbagg/preservation.hpp"
#include "testkit.hpp"

using namespace dbagg;
using testkit::inst;
using testkit::row;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok    " : "wrong ") + what);
  }
  void note(const std::string& what) { notes.push_back("      " + what); }
};

std::string str(std::size_t n) { return std::to_string(n); }

ProfileSpace exhaustive(const Schema& schema, std::size_t domain, std::size_t max_tuples, std::size_t agents,
                        std::vector<Constraint> constraints = {}, std::set<std::string> shared = {}) {
  SpaceSpec s;
  s.schema = schema;
  s.domain = letter_domain(domain);
  s.max_tuples = max_tuples;
  s.agents = agents;
  s.constraints = std::move(constraints);
  s.shared_symbols = std::move(shared);
  auto space = enum_profiles(s);
  space.description = s.describe();
  return space;
}

std::vector<Query> generated(const Schema& schema, Fragment fragment, std::size_t count, std::uint64_t seed) {
  std::vector<Query> out;
  for (const auto& f : enum_formulas(schema, fragment, 3, seed, count)) out.push_back(query_of(f));
  return out;
}

// Support counts computed straight from the member relations.
std::map<Tuple, std::size_t> counts(const Profile& p, const std::string& symbol) {
  std::map<Tuple, std::size_t> out;
  for (const auto& d : p) {
    for (const auto& t : d.relation(symbol)) ++out[t];
  }
  return out;
}

Relation with_quota(const Profile& p, const std::string& symbol, std::size_t q) {
  Relation out;
  for (const auto& [t, c] : counts(p, symbol)) {
    if (c >= q) out.insert(t);
  }
  return out;
}

// A binary relation is functional when no first value maps to two second values.
bool functional(const Relation& r) {
  std::map<Value, Value> seen;
  for (const auto& t : r) {
    auto [it, fresh] = seen.emplace(t[0], t[1]);
    if (!fresh && !(it->second == t[1])) return false;
  }
  return true;
}

// Every P1 tuple's second value starts some P2 tuple.
bool referenced(const Relation& p1, const Relation& p2) {
  std::set<Value> heads;
  for (const auto& t : p2) heads.insert(t[0]);
  for (const auto& t : p1) {
    if (!heads.count(t[1])) return false;
  }
  return true;
}

std::string relation_text(const Relation& r) {
  std::string out = "{";
  for (const auto& t : r) out += (out.size() > 1 ? ", " : "") + to_string(t);
  return out + "}";
}

Outcome golden_tables() {
  Outcome o;
  const auto doc = load_document(testkit::fixture("example3.json"));
  const Profile& p = doc.profile;
  const Schema s = p.schema();
  const char* cs = testkit::kCS;
  const char* me = testkit::kME;

  const std::map<std::string, Instance> printed{
      {"intersection", inst(s, {{"Students", {{"10", "Steve", "History"}, {"11", "Carole", cs}}},
                                {"Staff", {{"01", "Rose", me}}}})},
      {"union", inst(s, {{"Students",
                          {{"10", "Steve", "History"}, {"11", "Carole", cs}, {"12", "Derek", me}, {"13", "Marc", "History"}}},
                         {"Staff",
                          {{"01", "Rose", me}, {"02", "Audrey", me}, {"02", "Aubrey", me}, {"03", "Karl", "History"},
                           {"04", "Carl", "History"}}}})},
      {"majority", inst(s, {{"Students", {{"10", "Steve", "History"}, {"11", "Carole", cs}, {"12", "Derek", me}}},
                            {"Staff", {{"01", "Rose", me}}}})},
      {"avg-voter", p[0]},
      {"merge", inst(s, {{"Students", {{"10", "Steve", "History"}, {"11", "Carole", cs}}},
                         {"Staff", {{"01", "Rose", me}, {"02", "null", me}, {"null", "null", "History"}}}})},
  };
  for (const auto& [name, expected] : printed) {
    const auto outcome = aggregate(parse_rule(name), p);
    const bool ok = outcome.resolute() && outcome.sole() == expected;
    o.require(ok, name + " table");
    if (ok || !outcome.resolute()) continue;
    for (const auto& [symbol, arity] : s.symbols()) {
      const Relation& got = outcome.sole().relation(symbol);
      const Relation& want = expected.relation(symbol);
      if (got == want) continue;
      Relation extra, missing;
      std::set_difference(got.begin(), got.end(), want.begin(), want.end(), std::inserter(extra, extra.end()));
      std::set_difference(want.begin(), want.end(), got.begin(), got.end(), std::inserter(missing, missing.end()));
      o.note(symbol + ": computed but not printed " + relation_text(extra) + ", printed but not computed " +
             relation_text(missing));
    }
  }
  // The printed majority table drops two staff rows that two of three sources agree on.
  for (const char* key : {"02", "03"}) {
    for (const auto& [t, c] : counts(p, "Staff")) {
      if (t[0] == Value::constant(key) && 2 * c > p.agents()) o.note(to_string(t) + " has support " + str(c) + " of 3");
    }
  }
  return o;
}

Outcome paradox() {
  Outcome o;
  const auto doc = load_document(testkit::fixture("example4.json"));
  const Formula phi = parse_formula("forall x. (P(x) -> exists y. Q(x, y))", doc.profile.schema());
  const auto out = aggregate(majority_rule(), doc.profile);
  o.require(out.resolute() && out.sole() == inst(doc.profile.schema(), {{"P", {{"a"}}}}), "majority gives {P(a)}");
  for (std::size_t i = 0; i < doc.profile.agents(); ++i) {
    o.require(testkit::NaiveEvaluator(doc.profile[i]).holds(phi, {}), "D" + str(i + 1) + " satisfies the constraint");
  }
  o.require(!testkit::NaiveEvaluator(out.sole()).holds(phi, {}), "the aggregate violates it");
  o.require(!check_lifting(majority_rule(), phi, ProfileSpace::of({doc.profile})).lifted, "lifting check reports it");
  return o;
}

Outcome example5() {
  Outcome o;
  const auto one = load_document(testkit::fixture("example5_exists.json"));
  const auto two = load_document(testkit::fixture("example5_forall.json"));
  const Query exists = parse_query("ans(x) :- exists y. P(x, y)", one.profile.schema());
  const Query forall = parse_query("ans(x) :- forall y. P(x, y)", two.profile.schema());
  const AnswerSet none{1, {}};
  const AnswerSet a{1, testkit::rel({{"a"}})};

  const auto r1 = check_commutes(intersection_rule(), exists, one.profile);
  o.require(r1.left == std::set<AnswerSet>{none}, "exists: answer on the intersection is empty");
  o.require(r1.right == std::set<AnswerSet>{a}, "exists: intersection of answers is {a}");
  const auto r2 = check_commutes(intersection_rule(), forall, two.profile);
  o.require(r2.right == std::set<AnswerSet>{none}, "forall: intersection of answers is empty");
  o.require(r2.left == std::set<AnswerSet>{a}, "forall: answer on the intersection is {a}");
  return o;
}

Outcome fd_quotas() {
  Outcome o;
  const Schema s{{"P", 2}};
  const FunctionalDependency fd{"P", {1}, {2}};
  const std::size_t n = 3;
  const auto space = exhaustive(s, 3, 3, n, {fd});
  o.note(space.description + ": " + str(space.size()) + " profiles");
  const auto report = verify_prop1(n, fd, space);

  std::vector<bool> oracle(n + 1, true);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    for (std::size_t q = 1; q <= n; ++q) {
      if (oracle[q] && !functional(with_quota(p, "P", q))) oracle[q] = false;
    }
  }
  o.require(report.rows.size() == n, "one row per quota");
  for (std::size_t q = 1; q <= n && q <= report.rows.size(); ++q) {
    const auto& r = report.rows[q - 1];
    const bool predicted = 2 * q > n;
    o.require(r.predicted == predicted && r.observed.lifted == predicted && oracle[q] == predicted,
              "q=" + str(q) + ": predicted " + (predicted ? "lifted" : "not lifted") + ", engine " +
                  (r.observed.lifted ? "lifted" : "not lifted") + ", oracle " + (oracle[q] ? "lifted" : "not lifted"));
  }
  o.require(report.disagreements() == 0, "zero disagreements");
  return o;
}

Outcome rc_quotas() {
  Outcome o;
  const Schema s{{"P1", 2}, {"P2", 2}};
  const ReferentialConstraint rc{"P1", "P2", 1};
  std::size_t disagreements = 0;
  for (const std::size_t n : {2u, 3u}) {
    const auto space = exhaustive(s, 3, n == 2 ? 2 : 1, n, {rc});
    o.note(space.description + ": " + str(space.size()) + " profiles");
    for (std::size_t source = 1; source <= n; ++source) {
      const auto report = verify_prop3(n, rc, static_cast<int>(source), space);
      for (std::size_t q2 = 1; q2 <= n; ++q2) {
        bool oracle = true;
        for (std::size_t i = 0; i < space.size() && oracle; ++i) {
          const Profile p = space.at(i);
          oracle = referenced(with_quota(p, "P1", source), with_quota(p, "P2", q2));
        }
        const auto& row = report.rows.at(q2 - 1);
        const bool predicted = q2 == 1;
        const bool ok = row.predicted == predicted && row.observed.lifted == predicted && oracle == predicted;
        if (!ok) {
          ++disagreements;
          o.note("n=" + str(n) + " q_P1=" + str(source) + " q_P2=" + str(q2) + ": engine " +
                 (row.observed.lifted ? "lifted" : "not lifted") + ", oracle " + (oracle ? "lifted" : "not lifted"));
        }
      }
    }
  }
  o.require(disagreements == 0, "zero disagreements over n in {2, 3} and every source quota");
  return o;
}

std::vector<Rule> catalog(std::size_t n, const TupleUniverse& universe) {
  std::vector<Rule> out{union_rule(),          intersection_rule(),  majority_rule(),
                        trivial_top_rule(),    trivial_zero_rule(universe), distance_rule(),
                        average_voter_rule(),  relationwise_average_voter_rule(), merge_rule(),
                        dictatorship_rule(1),  oligarchy_rule({1, 2})};
  for (std::size_t q = 1; q <= n; ++q) out.push_back(quota_rule(static_cast<int>(q)));
  return out;
}

Outcome value_constraints() {
  Outcome o;
  const Schema s{{"P", 2}, {"Q", 1}, {"Pv", 1}};
  std::vector<ValueConstraint> generated_constraints;
  for (const auto& [symbol, arity] : s.symbols()) {
    if (symbol == "Pv") continue;
    for (std::size_t k = 1; k <= arity; ++k) generated_constraints.push_back({symbol, k, "Pv"});
  }
  TupleUniverse universe;
  universe.extras["P"].insert(row({"a", "c"}));
  universe.extras["Q"].insert(row({"c"}));
  const std::size_t n = 2;
  std::size_t grounded = 0, counterexamples = 0, checked = 0;
  for (const auto& vc : generated_constraints) {
    const auto space = exhaustive(s, 2, 2, n, {vc}, {"Pv"});
    for (const auto& rule : catalog(n, universe)) {
      const auto r = verify_prop2(rule, vc, space);
      ++checked;
      if (!r.grounded) continue;
      ++grounded;
      if (!r.lifting.lifted) {
        ++counterexamples;
        o.note(to_string(rule) + " is grounded but does not lift " + to_string(Constraint{vc}));
      }
    }
  }
  o.note(str(generated_constraints.size()) + " value constraints x " + str(checked / generated_constraints.size()) +
         " rules, " + str(grounded) + " grounded pairs");
  o.require(grounded > 0 && counterexamples == 0, "every grounded rule lifts every value constraint");
  return o;
}

Outcome distance_majority() {
  Outcome o;
  SpaceSpec s;
  s.schema = Schema{{"P", 2}, {"R", 1}};
  s.domain = letter_domain(3);
  s.max_tuples = 3;
  s.agents = 3;
  s.mode = SpaceMode::Sampled;
  s.seed = 2024;
  s.count = 1000;
  const auto space = enum_profiles(s);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Profile p = space.at(i);
    Instance majority(p.schema());
    for (const auto& [symbol, arity] : p.schema().symbols()) majority.set_relation(symbol, with_quota(p, symbol, 2));
    const auto winners = aggregate(distance_rule(), p);
    if (!(winners.resolute() && winners.sole() == majority)) {
      if (mismatches++ == 0) o.note("first mismatch:\n" + serialize(p));
    }
  }
  o.note(str(space.size()) + " sampled profiles, seed 2024");
  o.require(space.size() == 1000 && mismatches == 0, "distance winners equal the majority outcome");
  return o;
}

Outcome axiom_matrix() {
  Outcome o;
  const auto space = exhaustive(Schema{{"P", 2}}, 2, 2, 3);
  o.note(space.description + ": " + str(space.size()) + " profiles");
  AxiomOptions options;
  TupleUniverse universe;
  for (const auto& a : letter_domain(2)) {
    for (const auto& b : letter_domain(2)) universe.extras["P"].insert(Tuple{a, b});
  }
  options.neutrality_universe = universe;

  const std::vector<Axiom> positive{Axiom::U, Axiom::G, Axiom::A, Axiom::I, Axiom::NPos, Axiom::NPerm, Axiom::M};
  for (const Rule& rule : {union_rule(), intersection_rule(), majority_rule()}) {
    std::string failed;
    for (const Axiom a : positive) {
      if (!check_axiom(a, rule, space, options).passed) failed += " " + to_string(a);
    }
    o.require(failed.empty(), to_string(rule) + " satisfies U G A I N+ NP M" + (failed.empty() ? "" : ", fails" + failed));
  }
  o.require(check_axiom(Axiom::NNeg, majority_rule(), space, options).passed, "majority (n=3) satisfies N-");

  const auto union_neg = check_axiom(Axiom::NNeg, union_rule(), space, options);
  o.require(!union_neg.passed && union_neg.witness && !replay(Axiom::NNeg, union_rule(), *union_neg.witness, options).passed,
            "union fails N- with a replayable witness");
  if (union_neg.witness) o.note("witness: " + union_neg.witness->detail);

  const auto dict = check_axiom(Axiom::A, dictatorship_rule(1), space, options);
  o.require(!dict.passed && dict.witness && !replay(Axiom::A, dictatorship_rule(1), *dict.witness).passed,
            "dictatorship fails A");

  const Profile faculty = load_document(testkit::fixture("example3.json")).profile;
  for (const Axiom a : {Axiom::U, Axiom::A, Axiom::I, Axiom::NPos}) {
    const bool small = check_axiom(a, merge_rule(), space).passed;
    const bool ex3 = check_axiom(a, merge_rule(), ProfileSpace::of({faculty})).passed;
    o.require(small && ex3, "merge satisfies " + to_string(a));
  }

  const Tuple audrey = row({"02", "Audrey", testkit::kME});
  const Tuple aubrey = row({"02", "Aubrey", testkit::kME});
  const auto merged = aggregate(merge_rule(), faculty).sole().relation("Staff");
  const bool complementary =
      support(faculty, "Staff", audrey) == support(faculty, "Staff", aubrey).complement(faculty.agents());
  o.require(complementary && !merged.count(audrey) && !merged.count(aubrey),
            "merge fails N- on (02, Audrey) and (02, Aubrey): complementary supports, both rejected");
  o.require(!check_axiom(Axiom::NNeg, merge_rule(), ProfileSpace::of({faculty})).passed,
            "the N- checker rejects merge on the faculty profile");

  std::vector<Instance> grown(faculty.begin(), faculty.end());
  Relation staff = grown[1].relation("Staff");
  staff.insert(row({"null", "null", "History"}));
  staff.insert(row({"03", "Karl", "History"}));
  grown[1].set_relation("Staff", staff);
  const Profile extension(std::move(grown));
  const auto mono = check_axiom(Axiom::M, merge_rule(), ProfileSpace::of({faculty, extension}));
  o.require(!mono.passed && mono.witness && !replay(Axiom::M, merge_rule(), *mono.witness).passed,
            "merge fails M when the registrar also lists (_, _, History) and (03, Karl, History)");
  if (mono.witness && !mono.witness->tuples.empty()) o.note("dropped tuple " + to_string(mono.witness->tuples[0]));
  return o;
}

// Same profiles as the answer sweeps below.
ProfileSpace query_space() { return exhaustive(Schema{{"P", 2}}, 3, 2, 2); }

Outcome union_existential() {
  Outcome o;
  const auto space = query_space();
  const auto queries = generated(Schema{{"P", 2}}, Fragment::ExistsPositive, 200, 9);
  const auto r = sweep(PreservationCheck::Commutes, union_rule(), queries, space);
  o.note(str(queries.size()) + " queries x " + str(space.size()) + " profiles = " + str(r.pairs) + " pairs");
  o.require(queries.size() == 200 && r.failures == 0, "union commutes: " + str(r.failures) + " divergences");

  // Spot check with the brute-force evaluator on every 53rd profile.
  std::size_t spot = 0, spot_fail = 0;
  for (std::size_t i = 0; i < space.size(); i += 53) {
    const Profile p = space.at(i);
    const Instance u = aggregate(union_rule(), p).sole();
    const std::set<Value> range = active_domain(p);
    for (const auto& q : queries) {
      Relation left, right;
      for (const auto& t : answer(u, q, range).tuples) left.insert(t);
      std::function<void(std::size_t, std::map<std::string, Value>&, Tuple&)> walk =
          [&](std::size_t k, std::map<std::string, Value>& sigma, Tuple& t) {
            if (k == q.head.size()) {
              bool any = false;
              for (const auto& d : p) any = any || testkit::NaiveEvaluator(d).holds(q.body, sigma);
              if (any) right.insert(t);
              return;
            }
            for (const auto& v : range) {
              sigma[q.head[k]] = v;
              t.push_back(v);
              walk(k + 1, sigma, t);
              t.pop_back();
            }
          };
      std::map<std::string, Value> sigma;
      Tuple t;
      walk(0, sigma, t);
      ++spot;
      if (left != right) ++spot_fail;
    }
  }
  o.require(spot_fail == 0, "brute-force spot check agrees on " + str(spot) + " pairs");
  return o;
}

Outcome quota_containments() {
  Outcome o;
  const auto space = query_space();
  const Schema s{{"P", 2}};
  const auto universal = generated(s, Fragment::ForallPositive, 200, 9);
  const auto existential = generated(s, Fragment::ExistsPositive, 200, 9);
  const std::size_t n = 2;
  for (std::size_t q = 1; q <= n; ++q) {
    const Rule rule = quota_rule(static_cast<int>(q));
    const auto u = sweep(PreservationCheck::UnanimityContainment, rule, universal, space);
    o.require(u.failures == 0, "q=" + str(q) + ", forall-positive: unanimous answers kept, " + str(u.failures) +
                                   " violations in " + str(u.pairs) + " pairs");
    if (u.failures) {
      o.note("first: " + to_string(*u.query) + " on");
      for (const auto& d : *u.profile) o.note("  " + relation_text(d.relation("P")));
    }
    const auto g = sweep(PreservationCheck::GroundednessContainment, rule, existential, space);
    o.require(g.failures == 0, "q=" + str(q) + ", exists-positive: answers grounded, " + str(g.failures) +
                                   " violations in " + str(g.pairs) + " pairs");
  }
  return o;
}

Outcome merge_conjunctive() {
  Outcome o;
  const auto space = query_space();
  const auto queries = generated(Schema{{"P", 2}}, Fragment::ConjunctiveQuery, 200, 9);
  const auto r = sweep(PreservationCheck::Commutes, merge_rule(), queries, space);
  o.require(queries.size() == 200 && r.failures == 0,
            "merge commutes: " + str(r.failures) + " divergences in " + str(r.pairs) + " pairs");
  if (r.first) {
    o.note("first: " + r.first->query);
    for (const auto& d : *r.profile) o.note("  " + relation_text(d.relation("P")));
    o.note(r.first->diff);
  }
  return o;
}

Outcome average_containment() {
  Outcome o;
  SpaceSpec s;
  s.schema = Schema{{"P", 2}, {"R", 1}};
  s.domain = letter_domain(3);
  s.max_tuples = 2;
  s.agents = 3;
  s.mode = SpaceMode::Sampled;
  s.seed = 99;
  s.count = 200;
  const auto space = enum_profiles(s);
  const auto queries = generated(s.schema, Fragment::FirstOrder, 200, 9);
  const auto r = sweep(PreservationCheck::AveContainment, relationwise_average_voter_rule(), queries, space);
  o.require(queries.size() == 200 && r.failures == 0,
            "answers on every winner lie in an Ave member: " + str(r.failures) + " violations in " + str(r.pairs) +
                " pairs");
  if (r.query) {
    o.note("first: " + to_string(*r.query));
    o.note(serialize(*r.profile));
  }
  return o;
}

Outcome strict_dictatorship() {
  Outcome o;
  const Schema s{{"P", 2}};
  const ValueMap rho{{Value::constant("a"), Value::constant("b")},
                     {Value::constant("b"), Value::constant("c")},
                     {Value::constant("c"), Value::constant("a")}};
  const Rule permuted = permuted_dictatorship_rule(rho);
  const auto space = exhaustive(s, 3, 2, 2);
  FormulaGenOptions options;
  options.sentences = true;
  const auto battery = enum_formulas(s, Fragment::FirstOrder, 3, 13, 50, options);
  std::size_t lifted = 0, vacuous = 0;
  for (const auto& phi : battery) {
    const auto r = check_lifting(permuted, phi, space);
    lifted += r.lifted;
    vacuous += r.profiles_considered == 0;
    if (!r.lifted) o.note("not lifted: " + to_string(phi));
  }
  o.require(battery.size() == 50 && lifted == battery.size(), "lifts all " + str(battery.size()) + " sentences");
  o.note("sentences holding on no member of the space: " + str(vacuous));

  const auto g = is_generalized_dictatorship(permuted, space);
  bool witnessed = false;
  if (g.counterexample) {
    const Instance image = permute_partial((*g.counterexample)[0], rho);
    witnessed = std::none_of(g.counterexample->begin(), g.counterexample->end(),
                             [&](const Instance& d) { return d == image; });
    o.note("witness D1 " + relation_text((*g.counterexample)[0].relation("P")) + ", D2 " +
           relation_text((*g.counterexample)[1].relation("P")));
  }
  o.require(!g.generalized_dictatorship && witnessed, "not a generalized dictatorship, with a witness profile");
  return o;
}

Outcome constraint_equivalence() {
  Outcome o;
  struct Case {
    Schema schema;
    std::vector<Constraint> constraints;
    std::size_t domain;
    std::size_t max_tuples;
  };
  const std::vector<Case> cases{
      {Schema{{"P", 2}}, {FunctionalDependency{"P", {1}, {2}}, FunctionalDependency{"P", {2}, {1}}}, 3, 9},
      {Schema{{"P", 2}, {"Pv", 1}}, {ValueConstraint{"P", 1, "Pv"}, ValueConstraint{"P", 2, "Pv"}}, 2, 4},
      {Schema{{"P1", 2}, {"P2", 2}}, {ReferentialConstraint{"P1", "P2", 1}, ReferentialConstraint{"P1", "P2", 2}}, 2, 4},
      {Schema{{"P", 3}}, {FunctionalDependency{"P", {1, 2}, {3}}, FunctionalDependency{"P", {1}, {2, 3}}}, 2, 8},
  };
  std::size_t instances = 0, disagreements = 0;
  for (const auto& k : cases) {
    SpaceSpec spec;
    spec.schema = k.schema;
    spec.domain = letter_domain(k.domain);
    spec.max_tuples = k.max_tuples;
    const auto pool = enum_instances(spec);
    instances += pool.size();
    for (const auto& c : k.constraints) {
      const Formula f = to_formula(c, k.schema);
      for (const auto& d : pool) {
        const bool direct = check(d, c);
        if (direct != is_true(d, f) || direct != testkit::NaiveEvaluator(d).holds(f, {})) ++disagreements;
      }
    }
  }
  o.note(str(instances) + " instances across " + str(cases.size()) + " schemas");
  o.require(disagreements == 0, "checkers agree with the translated sentences: " + str(disagreements) + " disagreements");
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"faculty example: intersection, union, majority, average voter and merge tables", golden_tables},
      {"majority paradox on the two-database profile", paradox},
      {"intersection and query answering diverge both ways", example5},
      {"quota q lifts a functional dependency iff q > n/2", fd_quotas},
      {"quota rules lift a referential constraint iff the target quota is 1", rc_quotas},
      {"grounded rules lift value constraints", value_constraints},
      {"unconstrained distance rule equals majority for n=3", distance_majority},
      {"axiom satisfaction table", axiom_matrix},
      {"union commutes with existential-positive queries", union_existential},
      {"quota rules keep unanimous and grounded answers", quota_containments},
      {"merge commutes with conjunctive queries", merge_conjunctive},
      {"relation-wise average voter answers lie in Ave", average_containment},
      {"a permuted dictatorship is collectively rational but no generalized dictatorship", strict_dictatorship},
      {"constraint checkers agree with first-order evaluation", constraint_equivalence},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long k = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || k < 1 || k > static_cast<long>(criteria().size())) {
      std::cerr << "usage: acceptance [criterion 1-" << criteria().size() << "]...\n";
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(k));
  }
  if (selected.empty()) {
    for (std::size_t k = 1; k <= criteria().size(); ++k) selected.push_back(k);
  }

  bool all = true;
  for (const std::size_t k : selected) {
    const auto& c = criteria()[k - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("error ") + e.what());
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    char id[8];
    std::snprintf(id, sizeof id, "%02zu", k);
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << "  " << c.title << "  (" << ms << " ms)\n";
    for (const auto& n : o.notes) {
      std::istringstream lines(n);
      for (std::string line; std::getline(lines, line);) std::cout << "        " << line << "\n";
    }
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
