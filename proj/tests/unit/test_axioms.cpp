#include "doctest.h"

#include "dbagg/axioms.hpp"
#include "dbagg/error.hpp"
#include "testkit.hpp"

using namespace dbagg;
using testkit::inst;
using testkit::row;

namespace {

const Schema kUnary{{"P", 1}};

ProfileSpace unary_space(std::size_t agents, std::size_t domain = 2) {
  SpaceSpec s;
  s.schema = kUnary;
  s.domain = letter_domain(domain);
  s.max_tuples = domain;
  s.agents = agents;
  return enum_profiles(s);
}

ProfileSpace binary_space(std::size_t agents, std::size_t max_tuples) {
  SpaceSpec s;
  s.schema = Schema{{"P", 2}};
  s.domain = letter_domain(2);
  s.max_tuples = max_tuples;
  s.agents = agents;
  return enum_profiles(s);
}

TupleUniverse unary_universe(std::size_t domain) {
  TupleUniverse u;
  for (const auto& v : letter_domain(domain)) u.extras["P"].insert(Tuple{v});
  return u;
}

Instance unary(std::initializer_list<const char*> values) {
  testkit::Rows rows;
  for (const char* v : values) rows.push_back({v});
  return inst(kUnary, {{"P", rows}});
}

void expect_replay(Axiom axiom, const Rule& rule, const AxiomReport& report, const AxiomOptions& options = {}) {
  REQUIRE_FALSE(report.passed);
  REQUIRE(report.witness);
  CHECK_FALSE(replay(axiom, rule, *report.witness, options).passed);
}

}  // namespace

TEST_CASE("axiom names") {
  for (const char* name : {"U", "G", "A", "I", "N+", "N-", "NP", "M"}) CHECK(to_string(parse_axiom(name)) == name);
  CHECK_THROWS_AS(parse_axiom("N"), ValidationError);
}

TEST_CASE("unanimity") {
  const auto space = unary_space(2);
  CHECK(check_unanimity(union_rule(), space).passed);
  CHECK(check_unanimity(merge_rule(), space).passed);
  CHECK(check_unanimity(merge_rule(), ProfileSpace::of({testkit::faculty_profile()})).passed);
  const auto top = check_unanimity(trivial_top_rule(), space);
  expect_replay(Axiom::U, trivial_top_rule(), top);
  CHECK(top.witness->tuples.size() == 1);
  CHECK(top.profiles_checked >= 1);
}

TEST_CASE("groundedness") {
  const auto space = unary_space(2);
  CHECK(check_groundedness(intersection_rule(), space).passed);
  CHECK(check_groundedness(dictatorship_rule(1), space).passed);
  const Rule zero = trivial_zero_rule(unary_universe(3));
  const auto r = check_groundedness(zero, space);
  expect_replay(Axiom::G, zero, r);
  REQUIRE(r.witness->tuples.size() == 1);
  CHECK_FALSE(relation_union(r.witness->profiles[0], "P").count(r.witness->tuples[0]));
}

TEST_CASE("anonymity") {
  CHECK(check_anonymity(majority_rule(), unary_space(3)).passed);
  const auto r = check_anonymity(dictatorship_rule(1), unary_space(2));
  expect_replay(Axiom::A, dictatorship_rule(1), r);
  const auto& w = *r.witness;
  REQUIRE(w.profiles.size() == 1);
  CHECK_FALSE(w.profiles[0][0] == w.profiles[0][1]);
  CHECK(w.agent_order == std::vector<std::size_t>{2, 1});
  CHECK_FALSE(check_anonymity(oligarchy_rule({1, 2}), unary_space(3)).passed);

  SpaceSpec single;
  single.schema = kUnary;
  single.domain = letter_domain(2);
  single.agents = 1;
  for (const Rule& rule : {dictatorship_rule(1), average_voter_rule(), merge_rule()}) {
    CHECK(check_anonymity(rule, enum_profiles(single)).passed);
  }
}

TEST_CASE("independence") {
  for (int q = 1; q <= 3; ++q) CHECK(check_independence(quota_rule(q), unary_space(2)).passed);
  CHECK(check_independence(trivial_zero_rule(unary_universe(3)), unary_space(2)).passed);
  CHECK(check_independence(majority_rule(), binary_space(3, 1)).passed);
  const auto r = check_independence(average_voter_rule(), unary_space(3, 3));
  expect_replay(Axiom::I, average_voter_rule(), r);
  CHECK(r.witness->profiles.size() == 2);
  CHECK(check_independence(average_voter_rule(), ProfileSpace::of({Profile({unary({"a"}), unary({"a"}), unary({"b"})})})).passed);
  // A tie between two inputs is already a violation under the every-winner reading.
  const auto tie = check_independence(average_voter_rule(), ProfileSpace::of({Profile({unary({"a"}), unary({"b"})})}));
  expect_replay(Axiom::I, average_voter_rule(), tie);
  CHECK(tie.witness->profiles[0] == tie.witness->profiles[1]);
}

TEST_CASE("negative neutrality") {
  AxiomOptions options;
  options.neutrality_universe = unary_universe(2);
  CHECK(check_neg_neutrality(majority_rule(), unary_space(3), options).passed);

  const Profile disjoint({unary({"a"}), unary({"b"})});
  const auto r = check_neg_neutrality(union_rule(), ProfileSpace::of({disjoint}));
  expect_replay(Axiom::NNeg, union_rule(), r);
  CHECK(r.witness->tuples == std::vector<Tuple>{row({"a"}), row({"b"})});

  const Profile audrey({inst(testkit::faculty_schema(), {{"Staff", {{"02", "Audrey", testkit::kME}}}}),
                        inst(testkit::faculty_schema(), {{"Staff", {{"02", "Audrey", testkit::kME}}}}),
                        inst(testkit::faculty_schema(), {{"Staff", {{"02", "Aubrey", testkit::kME}}}})});
  const auto merged = check_neg_neutrality(merge_rule(), ProfileSpace::of({audrey}));
  expect_replay(Axiom::NNeg, merge_rule(), merged);
  CHECK(merged.witness->tuples ==
        std::vector<Tuple>{row({"02", "Audrey", testkit::kME}), row({"02", "Aubrey", testkit::kME})});
  CHECK_FALSE(check_neg_neutrality(merge_rule(), ProfileSpace::of({testkit::faculty_profile()})).passed);
}

TEST_CASE("positive neutrality") {
  for (const Rule& rule : {union_rule(), intersection_rule(), majority_rule(), merge_rule()}) {
    CAPTURE(to_string(rule));
    CHECK(check_pos_neutrality(rule, unary_space(2)).passed);
  }
  CHECK(check_pos_neutrality(merge_rule(), ProfileSpace::of({testkit::faculty_profile()})).passed);
  const Rule pick_a = custom_rule("keep-a", [](const Profile& p) {
    Instance out(p.schema());
    if (relation_union(p, "P").count(row({"a"}))) out.set_relation("P", testkit::rel({{"a"}}));
    return std::vector<Instance>{out};
  });
  expect_replay(Axiom::NPos, pick_a, check_pos_neutrality(pick_a, unary_space(2)));
}

TEST_CASE("permutation neutrality") {
  const ValueMap swap{{Value::constant("a"), Value::constant("b")}, {Value::constant("b"), Value::constant("a")}};
  AxiomOptions options;
  options.permutations = {swap};
  for (const Rule& rule : {union_rule(), intersection_rule(), majority_rule(), average_voter_rule(), merge_rule()}) {
    CAPTURE(to_string(rule));
    CHECK(check_perm_neutrality(rule, unary_space(2), options).passed);
    CHECK(check_perm_neutrality(rule, binary_space(2, 1)).passed);
  }
  AxiomOptions identity;
  identity.permutations = {ValueMap{}};
  const Rule constant = custom_rule("always-a", [](const Profile& p) {
    return std::vector<Instance>{inst(p.schema(), {{"P", {{"a"}}}})};
  });
  CHECK(check_perm_neutrality(constant, unary_space(2), identity).passed);
  const auto r = check_perm_neutrality(constant, unary_space(2), options);
  expect_replay(Axiom::NPerm, constant, r);
  CHECK(r.witness->permutation == swap);

  AxiomOptions bad;
  bad.permutations = {ValueMap{{Value::constant("a"), Value::constant("b")}}};
  CHECK_THROWS_AS(check_perm_neutrality(union_rule(), unary_space(2), bad), ValidationError);
}

TEST_CASE("monotonicity") {
  CHECK(check_monotonicity(majority_rule(), unary_space(3)).passed);
  const Rule constant = custom_rule("always-a", [](const Profile& p) {
    return std::vector<Instance>{inst(p.schema(), {{"P", {{"a"}}}})};
  });
  CHECK(check_monotonicity(constant, unary_space(2)).passed);

  const Profile before({unary({"a"}), unary({"b"})});
  const Profile after({unary({"a"}), unary({"a", "b", "null"})});
  const auto r = check_monotonicity(merge_rule(), ProfileSpace::of({before, after}));
  expect_replay(Axiom::M, merge_rule(), r);
  CHECK(r.witness->tuples == std::vector<Tuple>{row({"null"})});
  CHECK(aggregate(merge_rule(), before).sole().relation("P") == testkit::rel({{"null"}}));
  CHECK(aggregate(merge_rule(), after).sole().relation("P") == testkit::rel({{"a"}}));
}

TEST_CASE("the satisfaction table on small spaces") {
  const auto space = unary_space(3);
  AxiomOptions options;
  options.neutrality_universe = unary_universe(2);
  for (const Rule& rule : {union_rule(), intersection_rule(), majority_rule()}) {
    CAPTURE(to_string(rule));
    for (const Axiom a : {Axiom::U, Axiom::G, Axiom::A, Axiom::I, Axiom::NPos, Axiom::NPerm, Axiom::M}) {
      CAPTURE(to_string(a));
      CHECK(check_axiom(a, rule, space, options).passed);
    }
  }
  CHECK(check_axiom(Axiom::NNeg, majority_rule(), space, options).passed);
  CHECK_FALSE(check_axiom(Axiom::NNeg, union_rule(), space, options).passed);
  CHECK_FALSE(check_axiom(Axiom::NNeg, intersection_rule(), space, options).passed);
  CHECK_FALSE(check_axiom(Axiom::A, dictatorship_rule(2), space).passed);
  for (const Axiom a : {Axiom::U, Axiom::A, Axiom::I, Axiom::NPos}) {
    CAPTURE(to_string(a));
    CHECK(check_axiom(a, merge_rule(), space).passed);
  }
}

TEST_CASE("every counterexample replays") {
  const auto space = unary_space(2);
  AxiomOptions options;
  options.neutrality_universe = unary_universe(3);
  const std::vector<Rule> rules{union_rule(),   intersection_rule(),   quota_rule(2),
                                trivial_top_rule(), dictatorship_rule(1), average_voter_rule(),
                                merge_rule(),   relationwise_average_voter_rule()};
  std::size_t failures = 0;
  for (const auto& rule : rules) {
    for (const Axiom a : {Axiom::U, Axiom::G, Axiom::A, Axiom::I, Axiom::NPos, Axiom::NNeg, Axiom::NPerm, Axiom::M}) {
      const auto r = check_axiom(a, rule, space, options);
      CHECK(r.passed == !r.witness.has_value());
      if (r.passed) continue;
      ++failures;
      CAPTURE(to_string(rule));
      CAPTURE(to_string(a));
      CHECK_FALSE(replay(a, rule, *r.witness, options).passed);
      CHECK(check_axiom(a, rule, space, options).witness->detail == r.witness->detail);
    }
  }
  CHECK(failures >= 6);
}

TEST_CASE("quota rules satisfy anonymity, independence and monotonicity") {
  std::vector<Rule> family;
  family.push_back(trivial_zero_rule(unary_universe(2)));
  for (int q = 1; q <= 4; ++q) family.push_back(quota_rule(q));
  const auto report = verify_quota_lemma(family, unary_space(3));
  CHECK(report.all_pass());
  CHECK(report.rows.size() == 5);
  CHECK_FALSE(report.note.empty());

  const auto others = verify_quota_lemma({dictatorship_rule(1), average_voter_rule()}, unary_space(3, 3));
  CHECK_FALSE(others.all_pass());
  REQUIRE(others.rows.size() == 2);
  CHECK_FALSE(others.rows[0].anonymity);
  const auto& ave = others.rows[1];
  CHECK_FALSE((ave.anonymity && ave.independence && ave.monotonicity));
}
