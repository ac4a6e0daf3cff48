#include "doctest.h"

#include "dbagg/error.hpp"
#include "dbagg/folang.hpp"
#include "dbagg/oracle.hpp"
#include "testkit.hpp"

using namespace dbagg;
using testkit::inst;
using testkit::row;

namespace {

Term v(const char* name) { return Term::var(name); }
Term c(const char* token) { return Term::constant(std::string(token)); }

const Schema kPQ{{"P", 1}, {"Q", 2}};
const Schema kP2{{"P", 2}};

AnswerSet answers(std::initializer_list<std::vector<std::string>> rows, std::size_t width) {
  AnswerSet a;
  a.width = width;
  for (const auto& r : rows) a.tuples.insert(row(r));
  return a;
}

std::vector<Instance> small_pool(const Schema& schema, std::size_t domain, std::size_t max_tuples) {
  SpaceSpec spec;
  spec.schema = schema;
  spec.domain = letter_domain(domain);
  spec.max_tuples = max_tuples;
  return enum_instances(spec);
}

}  // namespace

TEST_CASE("derived connectives desugar to the primitive ones") {
  const auto p = atom("P", {v("x")});
  const auto q = atom("Q", {v("x"), v("y")});
  CHECK(conj(p, q) == negation(implies(p, negation(q))));
  CHECK(disj(p, q) == implies(negation(p), q));
  CHECK(exists("y", q) == negation(forall("y", negation(q))));
  CHECK(neq(v("x"), v("y")) == negation(eq(v("x"), v("y"))));
}

TEST_CASE("parser examples") {
  CHECK(parse_formula("exists y. P(x,y)", kP2) == exists("y", atom("P", {v("x"), v("y")})));
  CHECK(parse_formula("forall x. (P(x) -> exists y. Q(x,y))", kPQ) ==
        forall("x", implies(atom("P", {v("x")}), exists("y", atom("Q", {v("x"), v("y")})))));
  CHECK(parse_formula("x != y") == negation(eq(v("x"), v("y"))));
  CHECK(parse_formula("P(\"a\", null)", kP2) == atom("P", {c("a"), Term::constant(Value::null())}));
  CHECK(parse_formula("consts a; P(a, x)", kP2) == atom("P", {c("a"), v("x")}));
}

TEST_CASE("precedence: not > and > or > ->, implication to the right") {
  const auto p = atom("P", {v("x")});
  const auto q = atom("Q", {v("x"), v("x")});
  const Schema s{{"P", 1}, {"Q", 2}, {"R", 1}};
  const auto r = atom("R", {v("x")});
  CHECK(parse_formula("P(x) or Q(x,x) and R(x)", s) == disj(p, conj(q, r)));
  CHECK(parse_formula("not P(x) and R(x)", s) == conj(negation(p), r));
  CHECK(parse_formula("P(x) -> R(x) -> P(x)", s) == implies(p, implies(r, p)));
  CHECK(parse_formula("P(x) and R(x) -> P(x) or R(x)", s) == implies(conj(p, r), disj(p, r)));
  // Quantifiers extend as far right as possible.
  CHECK(parse_formula("forall x. P(x) and R(x)", s) == forall("x", conj(p, r)));
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_formula("forall x. P(x", Schema{{"P", 1}});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 13);
  }
  CHECK_THROWS_AS(parse_formula("P(x) and", Schema{{"P", 1}}), ParseError);
  CHECK_THROWS_AS(parse_formula("P(x, y)", Schema{{"P", 1}}), Error);
  CHECK_THROWS_AS(parse_formula("S(x)", Schema{{"P", 1}}), Error);
  CHECK_THROWS_AS(parse_formula("P(x) and P(x, y)"), Error);
}

TEST_CASE("shadowed binders are renamed apart") {
  const auto f = parse_formula("P(x) and exists x. P(x)", Schema{{"P", 1}});
  CHECK(free_variables(f) == std::set<std::string>{"x"});
  CHECK(variables(f).size() == 2);
  const auto g = parse_formula("forall x. exists x. P(x)", Schema{{"P", 1}});
  CHECK(g.kind() == Formula::Kind::Forall);
  CHECK(variables(g) == std::set<std::string>{"x", "x_1"});
  CHECK(free_variables(g).empty());
}

TEST_CASE("printing round-trips through the parser") {
  for (const auto frag : {Fragment::ExistsPositive, Fragment::ForallPositive, Fragment::ConjunctiveQuery,
                          Fragment::FirstOrder}) {
    FormulaGenOptions options;
    options.constants = {Value::constant("a"), Value::null(), Value::constant("two words")};
    for (const auto& f : enum_formulas(kPQ, frag, 4, 11, 150, options)) {
      const std::string text = to_string(f);
      CAPTURE(text);
      CHECK(parse_formula(text, kPQ) == f);
    }
  }
}

TEST_CASE("queries") {
  const auto q = parse_query("ans(x) :- exists y. P(x, y)", kP2);
  CHECK(q.head == std::vector<std::string>{"x"});
  CHECK(to_string(q) == "ans(x) :- exists y. P(x, y)");
  CHECK_THROWS_AS(parse_query("ans(x) :- P(x, y)", kP2), Error);
  CHECK_THROWS_AS(parse_query("ans(x, x) :- P(x, x)", kP2), Error);
  CHECK(parse_query("ans(y, x) :- P(x, y)", kP2).head == std::vector<std::string>{"y", "x"});
}

TEST_CASE("satisfaction on the majority paradox instances") {
  const auto phi = parse_formula("forall x. (P(x) -> exists y. Q(x, y))", kPQ);
  CHECK(is_true(inst(kPQ, {{"P", {{"a"}}}, {"Q", {{"a", "b"}}}}), phi));
  CHECK(is_true(inst(kPQ, {{"P", {{"a"}}}, {"Q", {{"a", "c"}}}}), phi));
  CHECK_FALSE(is_true(inst(kPQ, {{"P", {{"a"}}}}), phi));
  // Empty active domain: universal sentences hold vacuously.
  CHECK(is_true(Instance(kPQ), parse_formula("forall x. P(x)", kPQ)));
  CHECK(is_true(Instance(kPQ), parse_formula("forall x. forall y. Q(x, y)", kPQ)));
}

TEST_CASE("satisfies needs every free variable") {
  const auto f = parse_formula("P(x, y)", kP2);
  CHECK_THROWS_AS(satisfies(Instance(kP2), Assignment{{"x", Value::constant("a")}}, f), ValidationError);
  const Instance d = inst(kP2, {{"P", {{"a", "b"}}}});
  CHECK(satisfies(d, Assignment{{"x", Value::constant("a")}, {"y", Value::constant("b")}}, f));
}

TEST_CASE("null behaves as an ordinary value") {
  const Instance d = inst(kP2, {{"P", {{"a", "null"}}}});
  CHECK(is_true(d, parse_formula("exists x. P(\"a\", x) and x = null", kP2)));
  CHECK_FALSE(is_true(d, parse_formula("exists x. P(\"a\", x) and x = \"a\"", kP2)));
  CHECK(is_true(d, parse_formula("null = null", kP2)));
}

TEST_CASE("open formulas are true only under every assignment") {
  const Instance d = inst(kP2, {{"P", {{"a", "a"}}}});
  CHECK_FALSE(is_true(d, parse_formula("P(x, x)", kP2)));
  CHECK(is_true(d, parse_formula("x = x", kP2)));
  CHECK_FALSE(is_true(d, parse_formula("x = \"a\"", kP2)));
}

TEST_CASE("answers on the divergence instances") {
  const Instance d1 = inst(kP2, {{"P", {{"a", "b"}}}});
  CHECK(answer(d1, parse_query("ans(x) :- exists y. P(x, y)", kP2)) == answers({{"a"}}, 1));
  const Instance meet = inst(kP2, {{"P", {{"a", "a"}, {"a", "b"}}}});
  CHECK(answer(meet, parse_query("ans(x) :- forall y. P(x, y)", kP2)) == answers({{"a"}}, 1));
  CHECK(answer(Instance(kP2), parse_query("ans(x) :- exists y. P(x, y)", kP2)).tuples.empty());
  const auto swapped = answer(d1, parse_query("ans(y, x) :- P(x, y)", kP2));
  CHECK(swapped == answers({{"b", "a"}}, 2));
}

TEST_CASE("sentence answers are the empty tuple or nothing") {
  const Instance d = inst(kP2, {{"P", {{"a", "b"}}}});
  CHECK(answer(d, parse_query("ans() :- exists x. exists y. P(x, y)", kP2)) == answers({{}}, 0));
  CHECK(answer(d, parse_query("ans() :- forall x. exists y. P(x, y)", kP2)).tuples.empty());
}

TEST_CASE("ranged answers range the head and keep quantifiers on the active domain") {
  const Instance d = inst(kP2, {{"P", {{"a", "b"}}}});
  const std::set<Value> range{Value::constant("a"), Value::constant("b"), Value::constant("c")};
  const auto q = parse_query("ans(x, y) :- P(x, x) or P(\"a\", y)", kP2);
  CHECK(answer(d, q, range).tuples.size() == 3);
  CHECK(answer(d, q).tuples.size() == 2);
  CHECK(answer(d, parse_query("ans(x) :- forall y. P(x, y)", kP2), range).tuples.empty());
}

TEST_CASE("compiled evaluation agrees with the brute-force evaluator") {
  const Schema s{{"P", 2}, {"R", 1}};
  const auto pool = small_pool(s, 3, 2);
  FormulaGenOptions options;
  options.constants = {Value::constant("a")};
  const auto formulas = enum_formulas(s, Fragment::FirstOrder, 3, 5, 80, options);
  REQUIRE(formulas.size() == 80);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < pool.size(); i += 5) {
    const testkit::NaiveEvaluator naive(pool[i]);
    for (const auto& f : formulas) {
      const Query q = query_of(f);
      CAPTURE(to_string(q));
      CAPTURE(pool[i].to_string());
      CHECK(answer(pool[i], q) == naive.answer(q));
      ++checked;
    }
  }
  CHECK(checked > 4000);
}

TEST_CASE("positive existential answers grow with the instance") {
  const Schema s{{"P", 2}, {"R", 1}};
  const auto pool = small_pool(s, 2, 2);
  const auto formulas = enum_formulas(s, Fragment::ExistsPositive, 3, 9, 40);
  for (const auto& f : formulas) {
    const Query q = query_of(f);
    for (std::size_t i = 0; i < pool.size(); i += 7) {
      for (std::size_t j = 0; j < pool.size(); j += 3) {
        bool contained = true;
        for (const auto& [name, rel] : pool[i].relations()) contained = contained && is_subset(rel, pool[j].relation(name));
        if (!contained) continue;
        const auto small = answer(pool[i], q), big = answer(pool[j], q);
        CHECK(is_subset(small.tuples, big.tuples));
      }
    }
  }
}

TEST_CASE("universal answers can shrink as the instance grows") {
  const Schema s{{"P", 2}, {"R", 1}};
  const auto q = parse_query("ans(x) :- forall y. P(x, y)", s);
  const Instance small = inst(s, {{"P", {{"a", "a"}, {"a", "b"}}}});
  const Instance big = inst(s, {{"P", {{"a", "a"}, {"a", "b"}}}, {"R", {{"c"}}}});
  CHECK(answer(small, q).tuples.size() == 1);
  CHECK(answer(big, q).tuples.empty());
}

TEST_CASE("classification") {
  const auto e = classify(parse_formula("exists y. P(x, y)", kP2));
  CHECK(e.pos_existential);
  CHECK_FALSE(e.pos_universal);
  CHECK(e.conjunctive_query);
  CHECK_FALSE(e.sentence);

  const auto u = classify(parse_formula("forall y. P(x, y)", kP2));
  CHECK(u.pos_universal);
  CHECK_FALSE(u.pos_existential);

  const auto neg = classify(parse_formula("not P(\"a\", \"b\")", kP2));
  CHECK(neg.lit_neg);
  CHECK_FALSE(neg.lit_pos);
  CHECK(neg.sentence);
  CHECK(classify(parse_formula("P(\"a\", \"b\")", kP2)).lit_pos);
  CHECK_FALSE(classify(parse_formula("P(\"a\", x)", kP2)).lit_pos);

  const auto cq = classify(parse_formula("exists z. P(x, z) and P(z, y) or P(y, x)", kP2));
  CHECK(cq.conjunctive_query);
  // The existential-positive fragment has no conjunction.
  CHECK_FALSE(cq.pos_existential);
  CHECK_FALSE(classify(parse_formula("exists z. P(x, z) and x = z", kP2)).conjunctive_query);
  CHECK_FALSE(classify(parse_formula("P(x, x) -> P(x, x)", kP2)).pos_existential);
}

TEST_CASE("structure helpers") {
  const auto f = parse_formula("forall x. P(x, \"a\") or exists y. P(y, z)", kP2);
  CHECK(free_variables(f) == std::set<std::string>{"z"});
  CHECK(constants(f) == std::set<Value>{Value::constant("a")});
  CHECK(relation_symbols(f) == std::set<std::string>{"P"});
  CHECK(depth(parse_formula("P(x, y)", kP2)) == 1);
  CHECK(depth(parse_formula("exists y. P(x, y)", kP2)) == 2);
  CHECK_THROWS_AS(validate(f, Schema{{"Q", 2}}), ValidationError);
}
