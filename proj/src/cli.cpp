#include "dbagg/cli.hpp"

#include <fstream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dbagg/aggregators.hpp"
#include "dbagg/axioms.hpp"
#include "dbagg/constraints.hpp"
#include "dbagg/error.hpp"
#include "dbagg/folang.hpp"
#include "dbagg/io.hpp"
#include "dbagg/lifting.hpp"
#include "dbagg/oracle.hpp"
#include "dbagg/preservation.hpp"

namespace dbagg {

namespace {

struct SpaceArgs {
  std::string space_file;
  std::string input;
  std::vector<std::string> schema;
  std::size_t domain = 3;
  std::size_t max_tuples = 2;
  std::size_t agents = 2;
  bool sampled = false;
  std::uint64_t seed = 0;
  std::size_t samples = 100;
  std::vector<std::string> filters;
  std::vector<std::string> shared;

  void attach(CLI::App* cmd) {
    cmd->add_option("--space", space_file, "Space description (JSON)");
    cmd->add_option("--input", input, "Profile document; the space is that single profile");
    cmd->add_option("--schema", schema, "Relation symbol as NAME:ARITY (repeatable)");
    cmd->add_option("--domain", domain, "Domain size (values a, b, c, ...)");
    cmd->add_option("--max-tuples", max_tuples, "Maximum tuples per relation");
    cmd->add_option("--agents", agents, "Number of agents");
    cmd->add_flag("--sampled", sampled, "Sample profiles instead of enumerating");
    cmd->add_option("--seed", seed, "Seed for sampling");
    cmd->add_option("--samples", samples, "Number of sampled profiles");
    cmd->add_option("--filter", filters, "Keep only instances satisfying this constraint (repeatable)");
    cmd->add_option("--shared", shared, "Symbol whose relation all agents share (repeatable)");
  }

  ProfileSpace build() const {
    if (!input.empty()) {
      ProfileSpace s = ProfileSpace::of({load_document(input).profile});
      s.description = "profile " + input;
      return s;
    }
    SpaceSpec spec;
    if (!space_file.empty()) {
      spec = space_from_json(load_json(space_file));
    } else {
      if (schema.empty()) throw ValidationError("a space needs --space, --input or at least one --schema");
      Schema::SymbolMap symbols;
      static const std::regex item(R"(\s*([A-Za-z_][A-Za-z0-9_]*)\s*[:/]\s*([0-9]+)\s*)");
      for (const auto& s : schema) {
        std::smatch m;
        if (!std::regex_match(s, m, item)) throw ValidationError("bad --schema '" + s + "', expected NAME:ARITY");
        symbols[m[1]] = std::stoul(m[2]);
      }
      spec.schema = Schema(std::move(symbols));
      spec.domain = letter_domain(domain);
      spec.max_tuples = max_tuples;
      spec.agents = agents;
      spec.mode = sampled ? SpaceMode::Sampled : SpaceMode::Exhaustive;
      spec.seed = seed;
      spec.count = samples;
      spec.shared_symbols.insert(shared.begin(), shared.end());
    }
    for (const auto& f : filters) spec.constraints.push_back(parse_constraint(f));
    return enum_profiles(spec);
  }
};

Tuple parse_ground_tuple(const std::string& text, std::string& symbol) {
  static const std::regex shape(R"(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, shape)) throw ValidationError("bad tuple '" + text + "', expected P(a, b)");
  symbol = m[1];
  Tuple t;
  std::stringstream items(m[2].str());
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto b = item.find_first_not_of(" \t\"'");
    const auto e = item.find_last_not_of(" \t\"'");
    if (b == std::string::npos) throw ValidationError("empty value in '" + text + "'");
    const std::string token = item.substr(b, e - b + 1);
    t.push_back(token == "null" ? Value::null() : Value::constant(token));
  }
  return t;
}

void write(std::ostream& out, const json& doc) { out << pretty(doc); }

json rule_header(const std::string& kind, const std::string& rule) {
  return json{{"kind", kind}, {"rule", rule}};
}

int emit_axiom(std::ostream& out, const AxiomReport& r, const std::string& rule) {
  json doc = rule_header("axiom", rule);
  doc["axiom"] = to_string(r.axiom);
  doc["verdict"] = r.passed ? "pass" : "fail";
  doc["profiles_checked"] = r.profiles_checked;
  doc["space"] = r.space;
  if (r.witness) doc["witness"] = to_json(*r.witness);
  write(out, doc);
  return r.passed ? kExitPass : kExitCounterexample;
}

int emit_lifting(std::ostream& out, const LiftReport& r, const std::string& rule, const std::string& field,
                 const std::string& text, WinnerReading reading) {
  json doc = rule_header("lifting", rule);
  doc[field] = text;
  doc["reading"] = reading == WinnerReading::Every ? "every" : "some";
  doc["verdict"] = r.lifted ? "pass" : "fail";
  doc["by_construction"] = r.by_construction;
  doc["profiles_considered"] = r.profiles_considered;
  doc["space"] = r.space;
  if (r.profile) doc["profile"] = to_json(*r.profile);
  if (r.winner) doc["winner"] = to_json(*r.winner);
  write(out, doc);
  return r.lifted ? kExitPass : kExitCounterexample;
}

int emit_commute(std::ostream& out, const SweepReport& r, const std::string& rule, const std::string& fragment,
                 std::size_t queries) {
  json doc = rule_header("commute", rule);
  doc["fragment"] = fragment;
  doc["queries"] = queries;
  doc["pairs"] = r.pairs;
  doc["divergences"] = r.failures;
  doc["verdict"] = r.failures == 0 ? "pass" : "fail";
  if (r.first) {
    doc["query"] = r.first->query;
    doc["profile"] = to_json(*r.profile);
    doc["report"] = to_json(*r.first);
  }
  write(out, doc);
  return r.failures == 0 ? kExitPass : kExitCounterexample;
}

WinnerReading parse_reading(const std::string& s) {
  if (s == "every") return WinnerReading::Every;
  if (s == "some") return WinnerReading::Some;
  throw ValidationError("unknown winner reading '" + s + "', expected every or some");
}

int replay_document(const json& doc, std::ostream& out) {
  const std::string kind = doc.at("kind").get<std::string>();
  const Rule rule = parse_rule(doc.at("rule").get<std::string>());
  if (kind == "axiom") {
    const Axiom axiom = parse_axiom(doc.at("axiom").get<std::string>());
    if (!doc.contains("witness")) throw ValidationError("document has no witness to replay");
    const auto report = replay(axiom, rule, witness_from_json(doc["witness"]));
    return emit_axiom(out, report, to_string(rule));
  }
  if (kind == "lifting") {
    if (!doc.contains("profile")) throw ValidationError("document has no profile to replay");
    const Profile p = document_from_json(doc["profile"]).profile;
    ProfileSpace space = ProfileSpace::of({p});
    space.description = "witness replay";
    LiftOptions options;
    options.reading = parse_reading(doc.value("reading", std::string("every")));
    if (doc.contains("constraint")) {
      const std::string text = doc["constraint"].get<std::string>();
      return emit_lifting(out, check_lifting(rule, parse_constraint(text), space, options), to_string(rule),
                          "constraint", text, options.reading);
    }
    const std::string text = doc.at("formula").get<std::string>();
    return emit_lifting(out, check_lifting(rule, parse_formula(text, p.schema()), space, options), to_string(rule),
                        "formula", text, options.reading);
  }
  if (kind == "commute") {
    if (!doc.contains("profile")) throw ValidationError("document has no profile to replay");
    const Profile p = document_from_json(doc["profile"]).profile;
    ProfileSpace space = ProfileSpace::of({p});
    const Query q = parse_query(doc.at("query").get<std::string>(), p.schema());
    const auto r = sweep(PreservationCheck::Commutes, rule, {q}, space);
    return emit_commute(out, r, to_string(rule), doc.value("fragment", std::string("fo")), 1);
  }
  throw ValidationError("unknown document kind '" + kind + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aggregation of relational database instances"};
  app.require_subcommand(1);

  // aggregate
  auto* agg = app.add_subcommand("aggregate", "Aggregate a profile of instances");
  std::string agg_rule, agg_input, agg_tie = "all", agg_output;
  std::vector<std::string> agg_extra;
  agg->add_option("--rule", agg_rule, "Rule descriptor")->required();
  agg->add_option("--input", agg_input, "Profile document")->required();
  agg->add_option("--tie", agg_tie, "all | lex")->check(CLI::IsMember({"all", "lex"}));
  agg->add_option("--output", agg_output, "Write the result here instead of stdout");
  agg->add_option("--extra", agg_extra, "Candidate tuple P(a, b) for quota-0 rules (repeatable)");

  // query
  auto* qry = app.add_subcommand("query", "Answer a query on one instance of a profile document");
  std::string q_text, q_input;
  std::size_t q_agent = 1;
  qry->add_option("--query", q_text, "Query, e.g. ans(x) :- exists y. P(x, y)")->required();
  qry->add_option("--input", q_input, "Profile document")->required();
  qry->add_option("--agent", q_agent, "Which instance to query (1-based)");

  // check
  auto* chk = app.add_subcommand("check", "Search a profile space for counterexamples");
  chk->require_subcommand(1);

  auto* ax = chk->add_subcommand("axiom", "Check an axiom");
  std::string ax_name, ax_rule;
  SpaceArgs ax_space;
  ax->add_option("--axiom", ax_name, "U, G, A, I, N+, N-, NP or M")->required();
  ax->add_option("--rule", ax_rule, "Rule descriptor")->required();
  ax_space.attach(ax);

  auto* lift = chk->add_subcommand("lifting", "Check that a rule lifts a constraint");
  std::string lift_rule, lift_constraint, lift_formula, lift_reading = "every";
  SpaceArgs lift_space;
  lift->add_option("--rule", lift_rule, "Rule descriptor")->required();
  auto* c_opt = lift->add_option("--constraint", lift_constraint, "Constraint, e.g. \"fd P: 1 -> 2\"");
  auto* f_opt = lift->add_option("--formula", lift_formula, "First-order sentence");
  c_opt->excludes(f_opt);
  lift->add_option("--reading", lift_reading, "every | some")->check(CLI::IsMember({"every", "some"}));
  lift_space.attach(lift);

  auto* com = chk->add_subcommand("commute", "Compare aggregate-then-query with query-then-aggregate");
  std::string com_rule, com_fragment = "fo";
  std::vector<std::string> com_queries;
  std::size_t com_count = 50, com_depth = 3;
  std::uint64_t com_qseed = 0;
  SpaceArgs com_space;
  com->add_option("--rule", com_rule, "Rule descriptor")->required();
  com->add_option("--fragment", com_fragment, "exists-positive | forall-positive | cq | fo");
  com->add_option("--query", com_queries, "Explicit query (repeatable); replaces generated ones");
  com->add_option("--queries", com_count, "Number of generated queries");
  com->add_option("--depth", com_depth, "Maximum depth of generated queries");
  com->add_option("--query-seed", com_qseed, "Seed for query generation");
  com_space.attach(com);

  // replay
  auto* rep = app.add_subcommand("replay", "Re-run the check recorded in a counterexample document");
  std::string rep_witness;
  rep->add_option("--witness", rep_witness, "Counterexample document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfigError;
  }

  try {
    if (*agg) {
      Rule rule = parse_rule(agg_rule);
      if (!agg_extra.empty()) {
        TupleUniverse u;
        for (const auto& e : agg_extra) {
          std::string symbol;
          Tuple t = parse_ground_tuple(e, symbol);
          u.extras[symbol].insert(std::move(t));
        }
        rule = rule.with_universe(std::move(u));
      }
      const auto doc = load_document(agg_input);
      const auto outcome = aggregate(rule, doc.profile);
      std::vector<Instance> winners = outcome.winners();
      if (agg_tie == "lex") winners = {outcome.lex_smallest()};
      json result{{"rule", to_string(rule)}};
      result["schema"] = to_json(doc.profile.schema());
      json instances = json::array();
      for (const auto& w : winners) instances.push_back(to_json(w));
      result["instances"] = std::move(instances);
      if (agg_output.empty()) {
        write(out, result);
      } else {
        std::ofstream f(agg_output);
        if (!f) throw ValidationError("cannot write " + agg_output);
        write(f, result);
      }
      return kExitPass;
    }

    if (*qry) {
      const auto doc = load_document(q_input);
      ParseOptions options;
      options.schema = doc.profile.schema();
      options.consts = doc.consts;
      const Query q = parse_query(q_text, options);
      for (const auto& t : answer(doc.profile.agent(q_agent), q).tuples) out << to_string(t) << "\n";
      return kExitPass;
    }

    if (*ax) {
      const Rule rule = parse_rule(ax_rule);
      const auto report = check_axiom(parse_axiom(ax_name), rule, ax_space.build());
      return emit_axiom(out, report, to_string(rule));
    }

    if (*lift) {
      const Rule rule = parse_rule(lift_rule);
      LiftOptions options;
      options.reading = parse_reading(lift_reading);
      const ProfileSpace space = lift_space.build();
      if (!lift_constraint.empty()) {
        const Constraint c = parse_constraint(lift_constraint);
        return emit_lifting(out, check_lifting(rule, c, space, options), to_string(rule), "constraint",
                            to_string(c), options.reading);
      }
      if (lift_formula.empty()) throw ValidationError("check lifting needs --constraint or --formula");
      if (space.empty()) throw ValidationError("the profile space is empty");
      const Formula phi = parse_formula(lift_formula, space.at(0).schema());
      return emit_lifting(out, check_lifting(rule, phi, space, options), to_string(rule), "formula", to_string(phi),
                          options.reading);
    }

    if (*com) {
      const Rule rule = parse_rule(com_rule);
      const Fragment fragment = parse_fragment(com_fragment);
      const ProfileSpace space = com_space.build();
      if (space.empty()) throw ValidationError("the profile space is empty");
      const Schema schema = space.at(0).schema();
      std::vector<Query> queries;
      if (!com_queries.empty()) {
        for (const auto& text : com_queries) queries.push_back(parse_query(text, schema));
      } else {
        for (const auto& f : enum_formulas(schema, fragment, com_depth, com_qseed, com_count)) {
          queries.push_back(query_of(f));
        }
      }
      const auto report = sweep(PreservationCheck::Commutes, rule, queries, space);
      return emit_commute(out, report, to_string(rule), to_string(fragment), queries.size());
    }

    if (*rep) return replay_document(load_json(rep_witness), out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const json::exception& e) {
    err << "error: malformed document: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace dbagg
