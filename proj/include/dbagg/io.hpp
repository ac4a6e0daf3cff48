#pragma once

// JSON documents for profiles, spaces and counterexamples.
//
//   {"schema": {"P": 2}, "consts": ["a"], "instances": [{"P": [["a", "b"]]}, ...]}
//
// JSON null inside a tuple is the null value; integers are read as tokens.
// Output is canonical: symbols and tuples in sorted order.

#include <set>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dbagg/axioms.hpp"
#include "dbagg/core.hpp"
#include "dbagg/lifting.hpp"
#include "dbagg/oracle.hpp"
#include "dbagg/preservation.hpp"

namespace dbagg {

using nlohmann::json;

json to_json(const Value& v);
Value value_from_json(const json& j);
json to_json(const Tuple& t);
Tuple tuple_from_json(const json& j);

json to_json(const Schema& s);
Schema schema_from_json(const json& j);

/// Every symbol of the schema appears, empty relations included.
json to_json(const Instance& d);
Instance instance_from_json(const json& j, const Schema& schema);

struct ProfileDocument {
  Profile profile;
  /// Bare identifiers that queries over this document treat as constants.
  std::set<std::string> consts;
};

json to_json(const ProfileDocument& doc);
ProfileDocument document_from_json(const json& j);
json to_json(const Profile& p);

/// Indented JSON with arrays of scalars (tuples) kept on one line.
std::string pretty(const json& j);

std::string serialize(const Profile& p);
/// Throws ParseError on malformed JSON, ValidationError on a bad document.
ProfileDocument parse_document(std::string_view text);
ProfileDocument load_document(const std::string& path);
json load_json(const std::string& path);

/// {"schema": ..., "domain": 3 | ["a", ...], "max_tuples", "agents", "mode":
/// "exhaustive" | "sampled", "seed", "count", "constraints": [...], "shared": [...]}
SpaceSpec space_from_json(const json& j);
json to_json(const SpaceSpec& spec);

json to_json(const AxiomWitness& w);
AxiomWitness witness_from_json(const json& j);
json to_json(const AnswerSet& a);
json to_json(const CommutationReport& r);

}  // namespace dbagg
