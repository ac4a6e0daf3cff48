#include "dbagg/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dbagg/error.hpp"

namespace dbagg {

json to_json(const Value& v) {
  if (v.is_null()) return nullptr;
  return v.token();
}

Value value_from_json(const json& j) {
  if (j.is_null()) return Value::null();
  if (j.is_string()) return Value::constant(j.get<std::string>());
  if (j.is_number_integer()) return Value::constant(std::to_string(j.get<long long>()));
  throw ValidationError("tuple entries must be strings, integers or null, got " + j.dump());
}

json to_json(const Tuple& t) {
  json out = json::array();
  for (const auto& v : t) out.push_back(to_json(v));
  return out;
}

Tuple tuple_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("a tuple must be a JSON array, got " + j.dump());
  Tuple t;
  for (const auto& v : j) t.push_back(value_from_json(v));
  return t;
}

json to_json(const Schema& s) {
  json out = json::object();
  for (const auto& [name, arity] : s.symbols()) out[name] = arity;
  return out;
}

Schema schema_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("schema must be an object of symbol arities");
  Schema::SymbolMap symbols;
  for (const auto& [name, arity] : j.items()) {
    if (!arity.is_number_unsigned()) throw ValidationError("arity of " + name + " must be a positive integer");
    symbols[name] = arity.get<std::size_t>();
  }
  return Schema(std::move(symbols));
}

json to_json(const Instance& d) {
  json out = json::object();
  for (const auto& [name, rel] : d.relations()) {
    json rows = json::array();
    for (const auto& t : rel) rows.push_back(to_json(t));
    out[name] = std::move(rows);
  }
  return out;
}

Instance instance_from_json(const json& j, const Schema& schema) {
  if (!j.is_object()) throw ValidationError("an instance must be an object of relations");
  Instance d(schema);
  for (const auto& [name, rows] : j.items()) {
    if (!schema.contains(name)) throw ValidationError("relation " + name + " is not in the schema");
    if (!rows.is_array()) throw ValidationError("relation " + name + " must be an array of tuples");
    for (const auto& row : rows) d.insert(name, tuple_from_json(row));
  }
  return d;
}

json to_json(const Profile& p) { return to_json(ProfileDocument{p, {}}); }

json to_json(const ProfileDocument& doc) {
  json out = json::object();
  out["schema"] = to_json(doc.profile.schema());
  if (!doc.consts.empty()) out["consts"] = doc.consts;
  json instances = json::array();
  for (const auto& d : doc.profile) instances.push_back(to_json(d));
  out["instances"] = std::move(instances);
  return out;
}

ProfileDocument document_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("a profile document must be a JSON object");
  if (!j.contains("schema")) throw ValidationError("profile document lacks \"schema\"");
  if (!j.contains("instances") || !j["instances"].is_array()) {
    throw ValidationError("profile document lacks an \"instances\" array");
  }
  const Schema schema = schema_from_json(j["schema"]);
  std::vector<Instance> instances;
  for (const auto& d : j["instances"]) instances.push_back(instance_from_json(d, schema));
  std::set<std::string> consts;
  if (j.contains("consts")) {
    for (const auto& c : j["consts"]) {
      if (!c.is_string()) throw ValidationError("consts must be strings");
      consts.insert(c.get<std::string>());
    }
  }
  return ProfileDocument{Profile(std::move(instances)), std::move(consts)};
}

namespace {

bool flat(const json& j) {
  if (!j.is_array()) return !j.is_object();
  return std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
}

void pretty_into(const json& j, std::string& out, int indent) {
  if (flat(j)) {
    out += j.dump();
    return;
  }
  const bool object = j.is_object();
  if (j.empty()) {
    out += object ? "{}" : "[]";
    return;
  }
  out += object ? "{\n" : "[\n";
  const std::string pad(indent + 2, ' ');
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (object) out += json(it.key()).dump() + ": ";
    pretty_into(*it, out, indent + 2);
  }
  out += "\n" + std::string(indent, ' ') + (object ? "}" : "]");
}

}  // namespace

std::string pretty(const json& j) {
  std::string out;
  pretty_into(j, out, 0);
  return out + "\n";
}

std::string serialize(const Profile& p) { return pretty(to_json(p)); }

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
}

}  // namespace

ProfileDocument parse_document(std::string_view text) { return document_from_json(parse_json(text)); }

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

ProfileDocument load_document(const std::string& path) { return document_from_json(load_json(path)); }

SpaceSpec space_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("a space must be a JSON object");
  SpaceSpec spec;
  if (!j.contains("schema")) throw ValidationError("space lacks \"schema\"");
  spec.schema = schema_from_json(j["schema"]);
  const json domain = j.value("domain", json(3));
  if (domain.is_number_unsigned()) {
    spec.domain = letter_domain(domain.get<std::size_t>());
  } else if (domain.is_array()) {
    for (const auto& v : domain) spec.domain.push_back(value_from_json(v));
  } else {
    throw ValidationError("domain must be a size or an array of values");
  }
  spec.max_tuples = j.value("max_tuples", spec.max_tuples);
  spec.agents = j.value("agents", spec.agents);
  const std::string mode = j.value("mode", std::string("exhaustive"));
  if (mode == "exhaustive") {
    spec.mode = SpaceMode::Exhaustive;
  } else if (mode == "sampled") {
    spec.mode = SpaceMode::Sampled;
  } else {
    throw ValidationError("unknown space mode '" + mode + "'");
  }
  spec.seed = j.value("seed", spec.seed);
  spec.count = j.value("count", spec.count);
  if (j.contains("constraints")) {
    for (const auto& c : j["constraints"]) spec.constraints.push_back(parse_constraint(c.get<std::string>()));
  }
  if (j.contains("shared")) {
    for (const auto& s : j["shared"]) spec.shared_symbols.insert(s.get<std::string>());
  }
  return spec;
}

json to_json(const SpaceSpec& spec) {
  json out = json::object();
  out["schema"] = to_json(spec.schema);
  json domain = json::array();
  for (const auto& v : spec.domain) domain.push_back(to_json(v));
  out["domain"] = std::move(domain);
  out["max_tuples"] = spec.max_tuples;
  out["agents"] = spec.agents;
  out["mode"] = spec.mode == SpaceMode::Exhaustive ? "exhaustive" : "sampled";
  out["seed"] = spec.seed;
  out["count"] = spec.count;
  json constraints = json::array();
  for (const auto& c : spec.constraints) constraints.push_back(to_string(c));
  out["constraints"] = std::move(constraints);
  out["shared"] = spec.shared_symbols;
  return out;
}

json to_json(const AxiomWitness& w) {
  json out = json::object();
  json profiles = json::array();
  for (const auto& p : w.profiles) profiles.push_back(to_json(p));
  out["profiles"] = std::move(profiles);
  if (!w.symbol.empty()) out["symbol"] = w.symbol;
  if (!w.tuples.empty()) {
    json tuples = json::array();
    for (const auto& t : w.tuples) tuples.push_back(to_json(t));
    out["tuples"] = std::move(tuples);
  }
  if (!w.agent_order.empty()) out["agent_order"] = w.agent_order;
  if (!w.permutation.empty()) {
    json perm = json::array();
    for (const auto& [from, to] : w.permutation) perm.push_back(json::array({to_json(from), to_json(to)}));
    out["permutation"] = std::move(perm);
  }
  if (!w.detail.empty()) out["detail"] = w.detail;
  return out;
}

AxiomWitness witness_from_json(const json& j) {
  AxiomWitness w;
  if (!j.contains("profiles") || !j["profiles"].is_array() || j["profiles"].empty()) {
    throw ValidationError("witness lacks \"profiles\"");
  }
  for (const auto& p : j["profiles"]) w.profiles.push_back(document_from_json(p).profile);
  w.symbol = j.value("symbol", std::string());
  if (j.contains("tuples")) {
    for (const auto& t : j["tuples"]) w.tuples.push_back(tuple_from_json(t));
  }
  if (j.contains("agent_order")) w.agent_order = j["agent_order"].get<std::vector<std::size_t>>();
  if (j.contains("permutation")) {
    for (const auto& pair : j["permutation"]) {
      if (!pair.is_array() || pair.size() != 2) throw ValidationError("permutation entries are [from, to] pairs");
      w.permutation[value_from_json(pair[0])] = value_from_json(pair[1]);
    }
  }
  w.detail = j.value("detail", std::string());
  return w;
}

json to_json(const AnswerSet& a) {
  json rows = json::array();
  for (const auto& t : a.tuples) rows.push_back(to_json(t));
  return json{{"width", a.width}, {"tuples", std::move(rows)}};
}

json to_json(const CommutationReport& r) {
  json left = json::array(), right = json::array();
  for (const auto& a : r.left) left.push_back(to_json(a));
  for (const auto& a : r.right) right.push_back(to_json(a));
  json out{{"rule", r.rule}, {"query", r.query}, {"commutes", r.commutes}, {"left", std::move(left)},
           {"right", std::move(right)}};
  if (!r.diff.empty()) out["diff"] = r.diff;
  return out;
}

}  // namespace dbagg
