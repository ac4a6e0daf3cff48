#include <algorithm>
#include <cmath>

#include "dbagg/folang.hpp"

namespace dbagg {

namespace {

// Formula compiled against one instance: values interned as small integers
// (active domain first), variables mapped to slots, relations as lookup tables.
class Compiled {
 public:
  Compiled(const Instance& d, const Formula& phi, const std::set<Value>& extra) {
    for (const auto& v : active_domain(d)) intern(v);
    adom_size_ = static_cast<int>(values_.size());
    for (const auto& v : constants(phi)) intern(v);
    for (const auto& v : extra) intern(v);

    std::vector<std::pair<std::string, int>> scope;
    for (const auto& v : free_variables(phi)) {
      free_slots_[v] = static_cast<int>(slots_);
      scope.emplace_back(v, static_cast<int>(slots_++));
    }
    root_ = compile(phi, scope, d);
  }

  int id(const Value& v) const { return ids_.at(v); }
  const Value& value(int id) const { return values_[id]; }

  int slot_of(const std::string& var) const {
    auto it = free_slots_.find(var);
    return it == free_slots_.end() ? -1 : it->second;
  }

  std::vector<int> make_env() const { return std::vector<int>(slots_, -1); }

  bool eval(std::vector<int>& env) const { return eval(root_, env); }

 private:
  struct Table {
    std::size_t arity = 0;
    bool dense = false;
    std::size_t base = 0;
    std::vector<std::uint8_t> bits;
    std::set<std::vector<int>> sparse;

    bool contains(const int* ids) const {
      if (dense) {
        std::size_t key = 0;
        for (std::size_t i = 0; i < arity; ++i) key = key * base + static_cast<std::size_t>(ids[i]);
        return bits[key] != 0;
      }
      return sparse.count(std::vector<int>(ids, ids + arity)) > 0;
    }
  };

  struct Node {
    Formula::Kind kind = Formula::Kind::Eq;
    int left = -1, right = -1;  // children
    int slot = -1;              // Forall
    int table = -1;             // Atom
    std::vector<int> terms;     // Atom args or Eq sides; >= 0 slot, < 0 constant -(id+1)
  };

  int intern(const Value& v) {
    auto [it, inserted] = ids_.emplace(v, static_cast<int>(values_.size()));
    if (inserted) values_.push_back(v);
    return it->second;
  }

  int term_ref(const Term& t, const std::vector<std::pair<std::string, int>>& scope) const {
    if (!t.is_variable()) return -(ids_.at(t.value()) + 1);
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == t.name()) return it->second;
    }
    throw ValidationError("unbound variable '" + t.name() + "'");
  }

  int table_for(const std::string& symbol, std::size_t arity, const Instance& d) {
    auto it = table_ids_.find(symbol);
    if (it != table_ids_.end()) return it->second;
    if (d.schema().arity(symbol) != arity) {
      throw ValidationError("atom " + symbol + " has " + std::to_string(arity) +
                            " arguments but the symbol has arity " +
                            std::to_string(d.schema().arity(symbol)));
    }
    Table t;
    t.arity = arity;
    t.base = values_.size();
    const double cells = std::pow(static_cast<double>(t.base), static_cast<double>(arity));
    t.dense = cells <= double(1u << 22);
    if (t.dense) t.bits.assign(static_cast<std::size_t>(cells), 0);
    std::vector<int> ids(arity);
    for (const auto& tuple : d.relation(symbol)) {
      for (std::size_t i = 0; i < arity; ++i) ids[i] = ids_.at(tuple[i]);
      if (t.dense) {
        std::size_t key = 0;
        for (std::size_t i = 0; i < arity; ++i) key = key * t.base + static_cast<std::size_t>(ids[i]);
        t.bits[key] = 1;
      } else {
        t.sparse.insert(ids);
      }
    }
    tables_.push_back(std::move(t));
    const int index = static_cast<int>(tables_.size() - 1);
    table_ids_.emplace(symbol, index);
    return index;
  }

  int compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope, const Instance& d) {
    Node n;
    n.kind = f.kind();
    switch (f.kind()) {
      case Formula::Kind::Eq:
        n.terms = {term_ref(f.lhs(), scope), term_ref(f.rhs(), scope)};
        break;
      case Formula::Kind::Atom:
        for (const auto& t : f.args()) n.terms.push_back(term_ref(t, scope));
        n.table = table_for(f.symbol(), f.args().size(), d);
        break;
      case Formula::Kind::Not:
        n.left = compile(f.child(), scope, d);
        break;
      case Formula::Kind::Implies:
        n.left = compile(f.left(), scope, d);
        n.right = compile(f.right(), scope, d);
        break;
      case Formula::Kind::Forall:
        n.slot = static_cast<int>(slots_++);
        scope.emplace_back(f.variable(), n.slot);
        n.left = compile(f.body(), scope, d);
        scope.pop_back();
        break;
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
  }

  static int resolve(int ref, const std::vector<int>& env) { return ref >= 0 ? env[ref] : -ref - 1; }

  bool eval(int index, std::vector<int>& env) const {
    const Node& n = nodes_[index];
    switch (n.kind) {
      case Formula::Kind::Eq:
        return resolve(n.terms[0], env) == resolve(n.terms[1], env);
      case Formula::Kind::Atom: {
        int buf[16];
        std::vector<int> big;
        int* ids = buf;
        if (n.terms.size() > 16) {
          big.resize(n.terms.size());
          ids = big.data();
        }
        for (std::size_t i = 0; i < n.terms.size(); ++i) ids[i] = resolve(n.terms[i], env);
        return tables_[n.table].contains(ids);
      }
      case Formula::Kind::Not:
        return !eval(n.left, env);
      case Formula::Kind::Implies:
        return !eval(n.left, env) || eval(n.right, env);
      case Formula::Kind::Forall: {
        const int saved = env[n.slot];
        bool ok = true;
        for (int u = 0; u < adom_size_ && ok; ++u) {
          env[n.slot] = u;
          ok = eval(n.left, env);
        }
        env[n.slot] = saved;
        return ok;
      }
    }
    return false;
  }

  std::map<Value, int> ids_;
  std::vector<Value> values_;
  int adom_size_ = 0;
  std::size_t slots_ = 0;
  std::map<std::string, int> free_slots_;
  std::map<std::string, int> table_ids_;
  std::vector<Table> tables_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

void check_schema(const Instance& d, const Formula& phi) { validate(phi, d.schema()); }

Value fresh_value(const std::set<Value>& avoid) {
  std::string token = "#fresh";
  while (avoid.count(Value::constant(token))) token += "'";
  return Value::constant(token);
}

// Enumerates all assignments of `slots` over `range_ids`, calling fn(env).
template <class Fn>
bool for_each_assignment(std::vector<int>& env, const std::vector<int>& slots,
                         const std::vector<int>& range_ids, std::size_t k, const Fn& fn) {
  if (k == slots.size()) return fn(env);
  for (int id : range_ids) {
    env[slots[k]] = id;
    if (!for_each_assignment(env, slots, range_ids, k + 1, fn)) return false;
  }
  return true;
}

}  // namespace

bool satisfies(const Instance& d, const Assignment& sigma, const Formula& phi) {
  check_schema(d, phi);
  std::set<Value> extra;
  for (const auto& [name, v] : sigma) extra.insert(v);
  Compiled c(d, phi, extra);
  auto env = c.make_env();
  for (const auto& v : free_variables(phi)) {
    auto it = sigma.find(v);
    if (it == sigma.end()) throw ValidationError("assignment does not bind free variable '" + v + "'");
    env[c.slot_of(v)] = c.id(it->second);
  }
  return c.eval(env);
}

AnswerSet answer(const Instance& d, const Query& q, const std::set<Value>& range) {
  make_query(q.head, q.body);
  check_schema(d, q.body);
  Compiled c(d, q.body, range);
  std::vector<int> slots, range_ids;
  for (const auto& v : q.head) slots.push_back(c.slot_of(v));
  for (const auto& v : range) range_ids.push_back(c.id(v));
  AnswerSet out;
  out.width = q.head.size();
  auto env = c.make_env();
  for_each_assignment(env, slots, range_ids, 0, [&](std::vector<int>& e) {
    if (c.eval(e)) {
      Tuple t;
      t.reserve(slots.size());
      for (int s : slots) t.push_back(c.value(e[s]));
      out.tuples.insert(std::move(t));
    }
    return true;
  });
  return out;
}

AnswerSet answer(const Instance& d, const Query& q) { return answer(d, q, active_domain(d)); }

bool is_true(const Instance& d, const Formula& phi) {
  check_schema(d, phi);
  std::set<Value> range = active_domain(d);
  const auto consts = constants(phi);
  range.insert(consts.begin(), consts.end());
  const auto fv = free_variables(phi);
  if (!fv.empty()) range.insert(fresh_value(range));
  Compiled c(d, phi, range);
  std::vector<int> slots, range_ids;
  for (const auto& v : fv) slots.push_back(c.slot_of(v));
  for (const auto& v : range) range_ids.push_back(c.id(v));
  auto env = c.make_env();
  return for_each_assignment(env, slots, range_ids, 0, [&](std::vector<int>& e) { return c.eval(e); });
}

}  // namespace dbagg
