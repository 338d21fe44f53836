#include "rentbound/constraint_store.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace rentbound {

VarId::VarId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw std::invalid_argument("variable name must not be empty");
}

void ConstraintStore::declare(const VarId& v, const Interval& iv) {
  auto it = domains_.find(v);
  if (it == domains_.end()) {
    domains_.emplace(v, iv);
    return;
  }
  narrow(v, iv);
}

void ConstraintStore::require_declared(const VarId& v) const {
  if (!domains_.contains(v)) {
    throw StoreError(StoreErrc::undeclared_variable, "undeclared variable '" + v.name() + "'");
  }
}

void ConstraintStore::post_ordering(OrderingConstraint oc) {
  require_declared(oc.left);
  require_declared(oc.right);
  if (oc.left == oc.right && (oc.relation == Relation::LT || oc.relation == Relation::GT)) {
    consistent_ = false;
  }
  orderings_.push_back(std::move(oc));
}

namespace {

void require_distinct(const std::vector<VarId>& inputs, const VarId& output) {
  std::set<VarId> seen;
  for (const auto& v : inputs) {
    if (v == output) {
      throw StoreError(StoreErrc::invalid_constraint,
                       "variable '" + v.name() + "' is both input and output");
    }
    if (!seen.insert(v).second) {
      throw StoreError(StoreErrc::invalid_constraint,
                       "variable '" + v.name() + "' appears twice in one constraint");
    }
  }
}

}  // namespace

bool ConstraintStore::reaches(const VarId& from, const VarId& to) const {
  std::set<VarId> visited;
  std::vector<VarId> stack{from};
  while (!stack.empty()) {
    VarId cur = stack.back();
    stack.pop_back();
    if (cur == to) return true;
    if (!visited.insert(cur).second) continue;
    auto it = derives_.find(cur);
    if (it == derives_.end()) continue;
    for (const auto& next : it->second) stack.push_back(next);
  }
  return false;
}

void ConstraintStore::add_derivation_edges(const std::vector<VarId>& inputs, const VarId& output) {
  require_declared(output);
  for (const auto& v : inputs) require_declared(v);
  require_distinct(inputs, output);
  for (const auto& v : inputs) {
    if (reaches(output, v)) {
      throw StoreError(StoreErrc::cyclic_derivation,
                       "cyclic derivation: '" + output.name() + "' already feeds '" + v.name() + "'");
    }
  }
  for (const auto& v : inputs) derives_[v].push_back(output);
}

void ConstraintStore::post_sum(SumConstraint sc) {
  std::vector<VarId> inputs;
  inputs.reserve(sc.terms.size());
  for (const auto& t : sc.terms) inputs.push_back(t.var);
  add_derivation_edges(inputs, sc.output);
  sums_.push_back(std::move(sc));
}

void ConstraintStore::post_mul(MulConstraint mc) {
  add_derivation_edges(mc.terms, mc.output);
  muls_.push_back(std::move(mc));
}

const Interval& ConstraintStore::domain(const VarId& v) const {
  if (!consistent_) throw StoreError(StoreErrc::store_inconsistent, "store inconsistent");
  auto it = domains_.find(v);
  if (it == domains_.end()) {
    throw StoreError(StoreErrc::undeclared_variable, "undeclared variable '" + v.name() + "'");
  }
  return it->second;
}

std::vector<VarId> ConstraintStore::variables() const {
  std::vector<VarId> out;
  out.reserve(domains_.size());
  for (const auto& [v, _] : domains_) out.push_back(v);
  return out;
}

bool ConstraintStore::narrow(const VarId& v, const Interval& iv) {
  Interval& current = domains_.at(v);
  auto next = intersect(current, iv);
  if (!next) {
    consistent_ = false;
    return true;
  }
  if (*next == current) return false;
  current = std::move(*next);
  if (observer_) observer_(v, current);
  return true;
}

// Transitive closure over the ordering constraints (X>Y, Y>Z ==> X>Z). A
// strict self-precedence (X<...<X) is the antisymmetry failure and makes the
// store inconsistent.
std::vector<ConstraintStore::Precedence> ConstraintStore::precedence_closure() const {
  std::vector<VarId> vars;
  std::map<VarId, std::size_t> index;
  auto id_of = [&](const VarId& v) {
    auto [it, inserted] = index.emplace(v, vars.size());
    if (inserted) vars.push_back(v);
    return it->second;
  };
  struct Edge {
    std::size_t lower, upper;
    bool strict;
  };
  std::vector<Edge> edges;
  for (const auto& oc : orderings_) {
    const std::size_t l = id_of(oc.left);
    const std::size_t r = id_of(oc.right);
    switch (oc.relation) {
      case Relation::LT: edges.push_back({l, r, true}); break;
      case Relation::LE: edges.push_back({l, r, false}); break;
      case Relation::GT: edges.push_back({r, l, true}); break;
      case Relation::GE: edges.push_back({r, l, false}); break;
      case Relation::EQ:
        edges.push_back({l, r, false});
        edges.push_back({r, l, false});
        break;
    }
  }
  const std::size_t n = vars.size();
  // 0 = unrelated, 1 = lower <= upper, 2 = lower < upper
  std::vector<std::vector<int>> rel(n, std::vector<int>(n, 0));
  for (const auto& e : edges) rel[e.lower][e.upper] = std::max(rel[e.lower][e.upper], e.strict ? 2 : 1);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rel[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (rel[k][j] == 0) continue;
        rel[i][j] = std::max(rel[i][j], std::max(rel[i][k], rel[k][j]));
      }
    }
  }
  std::vector<Precedence> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rel[i][j] == 0) continue;
      if (i == j) {
        if (rel[i][j] == 2) out.push_back({vars[i], vars[j], true});
        continue;
      }
      out.push_back({vars[i], vars[j], rel[i][j] == 2});
    }
  }
  return out;
}

std::vector<ConstraintStore::Derivation> ConstraintStore::derivation_order() const {
  // Topological position of every variable in the derivation graph.
  std::map<VarId, std::size_t> position;
  std::set<VarId> visiting;
  std::vector<VarId> postorder;
  std::function<void(const VarId&)> visit = [&](const VarId& v) {
    if (position.contains(v) || visiting.contains(v)) return;
    visiting.insert(v);
    if (auto it = derives_.find(v); it != derives_.end()) {
      for (const auto& next : it->second) visit(next);
    }
    visiting.erase(v);
    position.emplace(v, 0);
    postorder.push_back(v);
  };
  for (const auto& [v, _] : domains_) visit(v);
  for (std::size_t i = 0; i < postorder.size(); ++i) {
    position[postorder[i]] = postorder.size() - 1 - i;
  }

  std::vector<Derivation> order;
  order.reserve(sums_.size() + muls_.size());
  for (std::size_t i = 0; i < sums_.size(); ++i) order.push_back({true, i});
  for (std::size_t i = 0; i < muls_.size(); ++i) order.push_back({false, i});
  std::stable_sort(order.begin(), order.end(), [&](const Derivation& a, const Derivation& b) {
    const VarId& oa = a.is_sum ? sums_[a.index].output : muls_[a.index].output;
    const VarId& ob = b.is_sum ? sums_[b.index].output : muls_[b.index].output;
    return position.at(oa) < position.at(ob);
  });
  return order;
}

// sum(Min:Max + C*X + Rest = Y), X::A:B ==> sum(Min+min(CA,CB) : Max+max(CA,CB) + Rest = Y)
// sum(Min:Max + 0 = Y) <=> Y::Min:Max
Interval ConstraintStore::evaluate(const SumConstraint& sc) const {
  Interval acc = sc.offset;
  for (const auto& term : sc.terms) acc = acc + scale(term.coefficient, domains_.at(term.var));
  return acc;
}

// mlt(Min:Max * X * Rest = Y), X::A:B ==> mlt(min/max of the four products * Rest = Y)
// mlt(Min:Max * 1 = Y) <=> Y::Min:Max
Interval ConstraintStore::evaluate(const MulConstraint& mc) const {
  Interval acc = mc.factor;
  for (const auto& var : mc.terms) acc = acc * domains_.at(var);
  return acc;
}

void ConstraintStore::propagate() {
  if (!consistent_) return;

  const std::vector<Precedence> precedences = precedence_closure();
  for (const auto& p : precedences) {
    if (p.lower == p.upper && p.strict) {
      consistent_ = false;
      return;
    }
  }
  const std::vector<Derivation> order = derivation_order();

  const std::size_t cap = std::max<std::size_t>(1, variable_count() * constraint_count());
  std::size_t changing_rounds = 0;
  for (;;) {
    bool changed = false;

    // X<Y, X::A:B, Y::C:D ==> X::A:D, Y::A:D
    for (const auto& p : precedences) {
      const Rational a = domains_.at(p.lower).lo();
      const Rational d = domains_.at(p.upper).hi();
      if (a > d) {
        consistent_ = false;
        return;
      }
      const Interval bound(a, d);
      changed |= narrow(p.lower, bound);
      if (!consistent_) return;
      changed |= narrow(p.upper, bound);
      if (!consistent_) return;
    }

    for (const auto& der : order) {
      if (der.is_sum) {
        const SumConstraint& sc = sums_[der.index];
        changed |= narrow(sc.output, evaluate(sc));
      } else {
        const MulConstraint& mc = muls_[der.index];
        changed |= narrow(mc.output, evaluate(mc));
      }
      if (!consistent_) return;
    }

    // Ground orderings are decided exactly.
    for (const auto& p : precedences) {
      const Interval& lower = domains_.at(p.lower);
      const Interval& upper = domains_.at(p.upper);
      if (!lower.is_singleton() || !upper.is_singleton()) continue;
      const bool holds = p.strict ? lower.lo() < upper.lo() : lower.lo() <= upper.lo();
      if (!holds) {
        consistent_ = false;
        return;
      }
    }

    if (!changed) return;
    if (++changing_rounds > cap) {
      throw StoreError(StoreErrc::fixpoint_cap_exceeded,
                       "propagation did not reach a fixpoint within " + std::to_string(cap) +
                           " rounds");
    }
  }
}

}  // namespace rentbound
