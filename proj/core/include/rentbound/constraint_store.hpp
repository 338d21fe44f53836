#pragma once

#include "rentbound/interval.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rentbound {

/// Name of a store variable. Never empty.
class VarId {
 public:
  explicit VarId(std::string name);
  VarId(const char* name) : VarId(std::string(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const VarId&, const VarId&) = default;
  friend bool operator==(const VarId&, const VarId&) = default;

 private:
  std::string name_;
};

enum class Relation { LT, LE, GT, GE, EQ };

struct OrderingConstraint {
  VarId left;
  Relation relation;
  VarId right;
};

struct SumTerm {
  Rational coefficient;
  VarId var;
};

/// output = offset + sum(coefficient_i * var_i)
struct SumConstraint {
  Interval offset;
  std::vector<SumTerm> terms;
  VarId output;
};

/// output = factor * prod(var_i)
struct MulConstraint {
  Interval factor;
  std::vector<VarId> terms;
  VarId output;
};

enum class StoreErrc {
  undeclared_variable,
  cyclic_derivation,
  invalid_constraint,
  store_inconsistent,
  fixpoint_cap_exceeded,
};

class StoreError : public std::runtime_error {
 public:
  StoreError(StoreErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  StoreErrc code() const noexcept { return code_; }

 private:
  StoreErrc code_;
};

/// Interval constraint store with forward propagation.
///
/// Variables carry closed rational intervals. Ordering constraints narrow
/// both sides with the rule `X<Y, X::A:B, Y::C:D ==> X::A:D, Y::A:D` (the
/// same narrowing serves <=; strictness is only checked once both sides are
/// ground). Sum and product constraints are forward-only: every round they
/// are re-evaluated from the current input domains and the result is
/// intersected into the output. The derivation graph (inputs -> output) must
/// stay acyclic.
///
/// Inconsistency is state, not an exception: once an intersection empties or
/// a ground relation fails, consistent() is false and domain() refuses.
class ConstraintStore {
 public:
  /// Declares v with iv, or intersects iv into an existing domain.
  void declare(const VarId& v, const Interval& iv);

  void post_ordering(OrderingConstraint oc);
  void post_sum(SumConstraint sc);
  void post_mul(MulConstraint mc);

  /// Runs rounds until no domain changes. Domains only shrink.
  void propagate();

  /// Called by propagate() with every narrowed domain, before consistency
  /// checks on it. Pass an empty function to detach.
  using Observer = std::function<void(const VarId&, const Interval&)>;
  void set_observer(Observer observer) { observer_ = std::move(observer); }

  bool consistent() const noexcept { return consistent_; }
  bool is_declared(const VarId& v) const { return domains_.contains(v); }
  bool is_ground(const VarId& v) const { return domain(v).is_singleton(); }

  /// Throws StoreError (store_inconsistent / undeclared_variable).
  const Interval& domain(const VarId& v) const;

  std::vector<VarId> variables() const;
  std::size_t variable_count() const noexcept { return domains_.size(); }
  std::size_t constraint_count() const noexcept {
    return orderings_.size() + sums_.size() + muls_.size();
  }

 private:
  struct Precedence {
    VarId lower;
    VarId upper;
    bool strict;
  };
  struct Derivation {
    bool is_sum;
    std::size_t index;
  };

  void require_declared(const VarId& v) const;
  void add_derivation_edges(const std::vector<VarId>& inputs, const VarId& output);
  bool reaches(const VarId& from, const VarId& to) const;
  std::vector<Precedence> precedence_closure() const;
  std::vector<Derivation> derivation_order() const;
  Interval evaluate(const SumConstraint& sc) const;
  Interval evaluate(const MulConstraint& mc) const;
  /// Intersects iv into v; returns true if the domain changed. Clears
  /// consistent_ on an empty intersection.
  bool narrow(const VarId& v, const Interval& iv);

  std::map<VarId, Interval> domains_;
  std::vector<OrderingConstraint> orderings_;
  std::vector<SumConstraint> sums_;
  std::vector<MulConstraint> muls_;
  std::map<VarId, std::vector<VarId>> derives_;  // input -> outputs
  bool consistent_ = true;
  Observer observer_;
};

}  // namespace rentbound
