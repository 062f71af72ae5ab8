//===-- state.h - Points-to state and engine configuration -----*- C++ -*-===//

#ifndef SOLAR_STATE_H
#define SOLAR_STATE_H

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "solar/objects.h"

namespace solar {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Insertion-ordered object set; points-to sets only ever grow.
class PtSet {
public:
  bool insert(ObjId o) {
    if (members_.count(o))
      return false;
    members_.insert(o);
    order_.push_back(o);
    return true;
  }
  bool contains(ObjId o) const { return members_.count(o) != 0; }
  size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  const std::vector<ObjId> &order() const { return order_; }
  std::vector<ObjId>::const_iterator begin() const { return order_.begin(); }
  std::vector<ObjId>::const_iterator end() const { return order_.end(); }

private:
  std::vector<ObjId> order_;
  std::unordered_set<ObjId> members_;
};

struct EngineConfig {
  enum class Mode { Solar, Probe };

  Mode mode = Mode::Solar;
  int castImprecisionThreshold = 10;
  int targetImprecisionThreshold = 50;
  long maxSweeps = 100000;

  /// Rule switches used by the mutation-sensitivity tests; all rules are
  /// enabled in normal operation.
  enum RuleBit : uint32_t {
    kInferInvokeReceiverType = 1u << 0, // refine method class from receiver
    kInferInvokeSigToClass = 1u << 1,   // refine method class from signature
    kCastSplit = 1u << 2,               // materialize unknown objects at casts
    kInvokeReceiverSplit = 1u << 3,     // materialize at invoke receivers
    kInvokeArgTypeFilter = 1u << 4,     // drop args incompatible with params
  };
  uint32_t disabledRules = 0;

  bool ruleEnabled(RuleBit b) const { return (disabledRules & b) == 0; }
  void validate() const {
    if (castImprecisionThreshold < 1 || targetImprecisionThreshold < 1)
      throw AnalysisError("imprecision thresholds must be >= 1");
    if (maxSweeps < 1)
      throw AnalysisError("iteration budget must be >= 1");
  }
};

/// A pointer variable, program-wide. Globals are assigned densely per
/// (method, local) pair when a method becomes reachable.
struct VarRef {
  const MethodMember *method = nullptr;
  VarId local = kNoVar;
  bool valid() const { return method && local != kNoVar; }
  bool operator<(const VarRef &o) const {
    if (method != o.method)
      return (method ? method->id : -1) < (o.method ? o.method->id : -1);
    return local < o.local;
  }
  bool operator==(const VarRef &o) const = default;
};

/// Record of a fact synthesized by transformation; kept for reporting and
/// the derivation-replay tests, the flows themselves go straight into the
/// points-to sets.
struct DerivedFact {
  enum class Kind { Call, Load, Store };
  Kind kind{};
  int site = -1;                         // reflective call statement id
  const MethodMember *callee = nullptr;  // Kind::Call
  const FieldMember *field = nullptr;    // Kind::Load / Kind::Store
  bool operator<(const DerivedFact &o) const {
    auto key = [](const DerivedFact &f) {
      return std::tuple((int)f.kind, f.site,
                        f.callee ? f.callee->id : -1,
                        f.field ? f.field->id : -1);
    };
    return key(*this) < key(o);
  }
};

struct Diagnostic {
  int site = -1;
  std::string message;
};

class PointsToState {
public:
  ObjectTable objects;

  // -- variable / field / static points-to sets ---------------------------
  PtSet &varPt(const VarRef &v) { return varPt_[v]; }
  const PtSet &varPt(const VarRef &v) const {
    static const PtSet empty;
    auto it = varPt_.find(v);
    return it == varPt_.end() ? empty : it->second;
  }

  /// Field slots exist only on objects of known type (and on arrays, whose
  /// collapsed element slot uses field == nullptr).
  PtSet &fieldPt(ObjId base, const FieldMember *fieldOrArr);
  const PtSet &fieldPt(ObjId base, const FieldMember *fieldOrArr) const;

  PtSet &staticPt(const FieldMember *f) { return staticPt_[f]; }
  const PtSet &staticPt(const FieldMember *f) const {
    static const PtSet empty;
    auto it = staticPt_.find(f);
    return it == staticPt_.end() ? empty : it->second;
  }

  // -- call graph and derived facts ----------------------------------------
  bool addCallEdge(int site, const MethodMember *target) {
    if (!callEdgeSet_.insert({site, target}).second)
      return false;
    callEdges_.push_back({site, target});
    return true;
  }
  const std::vector<std::pair<int, const MethodMember *>> &callEdges() const {
    return callEdges_;
  }
  bool hasCallEdge(int site, const MethodMember *target) const {
    return callEdgeSet_.count({site, target}) != 0;
  }

  bool addDerived(const DerivedFact &f) { return derived_.insert(f).second; }
  const std::set<DerivedFact> &derivedFacts() const { return derived_; }

  // -- reflection bookkeeping (reports, imprecision metrics) ---------------
  /// Known types materialized from unknown-typed objects, per cast site and
  /// per side-effect receiver site.
  std::map<int, std::vector<const ClassType *>> castSplits;
  std::map<int, std::vector<const ClassType *>> sideEffectSplits;
  /// Distinct members found by target search per side-effect site.
  std::map<int, std::vector<const MethodMember *>> invokeTargets;
  std::map<int, std::vector<const FieldMember *>> fieldTargets;

  std::vector<Diagnostic> diagnostics;

  // -- reachability ---------------------------------------------------------
  const std::vector<const MethodMember *> &reachableMethods() const {
    return reachable_;
  }
  bool markReachable(const MethodMember *m) {
    if (reachableSet_.count(m))
      return false;
    reachableSet_.insert(m);
    reachable_.push_back(m);
    return true;
  }
  bool isReachable(const MethodMember *m) const {
    return reachableSet_.count(m) != 0;
  }

  long sweeps = 0;

  /// Total number of facts; used by the idempotence and monotonicity checks.
  size_t factCount() const;

private:
  std::map<VarRef, PtSet> varPt_;
  std::map<std::pair<ObjId, const FieldMember *>, PtSet> fieldPt_;
  std::map<const FieldMember *, PtSet> staticPt_;
  std::vector<std::pair<int, const MethodMember *>> callEdges_;
  std::set<std::pair<int, const MethodMember *>> callEdgeSet_;
  std::set<DerivedFact> derived_;
  std::vector<const MethodMember *> reachable_;
  std::unordered_set<const MethodMember *> reachableSet_;
};

} // namespace solar

#endif // SOLAR_STATE_H
