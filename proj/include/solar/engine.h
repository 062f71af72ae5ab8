//===-- engine.h - Fixpoint solver with reflection resolution --*- C++ -*-===//
//
// Inclusion-based, flow- and context-insensitive points-to analysis over the
// statements reachable from Main.main (plus static initializers discovered on
// first reference), interleaved with the reflection handlers: propagation of
// string constants into metaobjects, collective inference of their missing
// parts, target search, transformation of resolved reflective calls into
// regular flows, and lazy materialization of unknown-typed objects at their
// usage points.
//
//===----------------------------------------------------------------------===//

#ifndef SOLAR_ENGINE_H
#define SOLAR_ENGINE_H

#include <map>

#include "solar/annotations.h"
#include "solar/reflect.h"
#include "solar/state.h"

namespace solar {

class Engine {
public:
  /// Validates the configuration and resolves annotations against the
  /// program (unknown sites, classes, or descriptors are hard errors).
  Engine(const Program &prog, EngineConfig config,
         const AnnotationSet *annotations = nullptr);

  /// Runs to a fixpoint and returns the final state. Throws BudgetExceeded
  /// if the sweep count passes the configured budget.
  const PointsToState &solve();

  /// One pass over every reachable statement; returns whether any fact was
  /// added. Exposed so tests can check that a solved state is stable.
  bool sweepOnce();

  const PointsToState &state() const { return state_; }
  const Program &program() const { return prog_; }
  const EngineConfig &config() const { return config_; }

private:
  struct ResolvedAnnotation {
    Annotation::Kind kind = Annotation::Kind::None;
    std::vector<const ClassType *> classes;
    std::vector<const MethodMember *> members;
  };

  const Program &prog_;
  EngineConfig config_;
  PointsToState state_;
  std::map<int, ResolvedAnnotation> annotations_; // by statement id
  std::set<std::pair<int, std::string>> reportedDiagnostics_;
  bool changed_ = false;

  // -- helpers --------------------------------------------------------------
  VarRef ref(const Statement &s, VarId v) const { return {s.enclosing, v}; }
  ObjId intern(const AbstractObject &o) { return state_.objects.intern(o); }
  void insertVar(const VarRef &v, ObjId o);
  void flowVar(const VarRef &from, const VarRef &to);
  void diagnostic(const Statement &s, const std::string &msg);
  void classDiscovered(const ClassType *t);
  void reachMethod(const MethodMember *m);

  /// Cast semantics shared by cast statements and result casts on reflective
  /// calls: known types filter by subtyping, unknown-typed objects are
  /// blocked and (full mode only) split into the cast type's subtypes.
  void castFlow(const Statement &at, const ClassType *castType, ObjId obj,
                const VarRef &to);

  void processStatement(const Statement &s);

  // pointer-analysis rules
  void onAlloc(const Statement &s);
  void onLoadStore(const Statement &s);
  void onVirtualCall(const Statement &s);
  void onStaticCall(const Statement &s);
  void bindCall(const Statement &s, const MethodMember *target, ObjId recvObj,
                const std::vector<VarId> &argVars);

  // reflection handlers
  void onForName(const Statement &s);
  void onGetClass(const Statement &s);
  void onGetMember(const Statement &s);
  void onNewInstance(const Statement &s);
  void onInvoke(const Statement &s);
  void onFieldGet(const Statement &s);
  void onFieldSet(const Statement &s);

  void inferInvoke(const Statement &s);
  void inferGet(const Statement &s);
  void inferSet(const Statement &s);
  void splitReceiverAt(const Statement &s, ObjKind metaKind);
  void transformInvoke(const Statement &s);
  void transformGet(const Statement &s);
  void transformSet(const Statement &s);

  std::vector<const ClassType *> castCompatibleTypes(const ClassType *a) const;
  bool receiverHasUnknown(const Statement &s) const;
  void recordInvokeTarget(const Statement &s, const MethodMember *m);
  void recordFieldTarget(const Statement &s, const FieldMember *f);
  void recordSplit(std::map<int, std::vector<const ClassType *>> &table,
                   int site, const ClassType *t);
};

} // namespace solar

#endif // SOLAR_ENGINE_H
