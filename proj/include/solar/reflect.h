//===-- reflect.h - Target search and signature queries --------*- C++ -*-===//
//
// Maps metaobjects to the concrete members they may denote, and signatures to
// the classes defining a matching member. These are pure queries over the
// hierarchy and the current points-to facts, shared by the fixpoint engine
// and the soundness checks.
//
//===----------------------------------------------------------------------===//

#ifndef SOLAR_REFLECT_H
#define SOLAR_REFLECT_H

#include <vector>

#include "solar/state.h"

namespace solar {

/// Classes defining (declaring or inheriting) a method matching the
/// signature. Requires a known name and known parameter list; the return
/// type, when known, must match exactly, otherwise it is ignored.
std::vector<const ClassType *> classesWithMethod(const Program &prog,
                                                 const MethodSig &sig);

/// Field analogue; requires known name and known field type.
std::vector<const ClassType *> classesWithField(const Program &prog,
                                                const FieldSig &sig);

/// Reflective method targets of a metaobject with a known class: the union
/// of matching members visible in the class and each of its supertypes.
/// DeclaredOnly scope confines the search to members declared by the class
/// itself. In the lightweight engine mode a fully unknown signature yields
/// nothing.
std::vector<const MethodMember *> methodTargets(const Program &prog,
                                                const AbstractObject &mo,
                                                EngineConfig::Mode mode);

std::vector<const FieldMember *> fieldTargets(const Program &prog,
                                              const AbstractObject &fo,
                                              EngineConfig::Mode mode);

/// Exact element-wise view of an invoke() argument array. The tuple set is
/// the per-position product of the supertype closures of the element types;
/// `exact` is false (and the set empty) when the argument variable does not
/// point to exactly one array literal.
struct ParamTypeTuples {
  bool exact = false;
  std::vector<std::vector<const ClassType *>> tuples;
  bool empty() const { return tuples.empty(); }
};

ParamTypeTuples paramTypeTuples(const Program &prog, const PointsToState &st,
                                const VarRef &argsVar);

/// Known types a usage point can give an unknown-typed object: everything on
/// the metaobject class's subtype chain in either direction, except Object
/// itself (an instance exposed through a member of class t is related to t).
std::vector<const ClassType *> lazySplitTypes(const Program &prog,
                                              const ClassType *memberClass);

} // namespace solar

#endif // SOLAR_REFLECT_H
