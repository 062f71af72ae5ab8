//===-- reflect.cpp ----------------------------------------------------------===//

#include "solar/reflect.h"

#include <algorithm>
#include <cassert>

namespace solar {

std::vector<const ClassType *> classesWithMethod(const Program &prog,
                                                 const MethodSig &sig) {
  std::vector<const ClassType *> out;
  if (!sig.name || !sig.paramTypes)
    return out;
  for (auto &c : prog.classes()) {
    if (!prog.mtdLookup(c.get(), sig).empty())
      out.push_back(c.get());
  }
  return out;
}

std::vector<const ClassType *> classesWithField(const Program &prog,
                                                const FieldSig &sig) {
  std::vector<const ClassType *> out;
  if (!sig.name || !sig.fieldType)
    return out;
  for (auto &c : prog.classes()) {
    if (!prog.fldLookup(c.get(), sig).empty())
      out.push_back(c.get());
  }
  return out;
}

std::vector<const MethodMember *> methodTargets(const Program &prog,
                                                const AbstractObject &mo,
                                                EngineConfig::Mode mode) {
  assert(mo.kind == ObjKind::MethodObj);
  std::vector<const MethodMember *> out;
  if (!mo.typeKnown())
    return out;
  if (mode == EngineConfig::Mode::Probe && mo.msig.sigUnknown())
    return out;
  if (mo.scope == MemberScope::DeclaredOnly)
    return prog.mtdLookupDeclared(mo.type, mo.msig);
  for (const ClassType *sup : prog.supertypesOf(mo.type))
    for (const MethodMember *m : prog.mtdLookup(sup, mo.msig))
      if (std::find(out.begin(), out.end(), m) == out.end())
        out.push_back(m);
  return out;
}

std::vector<const FieldMember *> fieldTargets(const Program &prog,
                                              const AbstractObject &fo,
                                              EngineConfig::Mode mode) {
  assert(fo.kind == ObjKind::FieldObj);
  std::vector<const FieldMember *> out;
  if (!fo.typeKnown())
    return out;
  if (mode == EngineConfig::Mode::Probe && fo.fsig.sigUnknown())
    return out;
  if (fo.scope == MemberScope::DeclaredOnly)
    return prog.fldLookupDeclared(fo.type, fo.fsig);
  for (const ClassType *sup : prog.supertypesOf(fo.type))
    for (const FieldMember *f : prog.fldLookup(sup, fo.fsig))
      if (std::find(out.begin(), out.end(), f) == out.end())
        out.push_back(f);
  return out;
}

ParamTypeTuples paramTypeTuples(const Program &prog, const PointsToState &st,
                                const VarRef &argsVar) {
  ParamTypeTuples result;
  const PtSet &arrays = st.varPt(argsVar);
  if (arrays.size() != 1)
    return result;
  const AbstractObject &arr = st.objects[*arrays.begin()];
  if (arr.kind != ObjKind::ArrayObj || !arr.exactElems)
    return result;
  const Statement &lit = prog.statementAt(arr.site);
  assert(lit.kind == StmtKind::ArrayLit);

  // Per-position supertype closures of the element objects' types.
  std::vector<std::vector<const ClassType *>> perPos;
  for (VarId elem : lit.args) {
    std::vector<const ClassType *> types;
    VarRef ev{lit.enclosing, elem};
    for (ObjId o : st.varPt(ev)) {
      const ClassType *t = dynamicType(prog, st.objects[o]);
      if (!t)
        continue; // unknown dynamic type contributes nothing
      for (const ClassType *sup : prog.supertypesOf(t))
        if (std::find(types.begin(), types.end(), sup) == types.end())
          types.push_back(sup);
    }
    if (types.empty())
      return result; // a position with no known types: not analyzable
    perPos.push_back(std::move(types));
  }

  result.exact = true;
  result.tuples.push_back({}); // empty product is a singleton
  for (const auto &pos : perPos) {
    std::vector<std::vector<const ClassType *>> next;
    for (const auto &tuple : result.tuples)
      for (const ClassType *t : pos) {
        auto extended = tuple;
        extended.push_back(t);
        next.push_back(std::move(extended));
      }
    result.tuples = std::move(next);
  }
  return result;
}

std::vector<const ClassType *> lazySplitTypes(const Program &prog,
                                              const ClassType *memberClass) {
  std::vector<const ClassType *> out;
  for (auto &c : prog.classes()) {
    if (c.get() == prog.objectType())
      continue;
    if (prog.isSubtype(c.get(), memberClass) ||
        prog.isSubtype(memberClass, c.get()))
      out.push_back(c.get());
  }
  return out;
}

} // namespace solar
