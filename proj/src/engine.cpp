//===-- engine.cpp - Fixpoint solver ----------------------------------------===//

#include "solar/engine.h"

#include <cassert>

namespace solar {

Engine::Engine(const Program &prog, EngineConfig config,
               const AnnotationSet *annotations)
    : prog_(prog), config_(config) {
  config_.validate();
  if (!annotations || annotations->empty())
    return;

  std::map<std::string, const Statement *> byKey;
  for (const Statement *s : prog_.allStatements())
    byKey[s->site.str()] = s;

  for (const auto &[key, ann] : annotations->all()) {
    auto it = byKey.find(key);
    if (it == byKey.end())
      throw AnnotationError("annotation site '" + key +
                            "' does not exist in the program");
    const Statement &s = *it->second;
    ResolvedAnnotation res;
    res.kind = ann.kind;
    bool memberSite = s.kind == StmtKind::GetMember;
    bool entrySite = s.kind == StmtKind::ForName;
    if (!memberSite && !entrySite)
      throw AnnotationError("annotation site '" + key +
                            "' is not an entry or member-introspecting call");
    switch (ann.kind) {
    case Annotation::Kind::Classes: {
      if (!entrySite)
        throw AnnotationError("class annotation at '" + key +
                              "' requires a forName site");
      for (const std::string &name : ann.classNames) {
        const ClassType *t = prog_.findClass(name);
        if (!t)
          throw AnnotationError("annotation at '" + key +
                                "' names unknown class '" + name + "'");
        res.classes.push_back(t);
      }
      break;
    }
    case Annotation::Kind::Methods: {
      if (!memberSite || introspectIsField(s.introspect))
        throw AnnotationError("method annotation at '" + key +
                              "' requires a method-introspecting site");
      for (const MethodDescriptor &d : ann.descriptors)
        res.members.push_back(resolveDescriptor(prog_, d));
      break;
    }
    case Annotation::Kind::None:
      break;
    }
    annotations_.emplace(s.id, std::move(res));
  }
}

const PointsToState &Engine::solve() {
  reachMethod(prog_.entryMain());
  classDiscovered(prog_.entryMain()->declaring);
  while (true) {
    if (state_.sweeps >= config_.maxSweeps)
      throw BudgetExceeded("sweep budget exceeded (" +
                           std::to_string(config_.maxSweeps) +
                           "); the abstract domain is finite, so this "
                           "signals a divergence bug");
    if (!sweepOnce())
      break;
  }
  return state_;
}

bool Engine::sweepOnce() {
  changed_ = false;
  ++state_.sweeps;
  const auto &reachable = state_.reachableMethods();
  for (size_t i = 0; i < reachable.size(); ++i) {
    const MethodMember *m = reachable[i];
    for (const Statement &s : m->body)
      processStatement(s);
  }
  return changed_;
}

// -- helpers -----------------------------------------------------------------

void Engine::insertVar(const VarRef &v, ObjId o) {
  if (v.valid() && state_.varPt(v).insert(o) /*grew*/)
    changed_ = true;
}

void Engine::flowVar(const VarRef &from, const VarRef &to) {
  if (!from.valid() || !to.valid())
    return;
  const auto &order = state_.varPt(from).order();
  for (size_t i = 0; i < order.size(); ++i)
    insertVar(to, order[i]);
}

void Engine::diagnostic(const Statement &s, const std::string &msg) {
  if (reportedDiagnostics_.insert({s.id, msg}).second)
    state_.diagnostics.push_back({s.id, msg});
}

void Engine::reachMethod(const MethodMember *m) {
  if (state_.markReachable(m))
    changed_ = true;
}

void Engine::classDiscovered(const ClassType *t) {
  for (auto &m : t->declaredMethods())
    if (m->isStatic && m->name == "clinit" && m->paramTypes.empty())
      reachMethod(m.get());
}

void Engine::recordSplit(std::map<int, std::vector<const ClassType *>> &table,
                         int site, const ClassType *t) {
  auto &v = table[site];
  if (std::find(v.begin(), v.end(), t) == v.end()) {
    v.push_back(t);
    changed_ = true;
  }
}

void Engine::recordInvokeTarget(const Statement &s, const MethodMember *m) {
  auto &v = state_.invokeTargets[s.id];
  if (std::find(v.begin(), v.end(), m) == v.end())
    v.push_back(m);
}

void Engine::recordFieldTarget(const Statement &s, const FieldMember *f) {
  auto &v = state_.fieldTargets[s.id];
  if (std::find(v.begin(), v.end(), f) == v.end())
    v.push_back(f);
}

void Engine::castFlow(const Statement &at, const ClassType *castType,
                      ObjId obj, const VarRef &to) {
  const AbstractObject o = state_.objects[obj]; // copy: table may grow
  if (castType == prog_.objectType()) {
    insertVar(to, obj); // no effective cast
    return;
  }
  const ClassType *dyn = dynamicType(prog_, o);
  if (dyn) {
    if (prog_.isSubtype(dyn, castType))
      insertVar(to, obj);
    return;
  }
  // Unknown-typed object: blocked, and in full mode materialized as every
  // subtype of the cast type at this point.
  if (config_.mode != EngineConfig::Mode::Solar ||
      !config_.ruleEnabled(EngineConfig::kCastSplit))
    return;
  for (const ClassType *t : prog_.subtypesOf(castType)) {
    ObjId split = intern(AbstractObject::heap(o.site, t));
    insertVar(to, split);
    recordSplit(state_.castSplits, at.id, t);
    classDiscovered(t);
  }
}

std::vector<const ClassType *>
Engine::castCompatibleTypes(const ClassType *a) const {
  std::vector<const ClassType *> out;
  for (auto &c : prog_.classes())
    if (prog_.compatible(c.get(), a))
      out.push_back(c.get());
  return out;
}

bool Engine::receiverHasUnknown(const Statement &s) const {
  if (s.recv == kNoVar)
    return false;
  for (ObjId o : state_.varPt(ref(s, s.recv)))
    if (state_.objects[o].kind == ObjKind::Heap &&
        !state_.objects[o].typeKnown())
      return true;
  return false;
}

// -- statement dispatch --------------------------------------------------------

void Engine::processStatement(const Statement &s) {
  switch (s.kind) {
  case StmtKind::Alloc:
    onAlloc(s);
    break;
  case StmtKind::Copy:
    flowVar(ref(s, s.rhs), ref(s, s.lhs));
    break;
  case StmtKind::Load:
  case StmtKind::Store:
  case StmtKind::StaticLoad:
  case StmtKind::StaticStore:
  case StmtKind::ArrayLit:
  case StmtKind::UnknownArray:
  case StmtKind::ArrayLoad:
  case StmtKind::ArrayStore:
    onLoadStore(s);
    break;
  case StmtKind::VirtualCall:
    onVirtualCall(s);
    break;
  case StmtKind::StaticCall:
    onStaticCall(s);
    break;
  case StmtKind::StringConst:
    insertVar(ref(s, s.lhs), intern(AbstractObject::stringConst(s.id, s.literal)));
    break;
  case StmtKind::UnknownString:
    insertVar(ref(s, s.lhs), intern(AbstractObject::unknownString(s.id)));
    break;
  case StmtKind::Cast: {
    const auto &order = state_.varPt(ref(s, s.rhs)).order();
    for (size_t i = 0; i < order.size(); ++i)
      castFlow(s, s.type, order[i], ref(s, s.lhs));
    break;
  }
  case StmtKind::ForName:
    onForName(s);
    break;
  case StmtKind::GetClass:
    onGetClass(s);
    break;
  case StmtKind::ClassLit:
    insertVar(ref(s, s.lhs), intern(AbstractObject::classObj(s.id, s.type)));
    classDiscovered(s.type);
    break;
  case StmtKind::GetMember:
    onGetMember(s);
    break;
  case StmtKind::NewInstance:
    onNewInstance(s);
    break;
  case StmtKind::Invoke:
    onInvoke(s);
    break;
  case StmtKind::FieldGet:
    onFieldGet(s);
    break;
  case StmtKind::FieldSet:
    onFieldSet(s);
    break;
  }
}

// -- pointer-analysis rules ----------------------------------------------------

void Engine::onAlloc(const Statement &s) {
  insertVar(ref(s, s.lhs), intern(AbstractObject::heap(s.id, s.type)));
  classDiscovered(s.type);
}

void Engine::onLoadStore(const Statement &s) {
  switch (s.kind) {
  case StmtKind::Load: {
    const auto &bases = state_.varPt(ref(s, s.base)).order();
    for (size_t i = 0; i < bases.size(); ++i) {
      const AbstractObject &o = state_.objects[bases[i]];
      // Fields exist only on objects of known type.
      if (o.kind != ObjKind::Heap || !o.typeKnown())
        continue;
      const FieldMember *f = prog_.findVisibleField(o.type, s.name);
      if (!f || f->isStatic)
        continue;
      const auto &vals = state_.fieldPt(bases[i], f).order();
      for (size_t k = 0; k < vals.size(); ++k)
        insertVar(ref(s, s.lhs), vals[k]);
    }
    break;
  }
  case StmtKind::Store: {
    const auto &bases = state_.varPt(ref(s, s.base)).order();
    for (size_t i = 0; i < bases.size(); ++i) {
      const AbstractObject &o = state_.objects[bases[i]];
      if (o.kind != ObjKind::Heap || !o.typeKnown())
        continue;
      const FieldMember *f = prog_.findVisibleField(o.type, s.name);
      if (!f || f->isStatic)
        continue;
      PtSet &slot = state_.fieldPt(bases[i], f);
      for (ObjId v : state_.varPt(ref(s, s.rhs)).order())
        if (slot.insert(v))
          changed_ = true;
    }
    break;
  }
  case StmtKind::StaticLoad: {
    classDiscovered(s.staticField->declaring);
    for (ObjId v : state_.staticPt(s.staticField).order())
      insertVar(ref(s, s.lhs), v);
    break;
  }
  case StmtKind::StaticStore: {
    classDiscovered(s.staticField->declaring);
    PtSet &slot = state_.staticPt(s.staticField);
    for (ObjId v : state_.varPt(ref(s, s.rhs)).order())
      if (slot.insert(v))
        changed_ = true;
    break;
  }
  case StmtKind::ArrayLit: {
    ObjId arr = intern(AbstractObject::array(s.id, /*exact=*/true));
    insertVar(ref(s, s.lhs), arr);
    PtSet &slot = state_.fieldPt(arr, nullptr);
    for (VarId e : s.args)
      for (ObjId v : state_.varPt(ref(s, e)).order())
        if (slot.insert(v))
          changed_ = true;
    break;
  }
  case StmtKind::UnknownArray:
    insertVar(ref(s, s.lhs), intern(AbstractObject::array(s.id, false)));
    break;
  case StmtKind::ArrayLoad: {
    const auto &bases = state_.varPt(ref(s, s.base)).order();
    for (size_t i = 0; i < bases.size(); ++i) {
      const AbstractObject &o = state_.objects[bases[i]];
      if (o.kind != ObjKind::ArrayObj && o.kind != ObjKind::PlaceholderArray)
        continue;
      const auto &vals = state_.fieldPt(bases[i], nullptr).order();
      for (size_t k = 0; k < vals.size(); ++k)
        insertVar(ref(s, s.lhs), vals[k]);
    }
    break;
  }
  case StmtKind::ArrayStore: {
    const auto &bases = state_.varPt(ref(s, s.base)).order();
    for (size_t i = 0; i < bases.size(); ++i) {
      const AbstractObject &o = state_.objects[bases[i]];
      if (o.kind != ObjKind::ArrayObj && o.kind != ObjKind::PlaceholderArray)
        continue;
      PtSet &slot = state_.fieldPt(bases[i], nullptr);
      for (ObjId v : state_.varPt(ref(s, s.rhs)).order())
        if (slot.insert(v))
          changed_ = true;
    }
    break;
  }
  default:
    assert(false);
  }
}

void Engine::bindCall(const Statement &s, const MethodMember *target,
                      ObjId recvObj, const std::vector<VarId> &argVars) {
  if (state_.addCallEdge(s.id, target))
    changed_ = true;
  reachMethod(target);
  if (target->builtin) {
    // Object.toString yields a statically unknown string; getClass is a
    // dedicated statement kind and never dispatches here.
    if (target->name == "toString" && s.lhs != kNoVar)
      insertVar(ref(s, s.lhs), intern(AbstractObject::unknownString(s.id)));
    return;
  }
  if (recvObj != kNoObj && target->thisVar != kNoVar)
    insertVar({target, target->thisVar}, recvObj);
  for (size_t k = 0; k < argVars.size() && k < target->paramVars.size(); ++k)
    flowVar(ref(s, argVars[k]), {target, target->paramVars[k]});
  if (s.lhs != kNoVar)
    flowVar({target, target->retVar}, ref(s, s.lhs));
}

void Engine::onVirtualCall(const Statement &s) {
  const auto &recvs = state_.varPt(ref(s, s.base)).order();
  for (size_t i = 0; i < recvs.size(); ++i) {
    ObjId ro = recvs[i];
    const ClassType *dyn = dynamicType(prog_, state_.objects[ro]);
    const MethodMember *target =
        prog_.dispatchByArity(dyn, s.name, s.args.size());
    if (!target)
      continue;
    bindCall(s, target, ro, s.args);
  }
}

void Engine::onStaticCall(const Statement &s) {
  classDiscovered(s.staticTarget->declaring);
  bindCall(s, s.staticTarget, kNoObj, s.args);
}

// -- propagation ---------------------------------------------------------------

void Engine::onForName(const Statement &s) {
  auto ann = annotations_.find(s.id);
  if (ann != annotations_.end()) {
    for (const ClassType *t : ann->second.classes) {
      insertVar(ref(s, s.lhs), intern(AbstractObject::classObj(s.id, t)));
      classDiscovered(t);
    }
    return; // annotated output replaces the rule-derived one
  }
  const auto &strs = state_.varPt(ref(s, s.strVar)).order();
  for (size_t i = 0; i < strs.size(); ++i) {
    const AbstractObject o = state_.objects[strs[i]];
    switch (o.kind) {
    case ObjKind::StringConst: {
      const ClassType *t = prog_.findClass(o.str);
      if (!t) {
        diagnostic(s, "forName argument \"" + o.str +
                          "\" names no class in the closed world");
        continue;
      }
      insertVar(ref(s, s.lhs), intern(AbstractObject::classObj(s.id, t)));
      classDiscovered(t);
      break;
    }
    case ObjKind::UnknownString:
      insertVar(ref(s, s.lhs), intern(AbstractObject::classObj(s.id, nullptr)));
      break;
    case ObjKind::Heap:
      // A runtime string of unknown content (or an object whose type is not
      // known to exclude String) resolves to an unknown class.
      if (!o.typeKnown() || o.type == prog_.stringType())
        insertVar(ref(s, s.lhs),
                  intern(AbstractObject::classObj(s.id, nullptr)));
      break;
    default:
      break;
    }
  }
}

void Engine::onGetClass(const Statement &s) {
  const auto &recvs = state_.varPt(ref(s, s.base)).order();
  for (size_t i = 0; i < recvs.size(); ++i) {
    const ClassType *dyn = dynamicType(prog_, state_.objects[recvs[i]]);
    insertVar(ref(s, s.lhs), intern(AbstractObject::classObj(s.id, dyn)));
  }
}

void Engine::onGetMember(const Statement &s) {
  bool plural = introspectIsPlural(s.introspect);
  bool fields = introspectIsField(s.introspect);
  MemberScope scope = introspectIsDeclared(s.introspect)
                          ? MemberScope::DeclaredOnly
                          : MemberScope::PublicIncludingInherited;

  auto ann = annotations_.find(s.id);
  if (ann != annotations_.end()) {
    std::vector<ObjId> out;
    for (const MethodMember *m : ann->second.members) {
      MethodSig sig;
      sig.name = m->name;
      sig.paramTypes = m->paramTypes;
      if (m->returnType)
        sig.returnType = m->returnType;
      out.push_back(intern(AbstractObject::methodObj(
          s.id, m->declaring, std::move(sig), MemberScope::DeclaredOnly)));
    }
    if (plural) {
      ObjId ph = intern(AbstractObject::placeholderArray(s.id));
      insertVar(ref(s, s.lhs), ph);
      PtSet &slot = state_.fieldPt(ph, nullptr);
      for (ObjId o : out)
        if (slot.insert(o))
          changed_ = true;
    } else {
      for (ObjId o : out)
        insertVar(ref(s, s.lhs), o);
    }
    return;
  }

  auto makeMember = [&](const ClassType *clsOrNull,
                        std::optional<std::string> name) -> ObjId {
    if (fields) {
      FieldSig sig;
      sig.name = std::move(name);
      return intern(AbstractObject::fieldObj(s.id, clsOrNull, sig, scope));
    }
    MethodSig sig;
    sig.name = std::move(name);
    return intern(AbstractObject::methodObj(s.id, clsOrNull, sig, scope));
  };

  const auto &classes = state_.varPt(ref(s, s.base)).order();
  if (plural) {
    ObjId ph = intern(AbstractObject::placeholderArray(s.id));
    insertVar(ref(s, s.lhs), ph);
    PtSet &slot = state_.fieldPt(ph, nullptr);
    for (size_t i = 0; i < classes.size(); ++i) {
      const AbstractObject c = state_.objects[classes[i]];
      if (c.kind != ObjKind::ClassObj)
        continue;
      if (slot.insert(makeMember(c.type, std::nullopt)))
        changed_ = true;
    }
    return;
  }

  for (size_t i = 0; i < classes.size(); ++i) {
    const AbstractObject c = state_.objects[classes[i]];
    if (c.kind != ObjKind::ClassObj)
      continue;
    const auto &strs = state_.varPt(ref(s, s.strVar)).order();
    for (size_t k = 0; k < strs.size(); ++k) {
      const AbstractObject so = state_.objects[strs[k]];
      if (so.kind == ObjKind::StringConst)
        insertVar(ref(s, s.lhs), makeMember(c.type, so.str));
      else if (so.kind == ObjKind::UnknownString ||
               (so.kind == ObjKind::Heap &&
                (!so.typeKnown() || so.type == prog_.stringType())))
        insertVar(ref(s, s.lhs), makeMember(c.type, std::nullopt));
    }
  }
}

// -- lazy heap modeling ----------------------------------------------------------

void Engine::onNewInstance(const Statement &s) {
  const auto &classes = state_.varPt(ref(s, s.base)).order();
  for (size_t i = 0; i < classes.size(); ++i) {
    const AbstractObject c = state_.objects[classes[i]];
    if (c.kind != ObjKind::ClassObj)
      continue;
    if (c.typeKnown()) {
      insertVar(ref(s, s.lhs), intern(AbstractObject::heap(s.id, c.type)));
      classDiscovered(c.type);
    } else {
      insertVar(ref(s, s.lhs), intern(AbstractObject::heap(s.id, nullptr)));
    }
  }
}

void Engine::splitReceiverAt(const Statement &s, ObjKind metaKind) {
  if (config_.mode != EngineConfig::Mode::Solar || s.recv == kNoVar)
    return;
  if (metaKind == ObjKind::MethodObj &&
      !config_.ruleEnabled(EngineConfig::kInvokeReceiverSplit))
    return;
  VarRef y = ref(s, s.recv);
  const auto &recvs = state_.varPt(y).order();
  for (size_t i = 0; i < recvs.size(); ++i) {
    const AbstractObject o = state_.objects[recvs[i]];
    if (o.kind != ObjKind::Heap || o.typeKnown())
      continue;
    const auto &metas = state_.varPt(ref(s, s.base)).order();
    for (size_t k = 0; k < metas.size(); ++k) {
      const AbstractObject mo = state_.objects[metas[k]];
      if (mo.kind != metaKind || !mo.typeKnown())
        continue;
      for (const ClassType *t : lazySplitTypes(prog_, mo.type)) {
        insertVar(y, intern(AbstractObject::heap(o.site, t)));
        recordSplit(state_.sideEffectSplits, s.id, t);
        classDiscovered(t);
      }
    }
  }
}

// -- collective inference ---------------------------------------------------------

void Engine::inferInvoke(const Statement &s) {
  VarRef mvar = ref(s, s.base);
  const ClassType *cast = s.castType;
  ParamTypeTuples ptp = paramTypeTuples(prog_, state_, ref(s, s.argsVar));
  bool recvUnknown = receiverHasUnknown(s);

  const auto &metas = state_.varPt(mvar).order();
  for (size_t i = 0; i < metas.size(); ++i) {
    const AbstractObject mo = state_.objects[metas[i]]; // copy: set grows
    if (mo.kind != ObjKind::MethodObj)
      continue;

    // Missing class, known receiver types: the target method must be a
    // member of one of them.
    if (!mo.typeKnown() && s.recv != kNoVar &&
        config_.ruleEnabled(EngineConfig::kInferInvokeReceiverType)) {
      const auto &recvs = state_.varPt(ref(s, s.recv)).order();
      for (size_t k = 0; k < recvs.size(); ++k) {
        const ClassType *t = dynamicType(prog_, state_.objects[recvs[k]]);
        if (t)
          insertVar(mvar, intern(AbstractObject::methodObj(mo.site, t,
                                                           mo.msig, mo.scope)));
      }
    }

    // Missing signature: descriptor candidates come from the exactly
    // analyzable argument array and the result cast.
    if (mo.msig.sigUnknown() && ptp.exact) {
      std::vector<std::optional<const ClassType *>> retCands;
      if (cast == prog_.objectType())
        retCands.push_back(std::nullopt);
      else
        for (const ClassType *t : castCompatibleTypes(cast))
          retCands.push_back(t);
      for (const auto &tuple : ptp.tuples)
        for (const auto &rc : retCands) {
          MethodSig sig;
          sig.returnType = rc ? std::optional<const ClassType *>(*rc)
                              : std::nullopt;
          sig.paramTypes = tuple;
          insertVar(mvar, intern(AbstractObject::methodObj(mo.site, mo.type,
                                                           sig, mo.scope)));
        }
    }

    // Missing class, known member name: search the hierarchy for classes
    // defining a matching method.
    if (!mo.typeKnown() && mo.msig.name &&
        (recvUnknown || s.recv == kNoVar) &&
        config_.ruleEnabled(EngineConfig::kInferInvokeSigToClass)) {
      std::vector<std::vector<const ClassType *>> pCands;
      if (mo.msig.paramTypes)
        pCands.push_back(*mo.msig.paramTypes);
      else if (ptp.exact)
        pCands = ptp.tuples;
      std::vector<std::optional<const ClassType *>> retCands;
      if (mo.msig.returnType) {
        if (prog_.compatible(*mo.msig.returnType, cast))
          retCands.push_back(*mo.msig.returnType);
      } else if (cast == prog_.objectType()) {
        retCands.push_back(std::nullopt);
      } else {
        for (const ClassType *t : castCompatibleTypes(cast))
          retCands.push_back(t);
      }
      for (const auto &p : pCands)
        for (const auto &rc : retCands) {
          MethodSig sig;
          sig.returnType = rc ? std::optional<const ClassType *>(*rc)
                              : std::nullopt;
          sig.name = mo.msig.name;
          sig.paramTypes = p;
          for (const ClassType *t : classesWithMethod(prog_, sig))
            insertVar(mvar, intern(AbstractObject::methodObj(mo.site, t, sig,
                                                             mo.scope)));
        }
    }
  }
}

void Engine::inferGet(const Statement &s) {
  VarRef fvar = ref(s, s.base);
  const ClassType *cast = s.castType;
  bool recvUnknown = receiverHasUnknown(s);

  const auto &metas = state_.varPt(fvar).order();
  for (size_t i = 0; i < metas.size(); ++i) {
    const AbstractObject fo = state_.objects[metas[i]];
    if (fo.kind != ObjKind::FieldObj)
      continue;

    if (!fo.typeKnown() && s.recv != kNoVar) {
      const auto &recvs = state_.varPt(ref(s, s.recv)).order();
      for (size_t k = 0; k < recvs.size(); ++k) {
        const ClassType *t = dynamicType(prog_, state_.objects[recvs[k]]);
        if (t)
          insertVar(fvar, intern(AbstractObject::fieldObj(fo.site, t, fo.fsig,
                                                          fo.scope)));
      }
    }

    if (fo.fsig.sigUnknown() && cast != prog_.objectType()) {
      for (const ClassType *ft : castCompatibleTypes(cast)) {
        FieldSig sig;
        sig.fieldType = ft;
        insertVar(fvar, intern(AbstractObject::fieldObj(fo.site, fo.type, sig,
                                                        fo.scope)));
      }
    }

    if (!fo.typeKnown() && fo.fsig.name && (recvUnknown || s.recv == kNoVar)) {
      std::vector<const ClassType *> ftCands;
      if (fo.fsig.fieldType) {
        if (prog_.compatible(*fo.fsig.fieldType, cast))
          ftCands.push_back(*fo.fsig.fieldType);
      } else if (cast != prog_.objectType()) {
        ftCands = castCompatibleTypes(cast);
      }
      for (const ClassType *ft : ftCands) {
        FieldSig sig;
        sig.fieldType = ft;
        sig.name = fo.fsig.name;
        for (const ClassType *t : classesWithField(prog_, sig))
          insertVar(fvar,
                    intern(AbstractObject::fieldObj(fo.site, t, sig, fo.scope)));
      }
    }
  }
}

void Engine::inferSet(const Statement &s) {
  VarRef fvar = ref(s, s.base);
  bool recvUnknown = receiverHasUnknown(s);

  // Known dynamic types of the stored value.
  std::vector<const ClassType *> valueTypes;
  for (ObjId o : state_.varPt(ref(s, s.rhs)).order()) {
    const ClassType *t = dynamicType(prog_, state_.objects[o]);
    if (t && std::find(valueTypes.begin(), valueTypes.end(), t) ==
                 valueTypes.end())
      valueTypes.push_back(t);
  }

  const auto &metas = state_.varPt(fvar).order();
  for (size_t i = 0; i < metas.size(); ++i) {
    const AbstractObject fo = state_.objects[metas[i]];
    if (fo.kind != ObjKind::FieldObj)
      continue;

    if (!fo.typeKnown() && s.recv != kNoVar) {
      const auto &recvs = state_.varPt(ref(s, s.recv)).order();
      for (size_t k = 0; k < recvs.size(); ++k) {
        const ClassType *t = dynamicType(prog_, state_.objects[recvs[k]]);
        if (t)
          insertVar(fvar, intern(AbstractObject::fieldObj(fo.site, t, fo.fsig,
                                                          fo.scope)));
      }
    }

    if (fo.fsig.sigUnknown()) {
      // The field's type must admit one of the stored values.
      for (const ClassType *vt : valueTypes)
        for (const ClassType *ft : prog_.supertypesOf(vt)) {
          FieldSig sig;
          sig.fieldType = ft;
          insertVar(fvar, intern(AbstractObject::fieldObj(fo.site, fo.type,
                                                          sig, fo.scope)));
        }
    }

    if (!fo.typeKnown() && fo.fsig.name && (recvUnknown || s.recv == kNoVar) &&
        !valueTypes.empty()) {
      std::vector<const ClassType *> ftCands;
      if (fo.fsig.fieldType) {
        for (const ClassType *vt : valueTypes)
          if (prog_.isSubtype(vt, *fo.fsig.fieldType)) {
            ftCands.push_back(*fo.fsig.fieldType);
            break;
          }
      } else {
        for (const ClassType *vt : valueTypes)
          for (const ClassType *ft : prog_.supertypesOf(vt))
            if (std::find(ftCands.begin(), ftCands.end(), ft) == ftCands.end())
              ftCands.push_back(ft);
      }
      for (const ClassType *ft : ftCands) {
        FieldSig sig;
        sig.fieldType = ft;
        sig.name = fo.fsig.name;
        for (const ClassType *t : classesWithField(prog_, sig))
          insertVar(fvar,
                    intern(AbstractObject::fieldObj(fo.site, t, sig, fo.scope)));
      }
    }
  }
}

// -- transformation ----------------------------------------------------------------

void Engine::transformInvoke(const Statement &s) {
  VarRef argsRef = ref(s, s.argsVar);

  const auto &metas = state_.varPt(ref(s, s.base)).order();
  for (size_t i = 0; i < metas.size(); ++i) {
    const AbstractObject mo = state_.objects[metas[i]];
    if (mo.kind != ObjKind::MethodObj || !mo.typeKnown())
      continue;
    for (const MethodMember *target : methodTargets(prog_, mo, config_.mode)) {
      recordInvokeTarget(s, target);
      if (state_.addDerived({DerivedFact::Kind::Call, s.id, target, nullptr}))
        changed_ = true;

      size_t arity = target->paramTypes.size();
      std::vector<ObjId> arrays, eligible;
      for (ObjId a : state_.varPt(argsRef).order()) {
        const AbstractObject &ao = state_.objects[a];
        if (ao.kind != ObjKind::ArrayObj && ao.kind != ObjKind::PlaceholderArray)
          continue;
        arrays.push_back(a);
        bool exact = ao.kind == ObjKind::ArrayObj && ao.exactElems;
        if (exact &&
            prog_.statementAt(ao.site).args.size() != arity)
          continue; // exactly analyzed array of the wrong arity
        eligible.push_back(a);
      }
      if (!arrays.empty() && eligible.empty()) {
        diagnostic(s, "argument arity never matches " + target->fullName());
        continue;
      }

      auto flowArgsAndReturn = [&](const MethodMember *concrete) {
        for (size_t k = 0; k < concrete->paramVars.size(); ++k) {
          const ClassType *declared = concrete->paramTypes[k];
          for (ObjId arr : eligible)
            for (ObjId av : state_.fieldPt(arr, nullptr).order()) {
              if (config_.ruleEnabled(EngineConfig::kInvokeArgTypeFilter)) {
                const ClassType *dt = dynamicType(prog_, state_.objects[av]);
                if (!dt || !prog_.isSubtype(dt, declared))
                  continue;
              }
              insertVar({concrete, concrete->paramVars[k]}, av);
            }
        }
        if (s.lhs != kNoVar && !concrete->builtin)
          for (ObjId r : state_.varPt({concrete, concrete->retVar}).order())
            castFlow(s, s.castType, r, ref(s, s.lhs));
      };

      if (target->isStatic) {
        if (state_.addCallEdge(s.id, target))
          changed_ = true;
        reachMethod(target);
        classDiscovered(target->declaring);
        flowArgsAndReturn(target);
        continue;
      }

      if (s.recv == kNoVar) {
        diagnostic(s, "instance method " + target->fullName() +
                          " reached with null receiver");
        continue;
      }
      const auto &recvs = state_.varPt(ref(s, s.recv)).order();
      for (size_t k = 0; k < recvs.size(); ++k) {
        ObjId ro = recvs[k];
        const ClassType *dyn = dynamicType(prog_, state_.objects[ro]);
        if (!dyn) // unknown-typed receivers are materialized first
          continue;
        if (!prog_.isSubtype(dyn, target->declaring))
          continue;
        const MethodMember *concrete =
            prog_.dispatchExact(dyn, target->name, target->paramTypes);
        if (!concrete)
          continue;
        if (state_.addCallEdge(s.id, concrete))
          changed_ = true;
        reachMethod(concrete);
        if (!concrete->builtin && concrete->thisVar != kNoVar)
          insertVar({concrete, concrete->thisVar}, ro);
        if (concrete->builtin) {
          if (concrete->name == "toString" && s.lhs != kNoVar)
            castFlow(s, s.castType,
                     intern(AbstractObject::unknownString(s.id)),
                     ref(s, s.lhs));
          continue;
        }
        flowArgsAndReturn(concrete);
      }
    }
  }
}

void Engine::transformGet(const Statement &s) {
  const auto &metas = state_.varPt(ref(s, s.base)).order();
  for (size_t i = 0; i < metas.size(); ++i) {
    const AbstractObject fo = state_.objects[metas[i]];
    if (fo.kind != ObjKind::FieldObj || !fo.typeKnown())
      continue;
    for (const FieldMember *f : fieldTargets(prog_, fo, config_.mode)) {
      recordFieldTarget(s, f);
      if (state_.addDerived({DerivedFact::Kind::Load, s.id, nullptr, f}))
        changed_ = true;
      if (f->isStatic) {
        classDiscovered(f->declaring);
        for (ObjId v : state_.staticPt(f).order())
          castFlow(s, s.castType, v, ref(s, s.lhs));
        continue;
      }
      if (s.recv == kNoVar) {
        diagnostic(s, "instance field " + f->fullName() +
                          " read with null receiver");
        continue;
      }
      const auto &recvs = state_.varPt(ref(s, s.recv)).order();
      for (size_t k = 0; k < recvs.size(); ++k) {
        const AbstractObject ro = state_.objects[recvs[k]];
        if (ro.kind != ObjKind::Heap || !ro.typeKnown() ||
            !prog_.isSubtype(ro.type, f->declaring))
          continue;
        const auto &vals = state_.fieldPt(recvs[k], f).order();
        for (size_t vi = 0; vi < vals.size(); ++vi)
          castFlow(s, s.castType, vals[vi], ref(s, s.lhs));
      }
    }
  }
}

void Engine::transformSet(const Statement &s) {
  const auto &metas = state_.varPt(ref(s, s.base)).order();
  for (size_t i = 0; i < metas.size(); ++i) {
    const AbstractObject fo = state_.objects[metas[i]];
    if (fo.kind != ObjKind::FieldObj || !fo.typeKnown())
      continue;
    for (const FieldMember *f : fieldTargets(prog_, fo, config_.mode)) {
      recordFieldTarget(s, f);
      if (state_.addDerived({DerivedFact::Kind::Store, s.id, nullptr, f}))
        changed_ = true;
      if (f->isStatic) {
        classDiscovered(f->declaring);
        PtSet &slot = state_.staticPt(f);
        for (ObjId v : state_.varPt(ref(s, s.rhs)).order())
          if (slot.insert(v))
            changed_ = true;
        continue;
      }
      if (s.recv == kNoVar) {
        diagnostic(s, "instance field " + f->fullName() +
                          " written with null receiver");
        continue;
      }
      const auto &recvs = state_.varPt(ref(s, s.recv)).order();
      for (size_t k = 0; k < recvs.size(); ++k) {
        const AbstractObject ro = state_.objects[recvs[k]];
        if (ro.kind != ObjKind::Heap || !ro.typeKnown() ||
            !prog_.isSubtype(ro.type, f->declaring))
          continue;
        PtSet &slot = state_.fieldPt(recvs[k], f);
        for (ObjId v : state_.varPt(ref(s, s.rhs)).order())
          if (slot.insert(v))
            changed_ = true;
      }
    }
  }
}

// -- side-effect statement entry points ------------------------------------------

void Engine::onInvoke(const Statement &s) {
  inferInvoke(s);
  splitReceiverAt(s, ObjKind::MethodObj);
  transformInvoke(s);
}

void Engine::onFieldGet(const Statement &s) {
  inferGet(s);
  splitReceiverAt(s, ObjKind::FieldObj);
  transformGet(s);
}

void Engine::onFieldSet(const Statement &s) {
  inferSet(s);
  splitReceiverAt(s, ObjKind::FieldObj);
  transformSet(s);
}

} // namespace solar
