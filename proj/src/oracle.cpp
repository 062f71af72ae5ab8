//===-- oracle.cpp - Concrete interpreter ------------------------------------===//

#include "solar/oracle.h"

#include <cassert>
#include <memory>

namespace solar {

namespace {

struct ConcreteObject;

struct Value {
  enum class Kind { Null, Object, String, Class, Method, Field, Array };
  Kind kind = Kind::Null;
  std::shared_ptr<ConcreteObject> obj;
  std::string str;
  const ClassType *cls = nullptr;
  const MethodMember *method = nullptr;
  const FieldMember *field = nullptr;
  std::shared_ptr<std::vector<Value>> array;

  bool isNull() const { return kind == Kind::Null; }
};

struct ConcreteObject {
  const ClassType *type = nullptr;
  std::map<const FieldMember *, Value> fields;
  int id = 0;
  bool fromNewInstance = false;
  bool usedAtCastOrReceiver = false;
};

/// Internal control flow for runtime failures; recorded and swallowed at the
/// top of interpret().
struct Halt {};

class Interp {
public:
  Interp(const Program &prog, const ConcreteEnv &env)
      : prog_(prog), env_(env), fuel_(env.fuel) {}

  Trace run() {
    try {
      const MethodMember *main = prog_.entryMain();
      triggerClinit(main->declaring);
      call(*main, Value{}, {});
    } catch (const Halt &) {
      // runtime error already recorded
    }
    if (trace_.runtimeErrors.empty())
      for (const auto &obj : created_)
        if (!obj->usedAtCastOrReceiver)
          trace_.reachabilityViolations.push_back(
              "object of " + obj->type->name() +
              " created reflectively but never cast or used as a receiver");
    return std::move(trace_);
  }

private:
  const Program &prog_;
  const ConcreteEnv &env_;
  Trace trace_;
  long fuel_;
  int nextId_ = 1;
  std::set<const ClassType *> clinitStarted_;
  std::map<const FieldMember *, Value> statics_;
  std::vector<std::shared_ptr<ConcreteObject>> created_;

  [[noreturn]] void fail(const Statement &s, const std::string &msg) {
    trace_.runtimeErrors.push_back(s.site.str() + ": " + msg);
    throw Halt{};
  }

  const ClassType *dynType(const Value &v) const {
    switch (v.kind) {
    case Value::Kind::Object:
      return v.obj->type;
    case Value::Kind::String:
      return prog_.stringType();
    case Value::Kind::Class:
      return prog_.classType();
    case Value::Kind::Method:
      return prog_.methodType();
    case Value::Kind::Field:
      return prog_.fieldType();
    case Value::Kind::Array:
      return prog_.objectType();
    case Value::Kind::Null:
      return nullptr;
    }
    return nullptr;
  }

  void triggerClinit(const ClassType *t) {
    if (!clinitStarted_.insert(t).second)
      return;
    for (auto &m : t->declaredMethods())
      if (m->isStatic && m->name == "clinit" && m->paramTypes.empty())
        call(*m, Value{}, {});
  }

  void markUsed(const Value &v) {
    if (v.kind == Value::Kind::Object)
      v.obj->usedAtCastOrReceiver = true;
  }

  Value castValue(const Statement &s, const ClassType *to, const Value &v) {
    markUsed(v);
    if (to == prog_.objectType() || v.isNull())
      return v;
    const ClassType *dyn = dynType(v);
    if (!prog_.isSubtype(dyn, to))
      fail(s, "cannot cast " + dyn->name() + " to " + to->name());
    return v;
  }

  Value newObject(const ClassType *t, bool reflective) {
    auto obj = std::make_shared<ConcreteObject>();
    obj->type = t;
    obj->id = nextId_++;
    obj->fromNewInstance = reflective;
    if (reflective)
      created_.push_back(obj);
    Value v;
    v.kind = Value::Kind::Object;
    v.obj = obj;
    return v;
  }

  Value call(const MethodMember &m, Value self, std::vector<Value> args) {
    if (m.builtin) {
      Value out;
      if (m.name == "toString") {
        out.kind = Value::Kind::String;
        const ClassType *t = dynType(self);
        out.str = "@" + (t ? t->name() : std::string("null")) + "#" +
                  std::to_string(self.kind == Value::Kind::Object
                                     ? self.obj->id
                                     : 0);
      } else if (m.name == "getClass") {
        out.kind = Value::Kind::Class;
        out.cls = dynType(self);
      }
      return out;
    }
    std::vector<Value> locals(m.varNames.size());
    if (m.thisVar != kNoVar)
      locals[(size_t)m.thisVar] = std::move(self);
    for (size_t i = 0; i < args.size() && i < m.paramVars.size(); ++i)
      locals[(size_t)m.paramVars[i]] = std::move(args[i]);
    for (const Statement &s : m.body)
      exec(s, locals);
    return m.retVar != kNoVar ? locals[(size_t)m.retVar] : Value{};
  }

  Value &local(std::vector<Value> &locals, VarId v) {
    return locals[(size_t)v];
  }

  void exec(const Statement &s, std::vector<Value> &locals) {
    if (--fuel_ < 0)
      throw InterpretError("fuel exhausted at " + s.site.str());
    auto L = [&](VarId v) -> Value & { return local(locals, v); };

    switch (s.kind) {
    case StmtKind::Alloc:
      triggerClinit(s.type);
      trace_.allocatedTypes.insert({s.site.str(), s.type->name()});
      L(s.lhs) = newObject(s.type, false);
      break;
    case StmtKind::Copy:
      L(s.lhs) = L(s.rhs);
      break;
    case StmtKind::Load: {
      Value &base = L(s.base);
      if (base.kind != Value::Kind::Object)
        fail(s, "field load on a non-object value");
      const FieldMember *f = prog_.findVisibleField(base.obj->type, s.name);
      if (!f || f->isStatic)
        fail(s, "no instance field '" + s.name + "' on " +
                    base.obj->type->name());
      auto it = base.obj->fields.find(f);
      L(s.lhs) = it == base.obj->fields.end() ? Value{} : it->second;
      break;
    }
    case StmtKind::Store: {
      Value &base = L(s.base);
      if (base.kind != Value::Kind::Object)
        fail(s, "field store on a non-object value");
      const FieldMember *f = prog_.findVisibleField(base.obj->type, s.name);
      if (!f || f->isStatic)
        fail(s, "no instance field '" + s.name + "' on " +
                    base.obj->type->name());
      base.obj->fields[f] = L(s.rhs);
      break;
    }
    case StmtKind::StaticLoad: {
      triggerClinit(s.staticField->declaring);
      auto it = statics_.find(s.staticField);
      L(s.lhs) = it == statics_.end() ? Value{} : it->second;
      break;
    }
    case StmtKind::StaticStore:
      triggerClinit(s.staticField->declaring);
      statics_[s.staticField] = L(s.rhs);
      break;
    case StmtKind::VirtualCall: {
      Value recv = L(s.base);
      if (recv.isNull())
        fail(s, "call on null receiver");
      const MethodMember *target =
          prog_.dispatchByArity(dynType(recv), s.name, s.args.size());
      if (!target)
        fail(s, "no method '" + s.name + "' on " + dynType(recv)->name());
      trace_.callEdges.insert({s.site.str(), target->fullName()});
      std::vector<Value> args;
      for (VarId a : s.args)
        args.push_back(L(a));
      Value ret = call(*target, recv, std::move(args));
      if (s.lhs != kNoVar)
        L(s.lhs) = std::move(ret);
      break;
    }
    case StmtKind::StaticCall: {
      triggerClinit(s.staticTarget->declaring);
      trace_.callEdges.insert({s.site.str(), s.staticTarget->fullName()});
      std::vector<Value> args;
      for (VarId a : s.args)
        args.push_back(L(a));
      Value ret = call(*s.staticTarget, Value{}, std::move(args));
      if (s.lhs != kNoVar)
        L(s.lhs) = std::move(ret);
      break;
    }
    case StmtKind::StringConst: {
      Value v;
      v.kind = Value::Kind::String;
      v.str = s.literal;
      L(s.lhs) = std::move(v);
      break;
    }
    case StmtKind::UnknownString: {
      auto it = env_.stringBindings.find(s.site.str());
      if (it == env_.stringBindings.end())
        throw InterpretError("no binding for string site " + s.site.str());
      Value v;
      v.kind = Value::Kind::String;
      v.str = it->second;
      L(s.lhs) = std::move(v);
      break;
    }
    case StmtKind::Cast:
      L(s.lhs) = castValue(s, s.type, L(s.rhs));
      break;
    case StmtKind::ArrayLit: {
      Value v;
      v.kind = Value::Kind::Array;
      v.array = std::make_shared<std::vector<Value>>();
      for (VarId e : s.args)
        v.array->push_back(L(e));
      L(s.lhs) = std::move(v);
      break;
    }
    case StmtKind::UnknownArray: {
      Value v;
      v.kind = Value::Kind::Array;
      v.array = std::make_shared<std::vector<Value>>();
      L(s.lhs) = std::move(v);
      break;
    }
    case StmtKind::ArrayLoad: {
      Value &base = L(s.base);
      if (base.kind != Value::Kind::Array)
        fail(s, "array load on a non-array value");
      L(s.lhs) = base.array->empty() ? Value{} : base.array->front();
      break;
    }
    case StmtKind::ArrayStore: {
      Value &base = L(s.base);
      if (base.kind != Value::Kind::Array)
        fail(s, "array store on a non-array value");
      base.array->push_back(L(s.rhs));
      break;
    }
    case StmtKind::ForName: {
      Value &name = L(s.strVar);
      if (name.kind != Value::Kind::String)
        fail(s, "forName argument is not a string");
      const ClassType *t = prog_.findClass(name.str);
      if (!t)
        fail(s, "class not found: " + name.str);
      triggerClinit(t);
      Value v;
      v.kind = Value::Kind::Class;
      v.cls = t;
      L(s.lhs) = std::move(v);
      break;
    }
    case StmtKind::GetClass: {
      Value &recv = L(s.base);
      if (recv.isNull())
        fail(s, "getClass on null");
      Value v;
      v.kind = Value::Kind::Class;
      v.cls = dynType(recv);
      L(s.lhs) = std::move(v);
      break;
    }
    case StmtKind::ClassLit: {
      Value v;
      v.kind = Value::Kind::Class;
      v.cls = s.type;
      L(s.lhs) = std::move(v);
      break;
    }
    case StmtKind::GetMember:
      execGetMember(s, locals);
      break;
    case StmtKind::NewInstance: {
      Value &cls = L(s.base);
      if (cls.kind != Value::Kind::Class)
        fail(s, "newInstance on a non-class value");
      if (cls.cls->isAbstract())
        fail(s, "cannot instantiate abstract class " + cls.cls->name());
      triggerClinit(cls.cls);
      trace_.allocatedTypes.insert({s.site.str(), cls.cls->name()});
      Value v = newObject(cls.cls, true);
      if (s.lhs != kNoVar)
        L(s.lhs) = std::move(v);
      break;
    }
    case StmtKind::Invoke:
      execInvoke(s, locals);
      break;
    case StmtKind::FieldGet:
      execFieldGet(s, locals);
      break;
    case StmtKind::FieldSet:
      execFieldSet(s, locals);
      break;
    }
  }

  void execGetMember(const Statement &s, std::vector<Value> &locals) {
    Value &cls = local(locals, s.base);
    if (cls.kind != Value::Kind::Class)
      fail(s, "member introspection on a non-class value");
    const ClassType *t = cls.cls;
    bool declared = introspectIsDeclared(s.introspect);

    if (introspectIsPlural(s.introspect)) {
      Value v;
      v.kind = Value::Kind::Array;
      v.array = std::make_shared<std::vector<Value>>();
      if (introspectIsField(s.introspect)) {
        auto fields = declared ? [&] {
          std::vector<const FieldMember *> out;
          for (auto &f : t->declaredFields())
            out.push_back(f.get());
          return out;
        }()
                               : prog_.visibleFields(t);
        for (const FieldMember *f : fields) {
          Value fv;
          fv.kind = Value::Kind::Field;
          fv.field = f;
          v.array->push_back(fv);
        }
      } else {
        auto methods = declared ? [&] {
          std::vector<const MethodMember *> out;
          for (auto &m : t->declaredMethods())
            out.push_back(m.get());
          return out;
        }()
                                : prog_.visibleMethods(t);
        for (const MethodMember *m : methods) {
          Value mv;
          mv.kind = Value::Kind::Method;
          mv.method = m;
          v.array->push_back(mv);
        }
      }
      if (s.lhs != kNoVar)
        local(locals, s.lhs) = std::move(v);
      return;
    }

    Value &name = local(locals, s.strVar);
    if (name.kind != Value::Kind::String)
      fail(s, "member name is not a string");
    if (introspectIsField(s.introspect)) {
      const FieldMember *found = nullptr;
      if (declared) {
        for (auto &f : t->declaredFields())
          if (f->name == name.str) {
            found = f.get();
            break;
          }
      } else {
        found = prog_.findVisibleField(t, name.str);
      }
      if (!found)
        fail(s, "no field '" + name.str + "' in " + t->name());
      Value v;
      v.kind = Value::Kind::Field;
      v.field = found;
      if (s.lhs != kNoVar)
        local(locals, s.lhs) = std::move(v);
      return;
    }
    const MethodMember *found = nullptr;
    if (declared) {
      for (auto &m : t->declaredMethods())
        if (m->name == name.str) {
          found = m.get();
          break;
        }
    } else {
      for (const MethodMember *m : prog_.visibleMethods(t))
        if (m->name == name.str) {
          found = m;
          break;
        }
    }
    if (!found)
      fail(s, "no method '" + name.str + "' in " + t->name());
    Value v;
    v.kind = Value::Kind::Method;
    v.method = found;
    if (s.lhs != kNoVar)
      local(locals, s.lhs) = std::move(v);
  }

  void execInvoke(const Statement &s, std::vector<Value> &locals) {
    Value &mval = local(locals, s.base);
    if (mval.kind != Value::Kind::Method)
      fail(s, "invoke on a non-method value");
    const MethodMember *declaredTarget = mval.method;

    Value recv;
    if (s.recv != kNoVar)
      recv = local(locals, s.recv);
    markUsed(recv);

    const MethodMember *concrete = declaredTarget;
    if (!declaredTarget->isStatic) {
      if (recv.isNull())
        fail(s, "instance method " + declaredTarget->fullName() +
                    " invoked with null receiver");
      const ClassType *dyn = dynType(recv);
      if (!prog_.isSubtype(dyn, declaredTarget->declaring))
        fail(s, "receiver of type " + dyn->name() + " is not a " +
                    declaredTarget->declaring->name());
      concrete = prog_.dispatchExact(dyn, declaredTarget->name,
                                     declaredTarget->paramTypes);
      if (!concrete)
        fail(s, "dispatch failed for " + declaredTarget->fullName());
    }

    Value argsVal = local(locals, s.argsVar);
    std::vector<Value> args;
    if (argsVal.kind == Value::Kind::Array)
      args = *argsVal.array;
    else if (!argsVal.isNull())
      fail(s, "invoke arguments are not an array");
    if (args.size() != concrete->paramTypes.size())
      fail(s, "argument count mismatch for " + concrete->fullName());
    for (size_t i = 0; i < args.size(); ++i) {
      if (args[i].isNull())
        continue;
      if (!prog_.isSubtype(dynType(args[i]), concrete->paramTypes[i]))
        fail(s, "argument " + std::to_string(i) + " is not assignable to " +
                    concrete->paramTypes[i]->name());
    }

    trace_.callEdges.insert({s.site.str(), concrete->fullName()});
    Value ret = call(*concrete, recv, std::move(args));
    if (s.lhs != kNoVar)
      local(locals, s.lhs) = castValue(s, s.castType, ret);
  }

  void execFieldGet(const Statement &s, std::vector<Value> &locals) {
    Value &fval = local(locals, s.base);
    if (fval.kind != Value::Kind::Field)
      fail(s, "get on a non-field value");
    const FieldMember *f = fval.field;
    Value out;
    if (f->isStatic) {
      triggerClinit(f->declaring);
      auto it = statics_.find(f);
      out = it == statics_.end() ? Value{} : it->second;
    } else {
      if (s.recv == kNoVar)
        fail(s, "instance field " + f->fullName() + " read with null receiver");
      Value recv = local(locals, s.recv);
      markUsed(recv);
      if (recv.kind != Value::Kind::Object)
        fail(s, "field receiver is not an object");
      if (!prog_.isSubtype(recv.obj->type, f->declaring))
        fail(s, "receiver is not a " + f->declaring->name());
      auto it = recv.obj->fields.find(f);
      out = it == recv.obj->fields.end() ? Value{} : it->second;
    }
    trace_.accessedFields.insert({s.site.str(), f->fullName()});
    local(locals, s.lhs) = castValue(s, s.castType, out);
  }

  void execFieldSet(const Statement &s, std::vector<Value> &locals) {
    Value &fval = local(locals, s.base);
    if (fval.kind != Value::Kind::Field)
      fail(s, "set on a non-field value");
    const FieldMember *f = fval.field;
    Value v = local(locals, s.rhs);
    if (!v.isNull() && !prog_.isSubtype(dynType(v), f->type))
      fail(s, "value of type " + dynType(v)->name() + " is not assignable to " +
                  f->fullName());
    if (f->isStatic) {
      triggerClinit(f->declaring);
      statics_[f] = std::move(v);
    } else {
      if (s.recv == kNoVar)
        fail(s, "instance field " + f->fullName() +
                    " written with null receiver");
      Value recv = local(locals, s.recv);
      markUsed(recv);
      if (recv.kind != Value::Kind::Object)
        fail(s, "field receiver is not an object");
      if (!prog_.isSubtype(recv.obj->type, f->declaring))
        fail(s, "receiver is not a " + f->declaring->name());
      recv.obj->fields[f] = std::move(v);
    }
    trace_.accessedFields.insert({s.site.str(), f->fullName()});
  }
};

} // namespace

Trace interpret(const Program &prog, const ConcreteEnv &env) {
  return Interp(prog, env).run();
}

SoundnessVerdict checkSoundness(const Program &prog,
                                const std::vector<ConcreteEnv> &envs,
                                const PointsToState &st) {
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto &[site, target] : st.callEdges())
    edges.insert({prog.statementAt(site).site.str(), target->fullName()});
  std::set<std::pair<std::string, std::string>> fieldCov;
  for (const auto &[site, members] : st.fieldTargets)
    for (const FieldMember *f : members)
      fieldCov.insert({prog.statementAt(site).site.str(), f->fullName()});

  for (const ConcreteEnv &env : envs) {
    Trace t = interpret(prog, env);
    if (!t.reachabilityViolations.empty())
      continue; // outside the object-reachability assumption
    for (const auto &edge : t.callEdges)
      if (!edges.count(edge))
        return {false, "missed call edge " + edge.first + " -> " + edge.second};
    for (const auto &acc : t.accessedFields)
      if (!fieldCov.count(acc))
        return {false,
                "missed field access " + acc.first + " -> " + acc.second};
  }
  return {true, ""};
}

} // namespace solar
