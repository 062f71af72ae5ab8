//===-- ir.cpp - Hierarchy services and member resolution -----------------===//

#include "solar/ir.h"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace solar {

std::string FieldMember::fullName() const {
  return declaring->name() + "." + name;
}

std::string MethodMember::fullName() const {
  return declaring->name() + "." + name;
}

std::string MethodMember::signatureString() const {
  std::string out = name + "(";
  for (size_t i = 0; i < paramTypes.size(); ++i) {
    if (i)
      out += ",";
    out += paramTypes[i]->name();
  }
  out += ")";
  return out;
}

bool MethodMember::matches(const MethodSig &sig) const {
  if (sig.name && *sig.name != name)
    return false;
  if (sig.paramTypes && *sig.paramTypes != paramTypes)
    return false;
  // A known return type must match exactly; void never matches a known one.
  if (sig.returnType && *sig.returnType != returnType)
    return false;
  return true;
}

bool introspectIsPlural(IntrospectKind k) {
  switch (k) {
  case IntrospectKind::GetMethods:
  case IntrospectKind::GetDeclaredMethods:
  case IntrospectKind::GetFields:
  case IntrospectKind::GetDeclaredFields:
    return true;
  default:
    return false;
  }
}

bool introspectIsField(IntrospectKind k) {
  switch (k) {
  case IntrospectKind::GetField:
  case IntrospectKind::GetDeclaredField:
  case IntrospectKind::GetFields:
  case IntrospectKind::GetDeclaredFields:
    return true;
  default:
    return false;
  }
}

bool introspectIsDeclared(IntrospectKind k) {
  switch (k) {
  case IntrospectKind::GetDeclaredMethod:
  case IntrospectKind::GetDeclaredMethods:
  case IntrospectKind::GetDeclaredField:
  case IntrospectKind::GetDeclaredFields:
    return true;
  default:
    return false;
  }
}

const char *introspectName(IntrospectKind k) {
  switch (k) {
  case IntrospectKind::GetMethod:
    return "getMethod";
  case IntrospectKind::GetDeclaredMethod:
    return "getDeclaredMethod";
  case IntrospectKind::GetMethods:
    return "getMethods";
  case IntrospectKind::GetDeclaredMethods:
    return "getDeclaredMethods";
  case IntrospectKind::GetField:
    return "getField";
  case IntrospectKind::GetDeclaredField:
    return "getDeclaredField";
  case IntrospectKind::GetFields:
    return "getFields";
  case IntrospectKind::GetDeclaredFields:
    return "getDeclaredFields";
  }
  return "?";
}

Program::Program() { registerBuiltins(); }

void Program::registerBuiltins() {
  ClassType *object = addClass("Object", 0);
  ClassType *cls = addClass("Class", 0);
  ClassType *str = addClass("String", 0);
  ClassType *mtd = addClass("Method", 0);
  ClassType *fld = addClass("Field", 0);
  object_ = object;
  class_ = cls;
  string_ = str;
  methodMeta_ = mtd;
  fieldMeta_ = fld;
  for (ClassType *c : {object, cls, str, mtd, fld})
    c->builtin_ = true;
  for (ClassType *c : {cls, str, mtd, fld})
    c->super_ = object;

  auto addBuiltinMethod = [&](const std::string &name, const ClassType *ret) {
    auto m = std::make_unique<MethodMember>();
    m->declaring = object;
    m->name = name;
    m->returnType = ret;
    m->builtin = true;
    m->retVar = 0;
    m->varNames = {"ret"};
    object->methods_.push_back(std::move(m));
  };
  addBuiltinMethod("toString", str);
  addBuiltinMethod("getClass", cls);
}

ClassType *Program::addClass(const std::string &name, int line) {
  if (byName_.count(name))
    throw ParseError(line, "duplicate class name '" + name + "'");
  auto c = std::make_unique<ClassType>(name, (int)classes_.size());
  ClassType *raw = c.get();
  classes_.push_back(std::move(c));
  byName_[name] = raw;
  return raw;
}

const ClassType *Program::findClass(std::string_view name) const {
  auto it = byName_.find(name);
  return it == byName_.end() ? nullptr : it->second;
}

void Program::finalize() {
  assert(!finalized_);
  // Default superclass is Object, and the extends graph must be acyclic.
  for (auto &c : classes_) {
    if (c.get() != object_ && !c->super_)
      c->super_ = object_;
  }
  for (auto &c : classes_) {
    std::set<const ClassType *> seen;
    for (const ClassType *t = c.get(); t; t = t->superclass()) {
      if (!seen.insert(t).second)
        throw ParseError(0, "cyclic extends involving class '" + c->name() +
                                "'");
    }
  }

  size_t n = classes_.size();
  subtype_.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i)
    subtype_[i][i] = true;
  // Close over extends + implements edges; iterate to a fixed point.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto &c : classes_) {
      std::vector<const ClassType *> direct;
      if (c->superclass())
        direct.push_back(c->superclass());
      for (const ClassType *i : c->interfaces())
        direct.push_back(i);
      for (const ClassType *d : direct) {
        for (size_t k = 0; k < n; ++k) {
          if (subtype_[d->id()][k] && !subtype_[c->id()][k]) {
            subtype_[c->id()][k] = true;
            changed = true;
          }
        }
      }
    }
  }

  int mid = 0, fid = 0, sid = 0;
  for (auto &c : classes_) {
    for (auto &f : c->fields_)
      f->id = fid++;
    for (auto &m : c->methods_) {
      m->id = mid++;
      allMethods_.push_back(m.get());
      for (auto &s : m->body) {
        s.id = sid++;
        s.enclosing = m.get();
        allStatements_.push_back(&s);
      }
    }
  }
  finalized_ = true;
}

const MethodMember *Program::entryMain() const {
  const ClassType *main = findClass("Main");
  if (!main)
    throw AnalysisError("entry class 'Main' not found");
  for (auto &m : main->declaredMethods()) {
    if (m->name == "main" && m->paramTypes.empty()) {
      if (!m->isStatic)
        throw AnalysisError("Main.main must be static");
      if (m->returnType)
        throw AnalysisError("Main.main must return void");
      return m.get();
    }
  }
  throw AnalysisError("entry method Main.main() not found");
}

bool Program::isSubtype(const ClassType *t, const ClassType *sup) const {
  assert(finalized_);
  return subtype_[t->id()][sup->id()];
}

bool Program::compatible(const ClassType *maybeUnknown,
                         const ClassType *t2) const {
  if (t2 == object_)
    return true;
  if (!maybeUnknown)
    return false;
  return isSubtype(maybeUnknown, t2) || isSubtype(t2, maybeUnknown);
}

std::vector<const ClassType *> Program::supertypesOf(const ClassType *t) const {
  std::vector<const ClassType *> out;
  for (auto &c : classes_)
    if (isSubtype(t, c.get()))
      out.push_back(c.get());
  return out;
}

std::vector<const ClassType *> Program::subtypesOf(const ClassType *t) const {
  std::vector<const ClassType *> out;
  for (auto &c : classes_)
    if (isSubtype(c.get(), t))
      out.push_back(c.get());
  return out;
}

std::vector<const MethodMember *>
Program::visibleMethods(const ClassType *t) const {
  std::vector<const MethodMember *> out;
  for (const ClassType *c = t; c; c = c->superclass()) {
    for (auto &m : c->declaredMethods()) {
      bool shadowed = false;
      for (const MethodMember *have : out) {
        if (have->name == m->name && have->paramTypes == m->paramTypes) {
          shadowed = true;
          break;
        }
      }
      if (!shadowed)
        out.push_back(m.get());
    }
  }
  return out;
}

std::vector<const FieldMember *>
Program::visibleFields(const ClassType *t) const {
  std::vector<const FieldMember *> out;
  for (const ClassType *c = t; c; c = c->superclass()) {
    for (auto &f : c->declaredFields()) {
      bool shadowed = false;
      for (const FieldMember *have : out) {
        if (have->name == f->name) {
          shadowed = true;
          break;
        }
      }
      if (!shadowed)
        out.push_back(f.get());
    }
  }
  return out;
}

const FieldMember *Program::findVisibleField(const ClassType *t,
                                             std::string_view name) const {
  for (const ClassType *c = t; c; c = c->superclass())
    for (auto &f : c->declaredFields())
      if (f->name == name)
        return f.get();
  return nullptr;
}

const MethodMember *Program::dispatchByArity(const ClassType *recvOrNull,
                                             std::string_view name,
                                             size_t arity) const {
  if (!recvOrNull) {
    // An object of unknown type supports only the Object protocol.
    if ((name == "toString" || name == "getClass") && arity == 0)
      return dispatchByArity(object_, name, arity);
    return nullptr;
  }
  for (const ClassType *c = recvOrNull; c; c = c->superclass())
    for (auto &m : c->declaredMethods())
      if (m->name == name && m->paramTypes.size() == arity)
        return m.get();
  return nullptr;
}

const MethodMember *
Program::dispatchExact(const ClassType *recvOrNull, std::string_view name,
                       const std::vector<const ClassType *> &params) const {
  if (!recvOrNull) {
    if ((name == "toString" || name == "getClass") && params.empty())
      return dispatchExact(object_, name, params);
    return nullptr;
  }
  for (const ClassType *c = recvOrNull; c; c = c->superclass())
    for (auto &m : c->declaredMethods())
      if (m->name == name && m->paramTypes == params)
        return m.get();
  return nullptr;
}

std::vector<const MethodMember *>
Program::mtdLookup(const ClassType *t, const MethodSig &sig) const {
  std::vector<const MethodMember *> out;
  for (const MethodMember *m : visibleMethods(t))
    if (m->matches(sig))
      out.push_back(m);
  return out;
}

std::vector<const FieldMember *> Program::fldLookup(const ClassType *t,
                                                    const FieldSig &sig) const {
  std::vector<const FieldMember *> out;
  for (const FieldMember *f : visibleFields(t)) {
    if (sig.name && *sig.name != f->name)
      continue;
    if (sig.fieldType && *sig.fieldType != f->type)
      continue;
    out.push_back(f);
  }
  return out;
}

std::vector<const MethodMember *>
Program::mtdLookupDeclared(const ClassType *t, const MethodSig &sig) const {
  std::vector<const MethodMember *> out;
  for (auto &m : t->declaredMethods())
    if (m->matches(sig))
      out.push_back(m.get());
  return out;
}

std::vector<const FieldMember *>
Program::fldLookupDeclared(const ClassType *t, const FieldSig &sig) const {
  std::vector<const FieldMember *> out;
  for (auto &f : t->declaredFields()) {
    if (sig.name && *sig.name != f->name)
      continue;
    if (sig.fieldType && *sig.fieldType != f->type)
      continue;
    out.push_back(f.get());
  }
  return out;
}

bool Program::isReservedMemberName(std::string_view name) {
  for (std::string_view r :
       {"class", "forName", "loadClass", "getClass", "getMethod",
        "getDeclaredMethod", "getMethods", "getDeclaredMethods", "getField",
        "getDeclaredField", "getFields", "getDeclaredFields", "newInstance",
        "invoke", "get", "set", "new", "array", "unknown_string",
        "unknown_array", "null", "this", "ret", "void", "extends",
        "implements", "static", "abstract", "field", "method"})
    if (name == r)
      return true;
  return false;
}

std::string statementText(const MethodMember &m, const Statement &s) {
  std::ostringstream os;
  auto v = [&](VarId id) { return m.varNames[(size_t)id]; };
  auto recvOrNull = [&](VarId id) {
    return id == kNoVar ? std::string("null") : v(id);
  };
  switch (s.kind) {
  case StmtKind::Alloc:
    os << v(s.lhs) << " = new " << s.type->name();
    break;
  case StmtKind::Copy:
    os << v(s.lhs) << " = " << v(s.rhs);
    break;
  case StmtKind::Load:
    os << v(s.lhs) << " = " << v(s.base) << "." << s.name;
    break;
  case StmtKind::Store:
    os << v(s.base) << "." << s.name << " = " << v(s.rhs);
    break;
  case StmtKind::StaticLoad:
    os << v(s.lhs) << " = " << s.type->name() << "." << s.name;
    break;
  case StmtKind::StaticStore:
    os << s.type->name() << "." << s.name << " = " << v(s.rhs);
    break;
  case StmtKind::VirtualCall:
  case StmtKind::StaticCall: {
    if (s.lhs != kNoVar)
      os << v(s.lhs) << " = ";
    if (s.kind == StmtKind::VirtualCall)
      os << v(s.base);
    else
      os << s.type->name();
    os << "." << s.name << "(";
    for (size_t i = 0; i < s.args.size(); ++i)
      os << (i ? ", " : "") << v(s.args[i]);
    os << ")";
    break;
  }
  case StmtKind::StringConst:
    os << v(s.lhs) << " = \"" << s.literal << "\"";
    break;
  case StmtKind::UnknownString:
    os << v(s.lhs) << " = unknown_string";
    break;
  case StmtKind::Cast:
    os << v(s.lhs) << " = (" << s.type->name() << ") " << v(s.rhs);
    break;
  case StmtKind::ArrayLit:
    os << v(s.lhs) << " = array [";
    for (size_t i = 0; i < s.args.size(); ++i)
      os << (i ? ", " : "") << v(s.args[i]);
    os << "]";
    break;
  case StmtKind::UnknownArray:
    os << v(s.lhs) << " = unknown_array";
    break;
  case StmtKind::ArrayLoad:
    os << v(s.lhs) << " = " << v(s.base) << "[*]";
    break;
  case StmtKind::ArrayStore:
    os << v(s.base) << "[*] = " << v(s.rhs);
    break;
  case StmtKind::ForName:
    os << v(s.lhs) << " = Class.forName(" << v(s.strVar) << ")";
    break;
  case StmtKind::GetClass:
    os << v(s.lhs) << " = " << v(s.base) << ".getClass()";
    break;
  case StmtKind::ClassLit:
    os << v(s.lhs) << " = " << s.type->name() << ".class";
    break;
  case StmtKind::GetMember:
    if (s.lhs != kNoVar)
      os << v(s.lhs) << " = ";
    os << v(s.base) << "." << introspectName(s.introspect) << "(";
    if (s.strVar != kNoVar)
      os << v(s.strVar);
    os << ")";
    break;
  case StmtKind::NewInstance:
    if (s.lhs != kNoVar)
      os << v(s.lhs) << " = ";
    os << v(s.base) << ".newInstance()";
    break;
  case StmtKind::Invoke:
    if (s.lhs != kNoVar)
      os << v(s.lhs) << " = ";
    if (s.castType && s.castType->name() != "Object")
      os << "(" << s.castType->name() << ") ";
    os << v(s.base) << ".invoke(" << recvOrNull(s.recv) << ", "
       << v(s.argsVar) << ")";
    break;
  case StmtKind::FieldGet:
    os << v(s.lhs) << " = ";
    if (s.castType && s.castType->name() != "Object")
      os << "(" << s.castType->name() << ") ";
    os << v(s.base) << ".get(" << recvOrNull(s.recv) << ")";
    break;
  case StmtKind::FieldSet:
    os << v(s.base) << ".set(" << recvOrNull(s.recv) << ", " << v(s.rhs)
       << ")";
    break;
  }
  return os.str();
}

std::string Program::serialize() const {
  std::ostringstream os;
  for (auto &c : classes_) {
    if (c->isBuiltin())
      continue;
    if (c->isAbstract())
      os << "abstract ";
    os << "class " << c->name();
    if (c->superclass() && c->superclass() != object_)
      os << " extends " << c->superclass()->name();
    if (!c->interfaces().empty()) {
      os << " implements ";
      for (size_t i = 0; i < c->interfaces().size(); ++i)
        os << (i ? ", " : "") << c->interfaces()[i]->name();
    }
    os << " {\n";
    for (auto &f : c->declaredFields()) {
      os << "  ";
      if (f->isStatic)
        os << "static ";
      os << "field " << f->name << ": " << f->type->name() << ";\n";
    }
    for (auto &m : c->declaredMethods()) {
      os << "  ";
      if (m->isStatic)
        os << "static ";
      os << "method " << m->name << "(";
      for (size_t i = 0; i < m->paramTypes.size(); ++i)
        os << (i ? ", " : "") << m->paramTypes[i]->name();
      os << "): " << (m->returnType ? m->returnType->name() : "void")
         << " {\n";
      for (const Statement &s : m->body)
        os << "    " << statementText(*m, s) << ";\n";
      os << "  }\n";
    }
    os << "}\n";
  }
  return os.str();
}

} // namespace solar
