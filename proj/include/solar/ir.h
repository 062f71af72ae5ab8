//===-- ir.h - Core program IR and class hierarchy services ----*- C++ -*-===//
//
// Defines the analyzed language: class types, members, statements, and the
// hierarchy queries (subtyping, compatibility, dispatch, member lookup) that
// every analysis rule is built on. A Program is immutable once the parser has
// finished with it and is safe to share read-only across threads.
//
//===----------------------------------------------------------------------===//

#ifndef SOLAR_IR_H
#define SOLAR_IR_H

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solar {

class ClassType;
class Program;
struct MethodMember;

std::unique_ptr<Program> parseProgram(std::string_view text);

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string &msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line(line) {}
  int line;
};

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Local variable index within one method. kNoVar marks an absent operand
/// (e.g. a discarded call result or an explicit null receiver).
using VarId = int32_t;
constexpr VarId kNoVar = -1;

struct FieldMember {
  const ClassType *declaring = nullptr;
  std::string name;
  const ClassType *type = nullptr;
  bool isStatic = false;
  int id = -1; // dense, program-wide

  std::string fullName() const;
};

/// A possibly-partial method signature used as a search pattern. Absent
/// optionals are wildcards ("unknown"). Declared members always carry a fully
/// concrete signature (see MethodMember); patterns arise from reflection
/// metaobjects whose parts may not have been discovered yet.
struct MethodSig {
  std::optional<const ClassType *> returnType; // never Known(nullptr)
  std::optional<std::string> name;
  std::optional<std::vector<const ClassType *>> paramTypes;

  /// The "signature unknown" shorthand: name and parameter list both unknown
  /// (the return type does not participate).
  bool sigUnknown() const { return !name && !paramTypes; }
  bool operator==(const MethodSig &o) const = default;
};

struct FieldSig {
  std::optional<const ClassType *> fieldType;
  std::optional<std::string> name;

  bool sigUnknown() const { return !fieldType && !name; }
  bool operator==(const FieldSig &o) const = default;
};

enum class StmtKind {
  Alloc,         // v = new T
  Copy,          // v = w
  Load,          // v = w.f
  Store,         // v.f = w
  StaticLoad,    // v = T.f
  StaticStore,   // T.f = v
  VirtualCall,   // [v =] w.m(a, ...)
  StaticCall,    // [v =] T.m(a, ...)
  StringConst,   // v = "lit"
  UnknownString, // v = unknown_string
  Cast,          // v = (T) w
  ArrayLit,      // v = array [a, ...]
  UnknownArray,  // v = unknown_array
  ArrayLoad,     // v = w[*]
  ArrayStore,    // w[*] = v
  ForName,       // c = Class.forName(s)   (loadClass is an alias)
  GetClass,      // c = w.getClass()
  ClassLit,      // c = T.class
  GetMember,     // m = c.getMethod(s), ms = c.getFields(), ...
  NewInstance,   // o = c.newInstance()
  Invoke,        // [r =] [(T)] m.invoke(recv|null, args)
  FieldGet,      // r = [(T)] f.get(recv|null)
  FieldSet,      // f.set(recv|null, v)
};

enum class IntrospectKind {
  GetMethod,
  GetDeclaredMethod,
  GetMethods,
  GetDeclaredMethods,
  GetField,
  GetDeclaredField,
  GetFields,
  GetDeclaredFields,
};

bool introspectIsPlural(IntrospectKind k);
bool introspectIsField(IntrospectKind k);
bool introspectIsDeclared(IntrospectKind k);
const char *introspectName(IntrospectKind k);

/// Identifies a statement for reports and annotation files. Rendered as
/// "<enclosingMethod>/<callee>/<ordinal>" where the ordinal counts call sites
/// with the same callee inside one method, starting from 0 in source order.
struct SiteId {
  std::string enclosingMethod; // e.g. "Main.main"
  std::string callee;          // e.g. "Class.forName", "invoke", "m1", "new"
  int ordinal = 0;

  std::string str() const {
    return enclosingMethod + "/" + callee + "/" + std::to_string(ordinal);
  }
};

struct Statement {
  StmtKind kind{};
  int line = 0;
  int id = -1; // program-wide statement index
  SiteId site;
  const MethodMember *enclosing = nullptr;

  VarId lhs = kNoVar;
  VarId rhs = kNoVar;
  VarId base = kNoVar; // receiver / store base / metaobject variable
  VarId recv = kNoVar; // invoke/get/set receiver; kNoVar means explicit null
  VarId strVar = kNoVar;
  VarId argsVar = kNoVar;
  std::vector<VarId> args; // direct call arguments / array literal elements

  const ClassType *type = nullptr;     // Alloc/Cast/ClassLit/static owner
  const ClassType *castType = nullptr; // result cast on Invoke/FieldGet
  std::string name;                    // field or callee name
  std::string literal;                 // string constant payload
  IntrospectKind introspect{};

  const FieldMember *staticField = nullptr;   // resolved for StaticLoad/Store
  const MethodMember *staticTarget = nullptr; // resolved for StaticCall
};

struct MethodMember {
  const ClassType *declaring = nullptr;
  std::string name;
  std::vector<const ClassType *> paramTypes;
  const ClassType *returnType = nullptr; // nullptr means void
  bool isStatic = false;
  bool builtin = false; // Object.toString / Object.getClass
  int id = -1;

  std::vector<Statement> body;
  std::vector<std::string> varNames; // index == VarId
  VarId thisVar = kNoVar;            // instance methods only
  VarId retVar = kNoVar;             // pseudo-variable holding the return
  std::vector<VarId> paramVars;

  std::string fullName() const;
  /// "m(X,Y)" — used in diagnostics and annotation descriptors.
  std::string signatureString() const;
  bool matches(const MethodSig &sig) const;
};

class ClassType {
public:
  ClassType(std::string name, int id) : name_(std::move(name)), id_(id) {}

  const std::string &name() const { return name_; }
  int id() const { return id_; }
  const ClassType *superclass() const { return super_; }
  const std::vector<const ClassType *> &interfaces() const { return ifaces_; }
  bool isAbstract() const { return abstract_; }
  bool isBuiltin() const { return builtin_; }

  const std::vector<std::unique_ptr<FieldMember>> &declaredFields() const {
    return fields_;
  }
  const std::vector<std::unique_ptr<MethodMember>> &declaredMethods() const {
    return methods_;
  }

private:
  friend class Program;
  friend std::unique_ptr<Program> parseProgram(std::string_view text);
  std::string name_;
  int id_;
  const ClassType *super_ = nullptr; // null only for Object
  std::vector<const ClassType *> ifaces_;
  std::vector<std::unique_ptr<FieldMember>> fields_;
  std::vector<std::unique_ptr<MethodMember>> methods_;
  bool abstract_ = false;
  bool builtin_ = false;
};

/// Whole-program container plus the hierarchy services. Built by the parser;
/// immutable afterwards.
class Program {
public:
  Program();

  // -- construction (parser only) -----------------------------------------
  ClassType *addClass(const std::string &name, int line);
  void finalize(); // resolves ids, subtype closure; throws ParseError

  // -- basic access --------------------------------------------------------
  const std::vector<std::unique_ptr<ClassType>> &classes() const {
    return classes_;
  }
  const ClassType *findClass(std::string_view name) const;
  const ClassType *objectType() const { return object_; }
  const ClassType *classType() const { return class_; }
  const ClassType *stringType() const { return string_; }
  const ClassType *methodType() const { return methodMeta_; }
  const ClassType *fieldType() const { return fieldMeta_; }

  const std::vector<const MethodMember *> &allMethods() const {
    return allMethods_;
  }
  const std::vector<const Statement *> &allStatements() const {
    return allStatements_;
  }
  const Statement &statementAt(int id) const { return *allStatements_[id]; }

  /// Entry point: static Main.main() with no parameters. Throws
  /// AnalysisError when absent or malformed.
  const MethodMember *entryMain() const;

  // -- hierarchy -----------------------------------------------------------
  /// Reflexive-transitive subtyping over extends and implements edges.
  bool isSubtype(const ClassType *t, const ClassType *sup) const;
  /// The "could be related" check used by cast-directed inference:
  /// unknown (null) is compatible with Object only; known types are
  /// compatible with Object and with anything on their subtype chain in
  /// either direction.
  bool compatible(const ClassType *maybeUnknown, const ClassType *t2) const;
  std::vector<const ClassType *> supertypesOf(const ClassType *t) const;
  std::vector<const ClassType *> subtypesOf(const ClassType *t) const;

  // -- member resolution ---------------------------------------------------
  /// Methods visible in t: declared plus inherited along the extends chain,
  /// with overridden declarations shadowed.
  std::vector<const MethodMember *> visibleMethods(const ClassType *t) const;
  std::vector<const FieldMember *> visibleFields(const ClassType *t) const;
  const FieldMember *findVisibleField(const ClassType *t,
                                      std::string_view name) const;

  /// Virtual dispatch for IR call sites, which carry only a callee name and
  /// an argument count. An unknown receiver type (null) dispatches only
  /// toString()/getClass(). Returns null when no target exists.
  const MethodMember *dispatchByArity(const ClassType *recvOrNull,
                                      std::string_view name,
                                      size_t arity) const;
  /// Virtual dispatch with an exact parameter list, used for calls
  /// synthesized from resolved reflective targets.
  const MethodMember *
  dispatchExact(const ClassType *recvOrNull, std::string_view name,
                const std::vector<const ClassType *> &params) const;

  /// Members visible in t that match every known part of the pattern;
  /// unknown parts are wildcards, a known return type must match exactly.
  std::vector<const MethodMember *> mtdLookup(const ClassType *t,
                                              const MethodSig &sig) const;
  std::vector<const FieldMember *> fldLookup(const ClassType *t,
                                             const FieldSig &sig) const;

  /// Declared-only variants (the getDeclared* search space).
  std::vector<const MethodMember *> mtdLookupDeclared(const ClassType *t,
                                                      const MethodSig &sig) const;
  std::vector<const FieldMember *> fldLookupDeclared(const ClassType *t,
                                                     const FieldSig &sig) const;

  /// Canonical textual form; parsing it again reproduces the program.
  std::string serialize() const;

  static bool isReservedMemberName(std::string_view name);

private:
  std::vector<std::unique_ptr<ClassType>> classes_;
  std::map<std::string, ClassType *, std::less<>> byName_;
  const ClassType *object_ = nullptr;
  const ClassType *class_ = nullptr;
  const ClassType *string_ = nullptr;
  const ClassType *methodMeta_ = nullptr;
  const ClassType *fieldMeta_ = nullptr;
  std::vector<const MethodMember *> allMethods_;
  std::vector<const Statement *> allStatements_;
  std::vector<std::vector<bool>> subtype_; // [sub][sup]
  bool finalized_ = false;

  void registerBuiltins();
};

/// One statement in the textual format, without the trailing newline or
/// leading indentation. Used by the serializer and by test tooling that
/// rewrites method bodies.
std::string statementText(const MethodMember &m, const Statement &s);

} // namespace solar

#endif // SOLAR_IR_H
