//===-- objects.h - Abstract heap objects and metaobjects ------*- C++ -*-===//
//
// Allocation-site heap objects (with possibly unknown dynamic type), string
// constants, Class/Method/Field metaobjects, and array summaries. Identity is
// structural: interning the same payload twice yields the same object id, so
// an unknown-typed object split at a usage point into known-typed variants
// reuses its allocation site.
//
//===----------------------------------------------------------------------===//

#ifndef SOLAR_OBJECTS_H
#define SOLAR_OBJECTS_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "solar/ir.h"

namespace solar {

using ObjId = int32_t;
constexpr ObjId kNoObj = -1;

enum class ObjKind : uint8_t {
  Heap,          // allocation-site object; type null = unknown dynamic type
  StringConst,   // string literal; member of the string-constant set
  UnknownString, // statically unknown string value
  ClassObj,      // reified class; type null = unknown class
  MethodObj,     // reified method with possibly partial class/signature
  FieldObj,
  ArrayObj,        // array literal / unknown array (exact flag distinguishes)
  PlaceholderArray // synthesized carrier for getMethods()/getFields() results
};

enum class MemberScope : uint8_t {
  PublicIncludingInherited, // getMethod/getMethods search space
  DeclaredOnly              // getDeclaredMethod and annotation results
};

struct AbstractObject {
  ObjKind kind{};
  int site = -1;                  // creation / origin statement id
  const ClassType *type = nullptr; // Heap dynamic type, ClassObj class,
                                   // metaobject declaring class; null=unknown
  std::string str;                 // StringConst payload
  MethodSig msig;                  // MethodObj signature pattern
  FieldSig fsig;                   // FieldObj signature pattern
  MemberScope scope = MemberScope::PublicIncludingInherited;
  bool exactElems = false;         // ArrayObj backed by an array literal

  bool typeKnown() const { return type != nullptr; }

  bool operator==(const AbstractObject &o) const = default;
  bool operator<(const AbstractObject &o) const;

  static AbstractObject heap(int site, const ClassType *typeOrNull) {
    AbstractObject a;
    a.kind = ObjKind::Heap;
    a.site = site;
    a.type = typeOrNull;
    return a;
  }
  static AbstractObject stringConst(int site, std::string value) {
    AbstractObject a;
    a.kind = ObjKind::StringConst;
    a.site = site;
    a.str = std::move(value);
    return a;
  }
  static AbstractObject unknownString(int site) {
    AbstractObject a;
    a.kind = ObjKind::UnknownString;
    a.site = site;
    return a;
  }
  static AbstractObject classObj(int site, const ClassType *typeOrNull) {
    AbstractObject a;
    a.kind = ObjKind::ClassObj;
    a.site = site;
    a.type = typeOrNull;
    return a;
  }
  static AbstractObject methodObj(int site, const ClassType *clsOrNull,
                                  MethodSig sig, MemberScope scope) {
    AbstractObject a;
    a.kind = ObjKind::MethodObj;
    a.site = site;
    a.type = clsOrNull;
    a.msig = std::move(sig);
    a.scope = scope;
    return a;
  }
  static AbstractObject fieldObj(int site, const ClassType *clsOrNull,
                                 FieldSig sig, MemberScope scope) {
    AbstractObject a;
    a.kind = ObjKind::FieldObj;
    a.site = site;
    a.type = clsOrNull;
    a.fsig = std::move(sig);
    a.scope = scope;
    return a;
  }
  static AbstractObject array(int site, bool exact) {
    AbstractObject a;
    a.kind = ObjKind::ArrayObj;
    a.site = site;
    a.exactElems = exact;
    return a;
  }
  static AbstractObject placeholderArray(int site) {
    AbstractObject a;
    a.kind = ObjKind::PlaceholderArray;
    a.site = site;
    return a;
  }
};

/// Interning table; object ids are dense and assigned in creation order,
/// which keeps everything downstream deterministic.
class ObjectTable {
public:
  ObjId intern(const AbstractObject &obj) {
    auto it = ids_.find(obj);
    if (it != ids_.end())
      return it->second;
    ObjId id = (ObjId)objects_.size();
    objects_.push_back(obj);
    ids_.emplace(obj, id);
    return id;
  }

  ObjId find(const AbstractObject &obj) const {
    auto it = ids_.find(obj);
    return it == ids_.end() ? kNoObj : it->second;
  }

  const AbstractObject &operator[](ObjId id) const {
    return objects_[(size_t)id];
  }
  size_t size() const { return objects_.size(); }

private:
  std::vector<AbstractObject> objects_;
  std::map<AbstractObject, ObjId> ids_;
};

/// The dynamic type an object presents to subtype filters: heap objects use
/// their (possibly unknown) allocation type, strings are String, metaobjects
/// are their reified builtin class, arrays degrade to Object.
const ClassType *dynamicType(const Program &prog, const AbstractObject &obj);

std::string describeObject(const Program &prog, const AbstractObject &obj);

} // namespace solar

#endif // SOLAR_OBJECTS_H
