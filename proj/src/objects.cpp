//===-- objects.cpp --------------------------------------------------------===//

#include "solar/objects.h"

#include <tuple>

namespace solar {

namespace {

int typeId(const ClassType *t) { return t ? t->id() : -1; }

std::tuple<int, int, int, std::string, int, std::string, int,
           std::vector<int>, int, std::string, int, int>
orderKey(const AbstractObject &a) {
  std::vector<int> params;
  int paramsKnown = a.msig.paramTypes.has_value();
  if (a.msig.paramTypes)
    for (const ClassType *p : *a.msig.paramTypes)
      params.push_back(typeId(p));
  return {(int)a.kind,
          a.site,
          typeId(a.type),
          a.str,
          a.msig.returnType ? typeId(*a.msig.returnType) : -2,
          a.msig.name.value_or("\x01"),
          paramsKnown,
          params,
          a.fsig.fieldType ? typeId(*a.fsig.fieldType) : -2,
          a.fsig.name.value_or("\x01"),
          (int)a.scope,
          (int)a.exactElems};
}

} // namespace

bool AbstractObject::operator<(const AbstractObject &o) const {
  return orderKey(*this) < orderKey(o);
}

const ClassType *dynamicType(const Program &prog, const AbstractObject &obj) {
  switch (obj.kind) {
  case ObjKind::Heap:
    return obj.type; // may be null: unknown dynamic type
  case ObjKind::StringConst:
  case ObjKind::UnknownString:
    return prog.stringType();
  case ObjKind::ClassObj:
    return prog.classType();
  case ObjKind::MethodObj:
    return prog.methodType();
  case ObjKind::FieldObj:
    return prog.fieldType();
  case ObjKind::ArrayObj:
  case ObjKind::PlaceholderArray:
    return prog.objectType();
  }
  return nullptr;
}

std::string describeObject(const Program &prog, const AbstractObject &obj) {
  auto tn = [](const ClassType *t) {
    return t ? t->name() : std::string("<unknown>");
  };
  std::string site = "@" + prog.statementAt(obj.site).site.str();
  switch (obj.kind) {
  case ObjKind::Heap:
    return "heap:" + tn(obj.type) + site;
  case ObjKind::StringConst:
    return "\"" + obj.str + "\"" + site;
  case ObjKind::UnknownString:
    return "<unknown-string>" + site;
  case ObjKind::ClassObj:
    return "class:" + tn(obj.type) + site;
  case ObjKind::MethodObj: {
    std::string s = "method:" + tn(obj.type) + ".";
    s += obj.msig.name.value_or("<?>");
    return s + site;
  }
  case ObjKind::FieldObj: {
    std::string s = "field:" + tn(obj.type) + ".";
    s += obj.fsig.name.value_or("<?>");
    return s + site;
  }
  case ObjKind::ArrayObj:
    return std::string(obj.exactElems ? "array" : "array?") + site;
  case ObjKind::PlaceholderArray:
    return "member-array" + site;
  }
  return "?";
}

} // namespace solar
