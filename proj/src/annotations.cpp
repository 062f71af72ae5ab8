//===-- annotations.cpp ----------------------------------------------------===//

#include "solar/annotations.h"

#include <set>
#include <sstream>

namespace solar {

namespace {

std::string trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void validateSiteKey(const std::string &key, int line) {
  // <method>/<callee>/<ordinal>
  size_t p2 = key.rfind('/');
  size_t p1 = p2 == std::string::npos ? std::string::npos
                                      : key.rfind('/', p2 - 1);
  if (p1 == std::string::npos || p1 == 0 || p2 == p1 + 1 ||
      p2 + 1 >= key.size())
    throw AnnotationError("line " + std::to_string(line) +
                          ": malformed site id '" + key + "'");
  for (size_t i = p2 + 1; i < key.size(); ++i)
    if (!isdigit((unsigned char)key[i]))
      throw AnnotationError("line " + std::to_string(line) +
                            ": malformed site ordinal in '" + key + "'");
}

MethodDescriptor parseDescriptor(const std::string &text, int line) {
  // Class.name(T1,T2) — return type deliberately omitted.
  size_t paren = text.find('(');
  if (paren == std::string::npos || text.back() != ')')
    throw AnnotationError("line " + std::to_string(line) +
                          ": malformed method descriptor '" + text + "'");
  std::string qualified = text.substr(0, paren);
  size_t dot = qualified.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= qualified.size())
    throw AnnotationError("line " + std::to_string(line) +
                          ": descriptor needs Class.name form: '" + text +
                          "'");
  MethodDescriptor d;
  d.className = qualified.substr(0, dot);
  d.methodName = qualified.substr(dot + 1);
  std::string params = text.substr(paren + 1, text.size() - paren - 2);
  if (!trim(params).empty()) {
    std::stringstream ps(params);
    std::string one;
    while (std::getline(ps, one, ','))
      d.paramTypeNames.push_back(trim(one));
  }
  return d;
}

} // namespace

std::string MethodDescriptor::str() const {
  std::string out = className + "." + methodName + "(";
  for (size_t i = 0; i < paramTypeNames.size(); ++i)
    out += (i ? "," : "") + paramTypeNames[i];
  return out + ")";
}

AnnotationSet AnnotationSet::parse(std::string_view text) {
  AnnotationSet set;
  std::set<std::string> seen;
  std::stringstream in{std::string(text)};
  std::string rawLine;
  int lineNo = 0;
  while (std::getline(in, rawLine)) {
    ++lineNo;
    std::string line = trim(rawLine);
    if (line.empty() || line[0] == '#')
      continue;
    size_t sp = line.find_first_of(" \t");
    if (sp == std::string::npos)
      throw AnnotationError("line " + std::to_string(lineNo) +
                            ": expected '<siteId> <value>'");
    std::string key = line.substr(0, sp);
    std::string value = trim(line.substr(sp + 1));
    validateSiteKey(key, lineNo);

    bool fresh = seen.insert(key).second;
    Annotation &ann = set.bySite_[key];
    if (value == "NONE") {
      if (!fresh && ann.kind != Annotation::Kind::None)
        throw AnnotationError("line " + std::to_string(lineNo) +
                              ": NONE conflicts with earlier annotations for " +
                              key);
      ann.kind = Annotation::Kind::None;
      continue;
    }
    if (value.rfind("METHOD", 0) == 0) {
      std::string desc = trim(value.substr(6));
      if (!fresh && ann.kind != Annotation::Kind::Methods)
        throw AnnotationError("line " + std::to_string(lineNo) +
                              ": mixed annotation kinds for " + key);
      ann.kind = Annotation::Kind::Methods;
      ann.descriptors.push_back(parseDescriptor(desc, lineNo));
      continue;
    }
    if (value.find(' ') != std::string::npos)
      throw AnnotationError("line " + std::to_string(lineNo) +
                            ": expected a single class name, NONE, or METHOD "
                            "<descriptor>");
    if (!fresh && ann.kind != Annotation::Kind::Classes)
      throw AnnotationError("line " + std::to_string(lineNo) +
                            ": mixed annotation kinds for " + key);
    ann.kind = Annotation::Kind::Classes;
    ann.classNames.push_back(value);
  }
  return set;
}

const MethodMember *resolveDescriptor(const Program &prog,
                                      const MethodDescriptor &desc) {
  const ClassType *cls = prog.findClass(desc.className);
  if (!cls)
    throw AnnotationError("annotation names unknown class '" +
                          desc.className + "'");
  std::vector<const ClassType *> params;
  for (const std::string &p : desc.paramTypeNames) {
    const ClassType *pt = prog.findClass(p);
    if (!pt)
      throw AnnotationError("annotation descriptor '" + desc.str() +
                            "' names unknown type '" + p + "'");
    params.push_back(pt);
  }
  for (const MethodMember *m : prog.visibleMethods(cls))
    if (m->name == desc.methodName && m->paramTypes == params)
      return m;
  throw AnnotationError("annotation descriptor '" + desc.str() +
                        "' matches no method");
}

} // namespace solar
