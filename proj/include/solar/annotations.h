//===-- annotations.h - User annotations for reflective sites --*- C++ -*-===//
//
// Annotation files pin down what a reflective entry or member-introspecting
// call returns when the analysis cannot resolve it. One annotation per line:
//
//   <method>/<callee>/<ordinal> <ClassName>
//   <method>/<callee>/<ordinal> NONE
//   <method>/<callee>/<ordinal> METHOD <Class.name(T1,T2)>
//
// Repeated lines for the same site accumulate. An annotated site's rule
// output is replaced entirely, so NONE suppresses everything the rules would
// have produced.
//
//===----------------------------------------------------------------------===//

#ifndef SOLAR_ANNOTATIONS_H
#define SOLAR_ANNOTATIONS_H

#include <map>
#include <string>
#include <vector>

#include "solar/ir.h"

namespace solar {

struct AnnotationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MethodDescriptor {
  std::string className;
  std::string methodName;
  std::vector<std::string> paramTypeNames;
  std::string str() const;
};

struct Annotation {
  enum class Kind { Classes, Methods, None };
  Kind kind = Kind::None;
  std::vector<std::string> classNames;       // Kind::Classes
  std::vector<MethodDescriptor> descriptors; // Kind::Methods
};

class AnnotationSet {
public:
  /// Parses annotation text; throws AnnotationError on malformed lines or
  /// on contradictory annotations for one site. Name resolution against the
  /// program happens later, when the annotations are applied.
  static AnnotationSet parse(std::string_view text);

  const Annotation *find(const std::string &siteKey) const {
    auto it = bySite_.find(siteKey);
    return it == bySite_.end() ? nullptr : &it->second;
  }
  bool empty() const { return bySite_.empty(); }
  const std::map<std::string, Annotation> &all() const { return bySite_; }

private:
  std::map<std::string, Annotation> bySite_;
};

/// Resolves a descriptor against the hierarchy; throws AnnotationError if
/// the class is unknown or no declared-or-inherited method matches.
const MethodMember *resolveDescriptor(const Program &prog,
                                      const MethodDescriptor &desc);

} // namespace solar

#endif // SOLAR_ANNOTATIONS_H
