//===-- soundness.h - Soundness criteria and analysis report ---*- C++ -*-===//
//
// Per-call soundness criteria for the reflective side-effect calls, the
// imprecision ranking, and the report linking every flagged call back to the
// entry and member-introspecting sites that created its metaobjects.
//
//===----------------------------------------------------------------------===//

#ifndef SOLAR_SOUNDNESS_H
#define SOLAR_SOUNDNESS_H

#include <string>
#include <vector>

#include "solar/state.h"

namespace solar {

/// True iff the dynamic type of every object the variable may point to is
/// known (vacuously true for a variable that points to nothing).
bool allKnown(const PointsToState &st, const VarRef &v);

/// Soundness criterion for one reflective call. For invoke():
/// every receiver type is known, or every unknown-class method object has a
/// known name and the argument array is exactly analyzable. Static calls
/// (null receiver) drop the receiver disjunct.
bool scInvoke(const Program &prog, const PointsToState &st,
              const Statement &s);
bool scGet(const Program &prog, const PointsToState &st, const Statement &s);
bool scSet(const Program &prog, const PointsToState &st, const Statement &s);

struct ReportEntry {
  enum class Kind {
    UnsoundInvoke,
    UnsoundGet,
    UnsoundSet,
    ImpreciseCast,
    ImpreciseTargets,
  };
  Kind kind{};
  std::string site;
  int metric = 0;
  std::vector<std::string> provenance; // entry + member-introspecting sites
  bool provenanceUnknown = false;      // no traceable metaobject origin
};

const char *reportKindName(ReportEntry::Kind k);

struct Report {
  bool sound = false;
  std::vector<ReportEntry> unsound;
  std::vector<ReportEntry> imprecise;
  std::vector<std::pair<std::string, std::string>> callGraph; // site, target
  std::map<std::string, long> stats;
};

/// Imprecisely resolved calls: cast points materializing more types than the
/// cast threshold, then side-effect sites resolving more targets than the
/// target threshold, each in non-increasing metric order (ties by site id).
std::vector<ReportEntry> rankImprecise(const Program &prog,
                                       const PointsToState &st,
                                       const EngineConfig &config);

Report buildReport(const Program &prog, const PointsToState &st,
                   const EngineConfig &config);

std::string toJson(const Report &report);
std::string toText(const Report &report);

} // namespace solar

#endif // SOLAR_SOUNDNESS_H
