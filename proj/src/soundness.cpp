//===-- soundness.cpp --------------------------------------------------------===//

#include "solar/soundness.h"

#include <algorithm>
#include <cassert>

#include "solar/reflect.h"
#include "json.hpp"

namespace solar {

bool allKnown(const PointsToState &st, const VarRef &v) {
  for (ObjId o : st.varPt(v)) {
    const AbstractObject &obj = st.objects[o];
    if (obj.kind == ObjKind::Heap && !obj.typeKnown())
      return false;
  }
  return true;
}

bool scInvoke(const Program &prog, const PointsToState &st,
              const Statement &s) {
  assert(s.kind == StmtKind::Invoke);
  if (s.recv != kNoVar && allKnown(st, {s.enclosing, s.recv}))
    return true;
  ParamTypeTuples ptp = paramTypeTuples(prog, st, {s.enclosing, s.argsVar});
  for (ObjId o : st.varPt({s.enclosing, s.base})) {
    const AbstractObject &mo = st.objects[o];
    if (mo.kind != ObjKind::MethodObj || mo.typeKnown())
      continue;
    if (!mo.msig.name || !ptp.exact || ptp.empty())
      return false;
  }
  return true;
}

bool scGet(const Program &prog, const PointsToState &st, const Statement &s) {
  assert(s.kind == StmtKind::FieldGet);
  if (s.recv != kNoVar && allKnown(st, {s.enclosing, s.recv}))
    return true;
  for (ObjId o : st.varPt({s.enclosing, s.base})) {
    const AbstractObject &fo = st.objects[o];
    if (fo.kind != ObjKind::FieldObj || fo.typeKnown())
      continue;
    if (!fo.fsig.name || s.castType == prog.objectType())
      return false;
  }
  return true;
}

bool scSet(const Program &prog, const PointsToState &st, const Statement &s) {
  (void)prog;
  assert(s.kind == StmtKind::FieldSet);
  if (s.recv != kNoVar && allKnown(st, {s.enclosing, s.recv}))
    return true;
  for (ObjId o : st.varPt({s.enclosing, s.base})) {
    const AbstractObject &fo = st.objects[o];
    if (fo.kind != ObjKind::FieldObj || fo.typeKnown())
      continue;
    if (!fo.fsig.name || !allKnown(st, {s.enclosing, s.rhs}))
      return false;
  }
  return true;
}

const char *reportKindName(ReportEntry::Kind k) {
  switch (k) {
  case ReportEntry::Kind::UnsoundInvoke:
    return "unsound-invoke";
  case ReportEntry::Kind::UnsoundGet:
    return "unsound-get";
  case ReportEntry::Kind::UnsoundSet:
    return "unsound-set";
  case ReportEntry::Kind::ImpreciseCast:
    return "imprecise-cast";
  case ReportEntry::Kind::ImpreciseTargets:
    return "imprecise-targets";
  }
  return "?";
}

namespace {

/// Walks from the metaobjects and unknown-typed receivers at a flagged site
/// back to the entry and member-introspecting calls that created them.
class ProvenanceWalker {
public:
  ProvenanceWalker(const Program &prog, const PointsToState &st)
      : prog_(prog), st_(st) {}

  std::vector<std::string> collect(const Statement &s) {
    sites_.clear();
    seen_.clear();
    fromVar({s.enclosing, s.base});
    if (s.recv != kNoVar)
      receiversFromVar({s.enclosing, s.recv});
    return sites_;
  }

private:
  const Program &prog_;
  const PointsToState &st_;
  std::vector<std::string> sites_;
  std::set<std::string> seen_;

  void add(int stmtId) {
    std::string key = prog_.statementAt(stmtId).site.str();
    if (seen_.insert(key).second)
      sites_.push_back(key);
  }

  void entrySitesOf(const VarRef &classVar) {
    for (ObjId c : st_.varPt(classVar)) {
      const AbstractObject &co = st_.objects[c];
      if (co.kind == ObjKind::ClassObj)
        add(co.site);
    }
  }

  void fromMetaobject(const AbstractObject &mo) {
    const Statement &origin = prog_.statementAt(mo.site);
    switch (origin.kind) {
    case StmtKind::GetMember:
      add(mo.site);
      entrySitesOf({origin.enclosing, origin.base});
      break;
    case StmtKind::ForName:
    case StmtKind::GetClass:
    case StmtKind::ClassLit:
      add(mo.site);
      break;
    default:
      break; // untraceable origin
    }
  }

  void fromVar(const VarRef &v) {
    for (ObjId o : st_.varPt(v)) {
      const AbstractObject &obj = st_.objects[o];
      if (obj.kind == ObjKind::MethodObj || obj.kind == ObjKind::FieldObj ||
          obj.kind == ObjKind::ClassObj)
        fromMetaobject(obj);
    }
  }

  void receiversFromVar(const VarRef &v) {
    for (ObjId o : st_.varPt(v)) {
      const AbstractObject &obj = st_.objects[o];
      if (obj.kind != ObjKind::Heap || obj.typeKnown())
        continue;
      const Statement &alloc = prog_.statementAt(obj.site);
      if (alloc.kind == StmtKind::NewInstance)
        entrySitesOf({alloc.enclosing, alloc.base});
    }
  }
};

bool statementReachable(const PointsToState &st, const Statement &s) {
  return st.isReachable(s.enclosing);
}

} // namespace

std::vector<ReportEntry> rankImprecise(const Program &prog,
                                       const PointsToState &st,
                                       const EngineConfig &config) {
  std::vector<ReportEntry> casts, targets;

  for (const auto &[site, types] : st.castSplits) {
    if ((int)types.size() <= config.castImprecisionThreshold)
      continue;
    ReportEntry e;
    e.kind = ReportEntry::Kind::ImpreciseCast;
    e.site = prog.statementAt(site).site.str();
    e.metric = (int)types.size();
    casts.push_back(std::move(e));
  }
  auto targetEntry = [&](int site, int count) {
    ReportEntry e;
    e.kind = ReportEntry::Kind::ImpreciseTargets;
    e.site = prog.statementAt(site).site.str();
    e.metric = count;
    targets.push_back(std::move(e));
  };
  for (const auto &[site, members] : st.invokeTargets)
    if ((int)members.size() > config.targetImprecisionThreshold)
      targetEntry(site, (int)members.size());
  for (const auto &[site, members] : st.fieldTargets)
    if ((int)members.size() > config.targetImprecisionThreshold)
      targetEntry(site, (int)members.size());

  auto bySeverity = [](const ReportEntry &a, const ReportEntry &b) {
    if (a.metric != b.metric)
      return a.metric > b.metric;
    return a.site < b.site;
  };
  std::sort(casts.begin(), casts.end(), bySeverity);
  std::sort(targets.begin(), targets.end(), bySeverity);
  casts.insert(casts.end(), targets.begin(), targets.end());
  return casts;
}

Report buildReport(const Program &prog, const PointsToState &st,
                   const EngineConfig &config) {
  Report report;
  ProvenanceWalker walker(prog, st);

  for (const Statement *sp : prog.allStatements()) {
    const Statement &s = *sp;
    if (!statementReachable(st, s))
      continue;
    bool failed = false;
    ReportEntry::Kind kind{};
    switch (s.kind) {
    case StmtKind::Invoke:
      failed = !scInvoke(prog, st, s);
      kind = ReportEntry::Kind::UnsoundInvoke;
      break;
    case StmtKind::FieldGet:
      failed = !scGet(prog, st, s);
      kind = ReportEntry::Kind::UnsoundGet;
      break;
    case StmtKind::FieldSet:
      failed = !scSet(prog, st, s);
      kind = ReportEntry::Kind::UnsoundSet;
      break;
    default:
      continue;
    }
    if (!failed)
      continue;
    ReportEntry e;
    e.kind = kind;
    e.site = s.site.str();
    e.provenance = walker.collect(s);
    e.provenanceUnknown = e.provenance.empty();
    report.unsound.push_back(std::move(e));
  }

  report.imprecise = rankImprecise(prog, st, config);
  report.sound = report.unsound.empty();

  for (const auto &[site, target] : st.callEdges())
    report.callGraph.push_back(
        {prog.statementAt(site).site.str(), target->fullName()});
  std::sort(report.callGraph.begin(), report.callGraph.end());
  report.callGraph.erase(
      std::unique(report.callGraph.begin(), report.callGraph.end()),
      report.callGraph.end());

  report.stats["classes"] = (long)prog.classes().size();
  report.stats["reachableMethods"] = (long)st.reachableMethods().size();
  report.stats["objects"] = (long)st.objects.size();
  report.stats["callEdges"] = (long)report.callGraph.size();
  report.stats["sweeps"] = st.sweeps;
  report.stats["diagnostics"] = (long)st.diagnostics.size();
  return report;
}

std::string toJson(const Report &report) {
  nlohmann::ordered_json j;
  j["verdict"] = report.sound ? "Sound" : "UnsoundAt";
  auto &unsound = j["unsound"] = nlohmann::ordered_json::array();
  for (const ReportEntry &e : report.unsound) {
    nlohmann::ordered_json je;
    je["site"] = e.site;
    je["kind"] = reportKindName(e.kind);
    je["provenance"] = e.provenance;
    if (e.provenanceUnknown)
      je["provenanceUnknown"] = true;
    unsound.push_back(std::move(je));
  }
  auto &imprecise = j["imprecise"] = nlohmann::ordered_json::array();
  for (const ReportEntry &e : report.imprecise) {
    nlohmann::ordered_json je;
    je["site"] = e.site;
    je["kind"] = reportKindName(e.kind);
    je["metric"] = e.metric;
    imprecise.push_back(std::move(je));
  }
  auto &cg = j["callGraph"] = nlohmann::ordered_json::array();
  for (const auto &[site, target] : report.callGraph) {
    nlohmann::ordered_json je;
    je["site"] = site;
    je["target"] = target;
    cg.push_back(std::move(je));
  }
  j["stats"] = report.stats;
  return j.dump(2) + "\n";
}

std::string toText(const Report &report) {
  std::string out;
  out += "Unsound list:\n";
  if (report.unsound.empty())
    out += "  (empty)\n";
  for (const ReportEntry &e : report.unsound) {
    out += "  [" + std::string(reportKindName(e.kind)) + "] " + e.site + "\n";
    if (e.provenanceUnknown) {
      out += "    origin: unknown\n";
    } else {
      out += "    entry/introspection sites:";
      for (const std::string &p : e.provenance)
        out += " " + p;
      out += "\n";
    }
  }
  out += "Imprecise list:\n";
  if (report.imprecise.empty())
    out += "  (empty)\n";
  for (const ReportEntry &e : report.imprecise) {
    out += "  [" + std::string(reportKindName(e.kind)) + "] " + e.site + ": " +
           std::to_string(e.metric) +
           (e.kind == ReportEntry::Kind::ImpreciseCast ? " types" : " targets") +
           "\n";
  }
  out += "Verdict: " + std::string(report.sound ? "Sound" : "Unsound") + "\n";
  return out;
}

} // namespace solar
