//===-- analysis_fixture.h - Shared helpers for engine tests ---*- C++ -*-===//

#ifndef SOLAR_TESTS_ANALYSIS_FIXTURE_H
#define SOLAR_TESTS_ANALYSIS_FIXTURE_H

#include <memory>
#include <set>
#include <string>

#include "solar/engine.h"
#include "solar/parser.h"
#include "solar/soundness.h"

namespace solar::test {

struct Analysis {
  std::unique_ptr<Program> prog;
  std::unique_ptr<Engine> engine;

  const PointsToState &state() const { return engine->state(); }

  const MethodMember *method(const std::string &full) const {
    for (const MethodMember *m : prog->allMethods())
      if (m->fullName() == full)
        return m;
    return nullptr;
  }

  VarRef var(const std::string &methodFull, const std::string &name) const {
    const MethodMember *m = method(methodFull);
    if (!m)
      return {};
    for (size_t i = 0; i < m->varNames.size(); ++i)
      if (m->varNames[i] == name)
        return {m, (VarId)i};
    return {};
  }

  /// Rendered forms of the objects a variable points to, e.g.
  /// "heap:A@Main.main/new/0" — see describeObject.
  std::set<std::string> pointsTo(const std::string &methodFull,
                                 const std::string &name) const {
    std::set<std::string> out;
    for (ObjId o : state().varPt(var(methodFull, name)))
      out.insert(describeObject(*prog, state().objects[o]));
    return out;
  }

  /// Just the dynamic-type names of the heap objects in a pt set.
  std::set<std::string> heapTypes(const std::string &methodFull,
                                  const std::string &name) const {
    std::set<std::string> out;
    for (ObjId o : state().varPt(var(methodFull, name))) {
      const AbstractObject &obj = state().objects[o];
      if (obj.kind == ObjKind::Heap)
        out.insert(obj.typeKnown() ? obj.type->name() : "<unknown>");
    }
    return out;
  }

  std::set<std::pair<std::string, std::string>> callEdges() const {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto &[site, target] : state().callEdges())
      out.insert({prog->statementAt(site).site.str(), target->fullName()});
    return out;
  }

  std::set<std::string> edgeTargets(const std::string &siteKey) const {
    std::set<std::string> out;
    for (const auto &[site, target] : state().callEdges())
      if (prog->statementAt(site).site.str() == siteKey)
        out.insert(target->fullName());
    return out;
  }

  const Statement &stmtAt(const std::string &siteKey) const {
    for (const Statement *s : prog->allStatements())
      if (s->site.str() == siteKey)
        return *s;
    throw std::runtime_error("no statement at " + siteKey);
  }

  std::set<std::string> splitTypesAt(
      const std::map<int, std::vector<const ClassType *>> &table,
      const std::string &siteKey) const {
    std::set<std::string> out;
    auto it = table.find(stmtAt(siteKey).id);
    if (it != table.end())
      for (const ClassType *t : it->second)
        out.insert(t->name());
    return out;
  }

  Report report() const {
    return buildReport(*prog, state(), engine->config());
  }
};

inline Analysis analyze(const std::string &text,
                        EngineConfig config = {},
                        const AnnotationSet *annotations = nullptr) {
  Analysis a;
  a.prog = parseProgram(text);
  a.engine = std::make_unique<Engine>(*a.prog, config, annotations);
  a.engine->solve();
  return a;
}

} // namespace solar::test

#endif // SOLAR_TESTS_ANALYSIS_FIXTURE_H
