//===-- oracle.h - Concrete interpreter for the IR -------------*- C++ -*-===//
//
// Executes a program with real reflection semantics under a concrete binding
// for every statically unknown string. The collected trace (call edges,
// reflective field accesses, allocations, runtime errors) is the ground
// truth the soundness property tests compare analysis results against.
//
//===----------------------------------------------------------------------===//

#ifndef SOLAR_ORACLE_H
#define SOLAR_ORACLE_H

#include <map>
#include <set>
#include <string>
#include <vector>

#include "solar/state.h"

namespace solar {

struct ConcreteEnv {
  /// Value for each unknown_string site, keyed by the rendered site id.
  std::map<std::string, std::string> stringBindings;
  long fuel = 100000;
};

struct Trace {
  std::set<std::pair<std::string, std::string>> callEdges; // site, target
  std::set<std::pair<std::string, std::string>> accessedFields;
  std::set<std::pair<std::string, std::string>> allocatedTypes;
  std::vector<std::string> runtimeErrors;
  /// Reflectively created objects that never reached a cast or a reflective
  /// receiver position; a program/input pair producing one is outside the
  /// object-reachability assumption and excluded from soundness comparison.
  std::vector<std::string> reachabilityViolations;

  bool ok() const { return runtimeErrors.empty(); }
};

struct InterpretError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runs Main.main deterministically. Throws InterpretError on an unbound
/// string site or an exhausted fuel budget; runtime failures (bad casts,
/// missing classes/members, argument mismatches) end execution and are
/// recorded in the trace instead.
Trace interpret(const Program &prog, const ConcreteEnv &env);

struct SoundnessVerdict {
  bool ok = true;
  std::string counterexample; // first missed edge/access, when !ok
};

/// Checks that every call edge and reflective field access observed under
/// each environment is covered by the analysis state. Traces that violate
/// the object-reachability assumption are skipped.
SoundnessVerdict checkSoundness(const Program &prog,
                                const std::vector<ConcreteEnv> &envs,
                                const PointsToState &st);

} // namespace solar

#endif // SOLAR_ORACLE_H
