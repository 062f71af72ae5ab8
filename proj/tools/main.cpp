//===-- main.cpp - Command-line driver ---------------------------------------===//
//
// solar <program> [--mode solar|probe] [--annotations FILE] [--report FILE]
//       [--threshold-cast N] [--threshold-targets N] [--emit json|text]
//
// Exit codes: 0 = sound, 2 = unsoundly resolved calls present (report still
// written), 1 = usage or input error. SOLAR_MAX_ITERS overrides the solver's
// sweep budget.
//
//===----------------------------------------------------------------------===//

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "solar/engine.h"
#include "solar/oracle.h"
#include "solar/parser.h"
#include "solar/soundness.h"

namespace {

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Reflection-aware points-to analysis"};
  app.name("solar");

  std::string inputPath;
  std::string mode = "solar";
  std::string annotationsPath;
  std::string reportPath;
  std::string emit = "json";
  int thresholdCast = 10;
  int thresholdTargets = 50;

  app.add_option("program", inputPath, "program file to analyze")->required();
  app.add_option("--mode", mode, "engine variant: solar (full) or probe")
      ->check(CLI::IsMember({"solar", "probe"}));
  app.add_option("--annotations", annotationsPath, "annotation file");
  app.add_option("--report", reportPath, "write the report here (default: stdout)");
  app.add_option("--threshold-cast", thresholdCast,
                 "flag casts materializing more than N types");
  app.add_option("--threshold-targets", thresholdTargets,
                 "flag calls resolving more than N targets");
  app.add_option("--emit", emit, "report format")
      ->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e); // help text, exit 0
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1; // any usage problem
  }

  try {
    std::string text = readFile(inputPath);
    auto prog = solar::parseProgram(text);

    solar::AnnotationSet annotations;
    if (!annotationsPath.empty())
      annotations = solar::AnnotationSet::parse(readFile(annotationsPath));

    solar::EngineConfig config;
    config.mode = mode == "probe" ? solar::EngineConfig::Mode::Probe
                                  : solar::EngineConfig::Mode::Solar;
    config.castImprecisionThreshold = thresholdCast;
    config.targetImprecisionThreshold = thresholdTargets;
    if (const char *budget = std::getenv("SOLAR_MAX_ITERS"))
      config.maxSweeps = std::atol(budget);

    solar::Engine engine(*prog, config, &annotations);
    const solar::PointsToState &state = engine.solve();
    solar::Report report = solar::buildReport(*prog, state, config);

    std::string rendered =
        emit == "text" ? solar::toText(report) : solar::toJson(report);
    if (reportPath.empty()) {
      std::cout << rendered;
    } else {
      std::ofstream out(reportPath, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << reportPath << "\n";
        return 1;
      }
      out << rendered;
    }
    return report.sound ? 0 : 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
