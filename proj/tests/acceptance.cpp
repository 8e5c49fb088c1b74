// Acceptance suite runner: one PASS/FAIL line per criterion, exit status 0
// only when all of them pass.
//
//   mrca_acceptance [--profile quick|full] [--seed N] [--json report.json]

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "mrca/verification.hpp"

int main(int argc, char** argv) {
  mrca::verification::SuiteOptions options;
  std::string json_path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "-h" || arg == "--help") {
      std::cout << "usage: mrca_acceptance [--profile quick|full] [--seed N] [--json report.json]\n";
      return 0;
    }
    if (i + 1 >= argc) {
      std::cerr << "missing value for " << arg << '\n';
      return 2;
    }
    const std::string value = argv[++i];
    if (arg == "--profile") {
      options.profile = mrca::verification::parse_profile(value);
    } else if (arg == "--seed") {
      options.seed = std::stoull(value);
    } else if (arg == "--json") {
      json_path = value;
    } else {
      std::cerr << "unknown option " << arg << '\n';
      return 2;
    }
  }

  std::cout << "acceptance profile=" << mrca::verification::to_string(options.profile) << " seed=" << options.seed
            << '\n';
  const auto report = mrca::verification::run_suite(options, [](const mrca::verification::CriterionResult& r) {
    std::cout << r.summary_line() << std::endl;
  });
  int passed = 0;
  for (const auto& c : report.criteria) passed += c.pass() ? 1 : 0;
  std::cout << "acceptance " << passed << '/' << report.criteria.size() << " criteria passed\n";

  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << report.to_json().dump(2) << '\n';
  }
  return report.pass() ? EXIT_SUCCESS : EXIT_FAILURE;
}
