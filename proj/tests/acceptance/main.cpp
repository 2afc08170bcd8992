#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  dgl::acceptance::SuiteOptions opts;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--work" && k + 1 < argc) {
      opts.work_dir = argv[++k];
    } else if (arg == "--only" && k + 1 < argc) {
      opts.only.push_back(std::atoi(argv[++k]));
    } else if (arg == "-j" && k + 1 < argc) {
      opts.jobs = static_cast<std::size_t>(std::atoi(argv[++k]));
    } else {
      std::cerr << "usage: dgl_acceptance_tests [--work DIR] [--only ID]... [-j N]\n";
      return 2;
    }
  }
  const auto results = dgl::acceptance::run_suite(opts, std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
