#include <cstdio>
#include <cstdlib>
#include <string>

#include "rcbound/acceptance.hpp"
#include "rcbound/parallel.hpp"

int main(int argc, char** argv) {
  rcb::AcceptanceOptions options;
  options.workers = rcb::resolve_workers();
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::string list = argv[++i];
      std::size_t pos = 0;
      while (pos < list.size()) {
        const auto comma = list.find(',', pos);
        options.only.push_back(std::atoi(list.substr(pos, comma - pos).c_str()));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else {
      std::fprintf(stderr, "usage: %s [--only 1,2,...]\n", argv[0]);
      return 1;
    }
  }
  options.on_result = [](const rcb::CriterionResult& r) {
    std::printf("%s\n", rcb::format_result(r).c_str());
    std::fflush(stdout);
  };
  const auto results = rcb::run_acceptance(options);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? 0 : 1;
}
