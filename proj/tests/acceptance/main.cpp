#include <cstdio>
#include <cstdlib>
#include <string>

#include "zrplab/acceptance.hpp"

// One line per criterion; exit status 1 if any fails.  Optional arguments
// select criteria by number.
int main(int argc, char** argv) {
  zrp::AcceptanceOptions o;
  for (int i = 1; i < argc; ++i) o.only.insert(std::atoi(argv[i]));
  bool ok = true;
  zrp::run_acceptance(o, [&](const zrp::CriterionResult& r) {
    std::printf("%s\n", zrp::format_result(r).c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  });
  return ok ? 0 : 1;
}
