// Runs the full verification suite and prints one line per check.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "mgc/verify.hpp"

int main(int argc, char** argv) {
  mgc::VerifyOptions opt;
  opt.level = mgc::VerifyLevel::Full;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) opt.level = mgc::VerifyLevel::Quick;
  auto results = mgc::run_verification(opt);
  std::fputs(mgc::format_report(results).c_str(), stdout);
  return mgc::all_passed(results) ? EXIT_SUCCESS : EXIT_FAILURE;
}
