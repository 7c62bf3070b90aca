#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mgc {

enum class VerifyLevel { Quick, Full };
enum class CheckStatus { Pass, Fail, Skipped };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Quick;
  std::uint64_t seed = 7;
  int samples = 0;  // 0: level default for each Monte-Carlo check
};

struct CheckResult {
  std::string id;    // "1".."10" for the criteria, "P1".. for property checks
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double residual = 0;  // worst measured deviation (0 for exact checks)
  std::string detail;
};

std::vector<CheckResult> run_verification(const VerifyOptions& opt);
// one line per check; no timings, so equal options give identical text
std::string format_report(const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);
const char* status_name(CheckStatus s);

}  // namespace mgc
