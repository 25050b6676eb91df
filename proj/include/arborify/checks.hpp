#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace arborify {

enum class Status { Pass, Fail, Warn };
std::string to_string(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::Pass;
  double residual = 0;
  double tol = 0;
  std::string detail;
};

struct VerifyOptions {
  int trials = 20;
  double tol = -1;  // negative: per-check default
  std::uint64_t seed = 42;
  int N = 0;
  double t = 1.0;
  int quad = 64;
  int threads = 0;
};

// theorem-nls, theorem-wave, covariance, wick, family1, family2, family3, ibp, frak-c
const std::vector<std::string>& check_names();

// Throws std::invalid_argument on an unknown name.
std::vector<CheckResult> run_check(const std::string& name, const VerifyOptions& opt);

}  // namespace arborify
