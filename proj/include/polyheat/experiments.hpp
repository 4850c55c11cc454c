#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "polyheat/types.hpp"

namespace polyheat {

inline constexpr const char* kVersion = "0.1.0";

/// Flat key=value experiment configuration. File values are overridden by
/// flag values; every numeric access validates and reports the field name.
class ExperimentConfig {
 public:
  ExperimentConfig(std::string experiment, std::map<std::string, std::string> kv);

  static const std::vector<std::string>& known_experiments();
  static std::map<std::string, std::string> parse_file(const std::filesystem::path& path);

  const std::string& experiment() const { return experiment_; }
  const std::map<std::string, std::string>& entries() const { return kv_; }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  Real get_real(const std::string& key, Real fallback) const;
  int get_int(const std::string& key, int fallback) const;
  Real require_positive(const std::string& key, Real fallback) const;
  int require_positive_int(const std::string& key, int fallback) const;
  std::vector<Real> get_reals(const std::string& key, const std::vector<Real>& fallback) const;

  /// Geometric schedule from schedule.t0 / schedule.factor / schedule.count.
  std::vector<Real> schedule(Real t0, Real factor, int count) const;

 private:
  std::string experiment_;
  std::map<std::string, std::string> kv_;
};

struct AssertionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  int exit_code = 0;  // 0 all assertions pass, 1 otherwise
  std::vector<AssertionResult> assertions;
  std::filesystem::path out_dir;
};

/// Runs one experiment, writing results.csv, summary.json and manifest.json
/// into out_dir. The manifest is written even when the run throws; validation
/// and numerical errors propagate to the caller after it is on disk.
RunResult run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace polyheat
