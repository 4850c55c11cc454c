#include <CLI11.hpp>
#include <json.hpp>

#include <clocale>
#include <fstream>
#include <iostream>

#include "polyheat/errors.hpp"
#include "polyheat/experiments.hpp"

namespace {

void write_failure_manifest(const std::filesystem::path& out_dir, const std::string& experiment,
                            const std::string& status, const std::string& message) {
  if (out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return;
  // run() writes a full manifest itself before rethrowing; keep that one
  if (std::filesystem::exists(out_dir / "manifest.json", ec)) return;
  nlohmann::json manifest;
  manifest["experiment"] = experiment;
  manifest["version"] = polyheat::kVersion;
  manifest["status"] = status;
  manifest["error"] = message;
  manifest["assertions"] = nlohmann::json::array();
  std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");

  CLI::App app{"polyheat: rescaled asymptotics and positivity experiments for "
               "polyharmonic heat flows"};
  std::string experiment;
  std::string config_file;
  std::string out_dir;
  app.add_option("experiment", experiment, "experiment name")
      ->required()
      ->check(CLI::IsMember(polyheat::ExperimentConfig::known_experiments()));
  app.add_option("--config", config_file, "flat key=value config file");
  app.add_option("--out", out_dir, "output directory")->required();
  app.allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string current_experiment = experiment;
  try {
    std::map<std::string, std::string> kv;
    if (!config_file.empty()) kv = polyheat::ExperimentConfig::parse_file(config_file);

    // remaining tokens are --key value overrides; flags win over the file
    const auto extras = app.remaining();
    for (std::size_t i = 0; i < extras.size(); ++i) {
      const std::string& token = extras[i];
      if (token.rfind("--", 0) != 0 || token.size() <= 2) {
        throw polyheat::validation_error("expected --key value pairs, got '" + token + "'");
      }
      if (i + 1 >= extras.size()) {
        throw polyheat::validation_error("flag '" + token + "' is missing a value");
      }
      kv[token.substr(2)] = extras[++i];
    }

    const polyheat::ExperimentConfig config(experiment, kv);
    const polyheat::RunResult result = polyheat::run(config, out_dir);
    for (const auto& a : result.assertions) {
      std::cout << (a.pass ? "[PASS] " : "[FAIL] ") << a.name << ": " << a.detail << '\n';
    }
    return result.exit_code;
  } catch (const polyheat::validation_error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    write_failure_manifest(out_dir, current_experiment, "validation_error", e.what());
    return 2;
  } catch (const polyheat::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    write_failure_manifest(out_dir, current_experiment, "numerical_error", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    write_failure_manifest(out_dir, current_experiment, "error", e.what());
    return 3;
  }
}
