// dimtrunc: run truncation-error sweeps and oracle checks from the command line.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dimtrunc/experiment.hpp"

namespace {

// Machine-readable failure row on stderr: status,key,message
int fail(const std::string& status, const std::string& key, const std::string& message, int code) {
  std::string msg = message;
  for (char& ch : msg) {
    if (ch == ',' || ch == '\n') ch = ';';
  }
  std::cerr << "status,key,message\n" << status << "," << key << "," << msg << "\n";
  return code;
}

struct Overrides {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> flags;  // key, raw value
  std::vector<std::string> sets;                           // key=value

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "flat key = value configuration file");
    static const char* keys[][2] = {
        {"model", "model1 or model2"},
        {"c", "decay amplitude c > 0"},
        {"theta", "decay exponent theta > 1"},
        {"p", "summability exponent p in (0,1), p*theta > 1"},
        {"s-start", "first truncation dimension"},
        {"s-factor", "geometric grid factor"},
        {"s-count", "number of grid points"},
        {"mc-samples", "Monte Carlo sample count"},
        {"mc-seed", "Monte Carlo seed"},
        {"out", "output directory"},
        {"format", "comma-separated subset of csv,svg"},
    };
    flags.reserve(std::size(keys));
    for (const auto& k : keys) {
      flags.emplace_back(k[0], "");
      auto& slot = flags.back().second;
      app->add_option(std::string("--") + k[0], slot, k[1]);
    }
    app->add_option("--set", sets, "extra key=value override (repeatable)");
  }

  dimtrunc::ExperimentConfig build() const {
    dimtrunc::ExperimentConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw dimtrunc::ConfigError("config", "cannot read '" + config_path + "'");
      std::ostringstream text;
      text << in.rdbuf();
      dimtrunc::apply_config_text(config, text.str());
    }
    for (const auto& [key, value] : flags) {
      if (!value.empty()) dimtrunc::apply_setting(config, key, value);
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw dimtrunc::ConfigError("set", "expected key=value, got '" + kv + "'");
      dimtrunc::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    dimtrunc::validate(config);
    return config;
  }
};

int do_run(const Overrides& o) {
  const dimtrunc::ExperimentConfig config = o.build();
  const dimtrunc::RunResult result = dimtrunc::run(config);
  std::cout << "config_hash," << dimtrunc::config_hash(config) << "\n";
  std::cout << "sandwich," << (result.bounds.pass() ? "pass" : "fail") << "\n";
  if (result.bounds.fit) std::cout << "slope," << dimtrunc::format_number(result.bounds.fit->slope) << "\n";
  std::cout << "oracles," << (result.oracles.pass() ? "pass" : "fail") << "\n";
  for (const auto& path : result.files) std::cout << "wrote," << path.string() << "\n";
  if (result.exit_code != 0) {
    for (const auto& r : result.bounds.rows) {
      if (!r.lower_ok || !r.upper_ok) {
        return fail("certification_failed", "s=" + std::to_string(r.s),
                    std::string(!r.lower_ok ? "lower envelope exceeds error" : "error exceeds upper envelope"),
                    result.exit_code);
      }
    }
    for (const auto& r : result.oracles.rows) {
      if (!r.pass) {
        return fail("oracle_failed", r.check, "discrepancy " + dimtrunc::format_number(r.discrepancy),
                    result.exit_code);
      }
    }
  }
  return result.exit_code;
}

int do_validate(const Overrides& o) {
  const dimtrunc::ExperimentConfig config = o.build();
  const dimtrunc::ValidationReport report = dimtrunc::validate_oracles(config);
  std::cout << "check,parameter,closed_form,estimate,std_error,discrepancy,tolerance,pass\n";
  for (const auto& r : report.rows) {
    std::cout << r.check << "," << dimtrunc::format_number(r.parameter) << ","
              << dimtrunc::format_number(r.closed_form) << "," << dimtrunc::format_number(r.estimate) << ","
              << dimtrunc::format_number(r.std_error) << "," << dimtrunc::format_number(r.discrepancy) << ","
              << dimtrunc::format_number(r.tolerance) << "," << (r.pass ? "true" : "false") << "\n";
  }
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension-truncation error experiments for lognormal diffusion"};
  app.require_subcommand(1);
  Overrides run_opts;
  Overrides validate_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "sweep s, certify envelopes, write CSV/SVG");
  CLI::App* validate_cmd = app.add_subcommand("validate", "run the oracle suite only");
  run_opts.add_to(run_cmd);
  validate_opts.add_to(validate_cmd);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (run_cmd->parsed()) return do_run(run_opts);
    return do_validate(validate_opts);
  } catch (const dimtrunc::ConfigError& e) {
    return fail("config_error", e.key(), e.message(), 2);
  } catch (const std::exception& e) {
    return fail("runtime_error", "-", e.what(), 3);
  }
}
