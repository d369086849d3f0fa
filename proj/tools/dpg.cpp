// Copyright 2026 the dpg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front door for the dynamic pricing game simulator.
//
// Exit codes: 0 success, 2 input/validation error, 3 I/O error,
// 4 non-convergence (converge subcommand only).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpg/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoConvergence = 4;

int g_verbosity = 1;  // 0 quiet, 1 normal, 2 debug

void info(const std::string& message) {
  if (g_verbosity >= 1) std::cerr << message << '\n';
}

void debug(const std::string& message) {
  if (g_verbosity >= 2) std::cerr << message << '\n';
}

std::string fmt9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

/// Writes text to the given path, or to standard output for "-".
int write_text(const std::string& out_path, const std::string& text) {
  if (out_path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot open '" << out_path << "' for writing\n";
    return kExitIo;
  }
  out << text;
  out.flush();
  if (!out.good()) {
    std::cerr << "error: failed writing '" << out_path << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

struct CommonOptions {
  std::string scenario_path;
  std::string out_path = "-";
  std::string format = "csv";
  std::optional<std::uint64_t> seed_override;
  std::optional<int> max_iter_override;
};

dpg::ReportFormat report_format(const std::string& format) {
  return format == "json" ? dpg::ReportFormat::Json : dpg::ReportFormat::Csv;
}

/// Loads, validates and patches a scenario; non-zero result is the exit code.
int load_scenario_checked(const CommonOptions& options, dpg::Scenario& scenario) {
  try {
    scenario = dpg::load_scenario(options.scenario_path);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << options.scenario_path << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << options.scenario_path << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  const auto problems = dpg::validate_scenario(scenario);
  if (!problems.empty()) {
    for (const auto& problem : problems) std::cerr << "error: " << problem << '\n';
    return kExitInput;
  }
  if (options.seed_override) scenario.seed = *options.seed_override;
  if (options.max_iter_override) scenario.max_iterations = *options.max_iter_override;
  return kExitOk;
}

int cmd_simulate(const CommonOptions& options) {
  dpg::Scenario scenario;
  if (int rc = load_scenario_checked(options, scenario)) return rc;
  debug("scenario loaded: " + std::to_string(scenario.providers.size()) + " providers, " +
        std::to_string(scenario.requests.size()) + " requests");

  const dpg::ExperimentReport report = dpg::run_profit_series(scenario);
  int converged = 0;
  for (const auto& outcome : report.outcomes) converged += outcome.converged ? 1 : 0;
  info("simulate: " + std::to_string(report.outcomes.size()) + " games, " +
       std::to_string(converged) + " converged, " + std::to_string(report.failures.size()) +
       " failed");
  return write_text(options.out_path,
                    dpg::export_report_string(report, report_format(options.format)));
}

int cmd_converge(const CommonOptions& options, std::size_t request_index) {
  dpg::Scenario scenario;
  if (int rc = load_scenario_checked(options, scenario)) return rc;
  if (request_index >= scenario.requests.size()) {
    std::cerr << "error: --request " << request_index << " out of range (scenario has "
              << scenario.requests.size() << " requests)\n";
    return kExitInput;
  }

  const dpg::ExperimentReport report = dpg::run_bid_convergence(scenario, request_index);
  const dpg::GameOutcome& outcome = report.outcomes.front();
  info("converge: request " + std::to_string(request_index) + ", " +
       std::to_string(outcome.iterations) + " iterations, " +
       (outcome.converged
            ? "equilibrium at iteration " + std::to_string(dpg::convergence_iteration(outcome))
            : "no equilibrium within cap"));
  if (int rc = write_text(options.out_path,
                          dpg::export_report_string(report, report_format(options.format))))
    return rc;
  return outcome.converged ? kExitOk : kExitNoConvergence;
}

int cmd_equilibrium(const std::string& out_path, double gamma, double theta, double infra_cost,
                    double alpha_sum, double beta, const std::string& variant_name) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    std::cerr << "error: --gamma must be in (0,1)\n";
    return kExitInput;
  }
  if (theta < 0.0 || infra_cost < 0.0 || !(theta + infra_cost > 0.0)) {
    std::cerr << "error: --theta and --c must be non-negative with a positive sum\n";
    return kExitInput;
  }
  if (!(alpha_sum > 0.0) || !(beta > 0.0)) {
    std::cerr << "error: --alpha and --beta must be positive\n";
    return kExitInput;
  }

  dpg::PricingContext ctx;
  ctx.gamma = gamma;
  ctx.theta = theta;
  ctx.infra_cost = infra_cost;
  ctx.alpha_sum = alpha_sum;
  ctx.beta = beta;
  ctx.willingness = theta + infra_cost;

  const auto variant = variant_name == "as-printed" ? dpg::OmegaStarVariant::AsPrinted
                                                    : dpg::OmegaStarVariant::Corrected;
  std::ostringstream out;
  if (const auto omega = dpg::omega_star(ctx, variant)) {
    const double bid = dpg::bid_price(*omega, ctx);
    const double cost = dpg::provisioning_cost(*omega, ctx);
    out << "omega_star = " << fmt9(*omega) << '\n'
        << "bid = " << fmt9(bid) << '\n'
        << "cost = " << fmt9(cost) << '\n'
        << "payoff = " << fmt9(bid - cost) << '\n';
  } else {
    out << "no interior optimum\n";
  }
  return write_text(out_path, out.str());
}

int cmd_scale(const std::string& out_path, const std::string& format, const std::string& sizes_arg,
              std::uint64_t seed) {
  std::vector<int> sizes;
  std::stringstream stream(sizes_arg);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      sizes.push_back(std::stoi(token));
    } catch (const std::exception&) {
      std::cerr << "error: --sizes must be a comma-separated list of integers\n";
      return kExitInput;
    }
  }
  if (sizes.empty()) {
    std::cerr << "error: --sizes must name at least one size\n";
    return kExitInput;
  }
  for (int n : sizes)
    if (n < 2) {
      std::cerr << "error: every size must be >= 2\n";
      return kExitInput;
    }

  const auto rows = dpg::run_scaling(sizes, seed);
  info("scale: measured " + std::to_string(rows.size()) + " sizes");
  return write_text(out_path, format == "json" ? dpg::scaling_to_json(rows)
                                               : dpg::scaling_to_csv(rows));
}

int cmd_validate(const std::string& scenario_path) {
  dpg::Scenario scenario;
  try {
    scenario = dpg::load_scenario(scenario_path);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << scenario_path << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << scenario_path << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  const auto problems = dpg::validate_scenario(scenario);
  if (!problems.empty()) {
    for (const auto& problem : problems) std::cerr << "error: " << problem << '\n';
    return kExitInput;
  }
  std::cout << "OK\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpg - dynamic pricing game simulator for cloud application marketplaces"};
  app.require_subcommand(1);

  bool quiet = false;
  bool verbose = false;
  app.add_flag("-q,--quiet", quiet, "suppress informational output");
  app.add_flag("-v,--verbose", verbose, "extra diagnostics on standard error");

  CommonOptions simulate_opts;
  auto* simulate = app.add_subcommand("simulate", "run one game per scenario request");
  simulate->fallthrough();
  simulate->add_option("--scenario", simulate_opts.scenario_path, "scenario JSON file")
      ->required();
  simulate->add_option("--out", simulate_opts.out_path, "output path, or - for stdout");
  simulate->add_option("--format", simulate_opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--seed", simulate_opts.seed_override, "override the scenario seed");
  simulate->add_option("--max-iter", simulate_opts.max_iter_override, "override the iteration cap")
      ->check(CLI::PositiveNumber);

  CommonOptions converge_opts;
  std::size_t request_index = 0;
  auto* converge = app.add_subcommand("converge", "trace one request's game to equilibrium");
  converge->fallthrough();
  converge->add_option("--scenario", converge_opts.scenario_path, "scenario JSON file")
      ->required();
  converge->add_option("--request", request_index, "request index within the scenario");
  converge->add_option("--out", converge_opts.out_path, "output path, or - for stdout");
  converge->add_option("--format", converge_opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  converge->add_option("--seed", converge_opts.seed_override, "override the scenario seed");
  converge->add_option("--max-iter", converge_opts.max_iter_override, "override the iteration cap")
      ->check(CLI::PositiveNumber);

  double gamma = 0.95, theta = 0.0, infra_cost = 0.0, alpha_sum = 1.0, beta = 1.0;
  std::string variant = "corrected";
  std::string equilibrium_out = "-";
  auto* equilibrium =
      app.add_subcommand("equilibrium", "closed-form interior optimum for one pricing context");
  equilibrium->fallthrough();
  equilibrium->add_option("--gamma", gamma, "marketplace constant in (0,1)")->required();
  equilibrium->add_option("--theta", theta, "application initial price")->required();
  equilibrium->add_option("--c", infra_cost, "infrastructure cost")->required();
  equilibrium->add_option("--alpha", alpha_sum, "summed per-unit VM benefit")->required();
  equilibrium->add_option("--beta", beta, "per-unit application benefit")->required();
  equilibrium->add_option("--variant", variant, "closed-form variant")
      ->check(CLI::IsMember({"corrected", "as-printed"}));
  equilibrium->add_option("--out", equilibrium_out, "output path, or - for stdout");

  std::string sizes_arg;
  std::string scale_out = "-";
  std::string scale_format = "csv";
  std::uint64_t scale_seed = 0;
  auto* scale = app.add_subcommand("scale", "measure iterations-to-equilibrium per market size");
  scale->fallthrough();
  scale->add_option("--sizes", sizes_arg, "comma-separated provider counts, each >= 2")
      ->required();
  scale->add_option("--seed", scale_seed, "base seed for the generated scenarios");
  scale->add_option("--out", scale_out, "output path, or - for stdout");
  scale->add_option("--format", scale_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a scenario file and list violations");
  validate->fallthrough();
  validate->add_option("--scenario", validate_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  g_verbosity = quiet ? 0 : (verbose ? 2 : 1);

  if (app.got_subcommand(simulate)) return cmd_simulate(simulate_opts);
  if (app.got_subcommand(converge)) return cmd_converge(converge_opts, request_index);
  if (app.got_subcommand(equilibrium))
    return cmd_equilibrium(equilibrium_out, gamma, theta, infra_cost, alpha_sum, beta, variant);
  if (app.got_subcommand(scale)) return cmd_scale(scale_out, scale_format, sizes_arg, scale_seed);
  if (app.got_subcommand(validate)) return cmd_validate(validate_path);
  return kExitInput;
}
