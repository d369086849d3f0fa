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

#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dpg/json_io.hpp"

namespace dpg {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct ReportMetadata {
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  std::string artifact_version = kArtifactVersion;

  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct RequestFailure {
  std::size_t request_index = 0;
  std::string reason;

  friend bool operator==(const RequestFailure&, const RequestFailure&) = default;
};

/// Everything one experiment run produced, in stable provider/request order.
/// cumulative_profit is provider-major and grows by one column per processed
/// game; game_seconds is the only field that varies between identical runs.
struct ExperimentReport {
  ReportMetadata metadata;
  std::vector<int> provider_ids;
  std::vector<std::size_t> request_indices;
  std::vector<GameOutcome> outcomes;
  std::vector<std::vector<double>> cumulative_profit;
  std::vector<double> game_seconds;
  std::vector<RequestFailure> failures;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// 64-bit FNV-1a over the canonical JSON form of the scenario.
inline std::uint64_t scenario_hash(const Scenario& scenario) {
  const std::string text = nlohmann::json(scenario).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline void play_request(const Scenario& scenario, std::size_t request_index,
                         ExperimentReport& report, std::vector<double>& running) {
  const auto players = make_request_players(scenario, scenario.requests[request_index]);
  const auto start = std::chrono::steady_clock::now();
  GameOutcome outcome =
      run_game(players, GameConfig{mix_seed(scenario.seed, request_index), scenario.max_iterations});
  const double elapsed = seconds_since(start);

  for (std::size_t i = 0; i < running.size(); ++i) {
    running[i] += outcome.payoffs[i];
    report.cumulative_profit[i].push_back(running[i]);
  }
  report.request_indices.push_back(request_index);
  report.outcomes.push_back(std::move(outcome));
  report.game_seconds.push_back(elapsed);
}

inline ExperimentReport empty_report(const Scenario& scenario) {
  ExperimentReport report;
  report.metadata = {scenario_hash(scenario), scenario.seed, kArtifactVersion};
  for (const auto& provider : scenario.providers)
    report.provider_ids.push_back(provider.provider_id);
  std::sort(report.provider_ids.begin(), report.provider_ids.end());
  report.cumulative_profit.assign(report.provider_ids.size(), {});
  return report;
}

}  // namespace detail

/// Plays one game per request in order and accumulates per-provider profit.
/// A request whose game construction fails is recorded under failures and
/// skipped; all series stay aligned over the processed games.
inline ExperimentReport run_profit_series(const Scenario& scenario) {
  ExperimentReport report = detail::empty_report(scenario);
  std::vector<double> running(report.provider_ids.size(), 0.0);
  for (std::size_t r = 0; r < scenario.requests.size(); ++r) {
    try {
      detail::play_request(scenario, r, report, running);
    } catch (const std::exception& e) {
      report.failures.push_back({r, e.what()});
    }
  }
  return report;
}

/// Full trace of the single game played for one request of the scenario.
inline ExperimentReport run_bid_convergence(const Scenario& scenario, std::size_t request_index) {
  if (request_index >= scenario.requests.size())
    throw std::out_of_range("run_bid_convergence: request_index out of range");
  ExperimentReport report = detail::empty_report(scenario);
  std::vector<double> running(report.provider_ids.size(), 0.0);
  detail::play_request(scenario, request_index, report, running);
  return report;
}

struct ScalingRow {
  int n_providers = 0;
  double median_iterations = 0.0;
  double elapsed_seconds = 0.0;

  friend bool operator==(const ScalingRow&, const ScalingRow&) = default;
};

/// Median iterations-to-equilibrium and wall time per market size, measured
/// over reps_per_size single-request scenarios each.
inline std::vector<ScalingRow> run_scaling(const std::vector<int>& sizes, std::uint64_t seed,
                                           int reps_per_size = 10) {
  if (sizes.empty()) throw std::invalid_argument("run_scaling: sizes must be non-empty");
  if (reps_per_size < 1) throw std::invalid_argument("run_scaling: reps_per_size must be >= 1");
  for (int n : sizes)
    if (n < 2) throw std::invalid_argument("run_scaling: each size must be >= 2");

  std::vector<ScalingRow> rows;
  for (int n : sizes) {
    std::vector<int> iterations;
    const auto start = std::chrono::steady_clock::now();
    for (int rep = 0; rep < reps_per_size; ++rep) {
      const std::uint64_t rep_seed =
          mix_seed(seed, (static_cast<std::uint64_t>(n) << 20) + static_cast<std::uint64_t>(rep));
      const Scenario scenario = generate_scenario(n, 1, rep_seed);
      const auto players = make_request_players(scenario, scenario.requests[0]);
      const GameOutcome outcome =
          run_game(players, GameConfig{mix_seed(scenario.seed, 0), scenario.max_iterations});
      iterations.push_back(outcome.iterations);
    }
    std::sort(iterations.begin(), iterations.end());
    const std::size_t m = iterations.size();
    const double median = m % 2 == 1
                              ? iterations[m / 2]
                              : (iterations[m / 2 - 1] + iterations[m / 2]) / 2.0;
    rows.push_back({n, median, detail::seconds_since(start)});
  }
  return rows;
}

// --- report serialization ---------------------------------------------------

inline void to_json(nlohmann::json& j, const ProfileEntry& entry) {
  j = nlohmann::json{{"provider_id", entry.provider_id},
                     {"omega", entry.omega ? nlohmann::json(*entry.omega) : nlohmann::json()},
                     {"bid", entry.bid ? nlohmann::json(*entry.bid) : nlohmann::json()}};
}

inline void from_json(const nlohmann::json& j, ProfileEntry& entry) {
  j.at("provider_id").get_to(entry.provider_id);
  entry.omega.reset();
  entry.bid.reset();
  if (!j.at("omega").is_null()) entry.omega = j.at("omega").get<double>();
  if (!j.at("bid").is_null()) entry.bid = j.at("bid").get<double>();
}

inline void to_json(nlohmann::json& j, const IterationRecord& record) {
  nlohmann::json costs = nlohmann::json::array();
  for (const auto& cost : record.costs)
    costs.push_back(cost ? nlohmann::json(*cost) : nlohmann::json());
  j = nlohmann::json{
      {"iteration", record.iteration},
      {"profile", record.profile},
      {"winner_id", record.winner_id ? nlohmann::json(*record.winner_id) : nlohmann::json()},
      {"costs", costs},
      {"payoffs", record.payoffs}};
}

inline void from_json(const nlohmann::json& j, IterationRecord& record) {
  j.at("iteration").get_to(record.iteration);
  j.at("profile").get_to(record.profile);
  record.winner_id.reset();
  if (!j.at("winner_id").is_null()) record.winner_id = j.at("winner_id").get<int>();
  record.costs.clear();
  for (const auto& cost : j.at("costs"))
    record.costs.push_back(cost.is_null() ? std::optional<double>{} : cost.get<double>());
  j.at("payoffs").get_to(record.payoffs);
}

inline void to_json(nlohmann::json& j, const GameOutcome& outcome) {
  j = nlohmann::json{
      {"winner_id", outcome.winner_id ? nlohmann::json(*outcome.winner_id) : nlohmann::json()},
      {"equilibrium_profile", outcome.equilibrium_profile},
      {"payoffs", outcome.payoffs},
      {"trace", outcome.trace},
      {"iterations", outcome.iterations},
      {"converged", outcome.converged}};
}

inline void from_json(const nlohmann::json& j, GameOutcome& outcome) {
  outcome.winner_id.reset();
  if (!j.at("winner_id").is_null()) outcome.winner_id = j.at("winner_id").get<int>();
  j.at("equilibrium_profile").get_to(outcome.equilibrium_profile);
  j.at("payoffs").get_to(outcome.payoffs);
  j.at("trace").get_to(outcome.trace);
  j.at("iterations").get_to(outcome.iterations);
  j.at("converged").get_to(outcome.converged);
}

inline void to_json(nlohmann::json& j, const ReportMetadata& metadata) {
  j = nlohmann::json{{"scenario_hash", metadata.scenario_hash},
                     {"seed", metadata.seed},
                     {"artifact_version", metadata.artifact_version}};
}

inline void from_json(const nlohmann::json& j, ReportMetadata& metadata) {
  j.at("scenario_hash").get_to(metadata.scenario_hash);
  j.at("seed").get_to(metadata.seed);
  j.at("artifact_version").get_to(metadata.artifact_version);
}

inline void to_json(nlohmann::json& j, const RequestFailure& failure) {
  j = nlohmann::json{{"request_index", failure.request_index}, {"reason", failure.reason}};
}

inline void from_json(const nlohmann::json& j, RequestFailure& failure) {
  j.at("request_index").get_to(failure.request_index);
  j.at("reason").get_to(failure.reason);
}

inline void to_json(nlohmann::json& j, const ExperimentReport& report) {
  j = nlohmann::json{{"metadata", report.metadata},
                     {"provider_ids", report.provider_ids},
                     {"request_indices", report.request_indices},
                     {"outcomes", report.outcomes},
                     {"cumulative_profit", report.cumulative_profit},
                     {"game_seconds", report.game_seconds},
                     {"failures", report.failures}};
}

inline void from_json(const nlohmann::json& j, ExperimentReport& report) {
  j.at("metadata").get_to(report.metadata);
  j.at("provider_ids").get_to(report.provider_ids);
  j.at("request_indices").get_to(report.request_indices);
  j.at("outcomes").get_to(report.outcomes);
  j.at("cumulative_profit").get_to(report.cumulative_profit);
  j.at("game_seconds").get_to(report.game_seconds);
  j.at("failures").get_to(report.failures);
}

enum class ReportFormat { Csv, Json };

namespace detail {

inline std::string format_sig9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

}  // namespace detail

/// CSV trace rows ordered by (request, iteration, provider); abstaining
/// players leave omega/bid/cost empty. Numbers carry 9 significant digits.
/// No timing columns, so identical runs give byte-identical CSV.
inline void export_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "request_index,iteration,provider_id,omega,bid,cost,payoff,is_winner\n";
  for (std::size_t k = 0; k < report.outcomes.size(); ++k) {
    const GameOutcome& outcome = report.outcomes[k];
    for (const IterationRecord& record : outcome.trace) {
      for (std::size_t i = 0; i < record.profile.size(); ++i) {
        const ProfileEntry& entry = record.profile[i];
        out << report.request_indices[k] << ',' << record.iteration << ',' << entry.provider_id
            << ',';
        if (entry.omega) out << detail::format_sig9(*entry.omega);
        out << ',';
        if (entry.bid) out << detail::format_sig9(*entry.bid);
        out << ',';
        if (record.costs[i]) out << detail::format_sig9(*record.costs[i]);
        out << ',' << detail::format_sig9(record.payoffs[i]) << ','
            << (record.winner_id && *record.winner_id == entry.provider_id ? 1 : 0) << '\n';
      }
    }
  }
}

/// JSON mirrors the full ExperimentReport structure and round-trips exactly.
inline void export_report(const ExperimentReport& report, ReportFormat format,
                          std::ostream& out) {
  if (format == ReportFormat::Csv)
    export_report_csv(report, out);
  else
    out << nlohmann::json(report).dump(2) << '\n';
}

inline void export_report(const ExperimentReport& report, ReportFormat format,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  export_report(report, format, out);
  out.flush();
  if (!out.good()) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::string export_report_string(const ExperimentReport& report, ReportFormat format) {
  std::ostringstream out;
  export_report(report, format, out);
  return out.str();
}

inline ExperimentReport import_report_json(const std::string& path) {
  return parse_json_file(path).get<ExperimentReport>();
}

inline ExperimentReport import_report_json_string(const std::string& text) {
  return nlohmann::json::parse(text).get<ExperimentReport>();
}

inline void to_json(nlohmann::json& j, const ScalingRow& row) {
  j = nlohmann::json{{"n", row.n_providers},
                     {"iterations", row.median_iterations},
                     {"elapsed_seconds", row.elapsed_seconds}};
}

inline std::string scaling_to_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream out;
  out << "n,iterations,elapsed_seconds\n";
  for (const auto& row : rows)
    out << row.n_providers << ',' << detail::format_sig9(row.median_iterations) << ','
        << detail::format_sig9(row.elapsed_seconds) << '\n';
  return out.str();
}

inline std::string scaling_to_json(const std::vector<ScalingRow>& rows) {
  return nlohmann::json(rows).dump(2) + "\n";
}

}  // namespace dpg
