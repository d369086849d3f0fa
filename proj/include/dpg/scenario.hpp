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

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "dpg/catalog.hpp"
#include "dpg/game.hpp"

namespace dpg {

/// A reproducible market configuration: providers, request pool, game knobs.
struct Scenario {
  std::uint64_t seed = 0;
  double gamma = 0.95;
  int max_iterations = 10000;
  std::vector<Provider> providers;
  std::vector<Request> requests;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Deterministic random marketplace over the builtin catalogs.
///
/// Every provider hosts the same application list. Inventories hold 1-10
/// units per catalog VM type and per-unit benefits come from
/// {0.10, 0.15, ..., 0.80}. Each request picks a catalog product, a payment
/// flow (which selects the license model and its price), a performance flag
/// and a duration in [1, 720] hours; its willingness is the license price
/// plus an upper bound on any provider's infrastructure cost, so the budget
/// cap never cuts below theta + c.
inline Scenario generate_scenario(int n_providers, int n_requests, std::uint64_t seed) {
  if (n_providers < 1) throw std::invalid_argument("generate_scenario: n_providers must be >= 1");
  if (n_requests < 1) throw std::invalid_argument("generate_scenario: n_requests must be >= 1");

  Scenario scenario;
  scenario.seed = seed;

  std::mt19937_64 engine(seed);
  const auto vm_types = builtin_vm_catalog();
  const auto entries = builtin_app_catalog();
  const auto applications = builtin_applications();

  for (int i = 0; i < n_providers; ++i) {
    Provider provider;
    provider.provider_id = i;
    for (const auto& vm : vm_types)
      provider.vm_inventory.push_back({vm, 1 + static_cast<int>(draw_below(engine, 10))});
    for (const auto& vm : vm_types)
      provider.vm_benefits[vm.size_label] =
          (10.0 + 5.0 * static_cast<double>(draw_below(engine, 15))) / 100.0;
    for (const auto& app : applications)
      provider.app_benefits[app.app_id] =
          (10.0 + 5.0 * static_cast<double>(draw_below(engine, 15))) / 100.0;
    provider.applications = applications;
    scenario.providers.push_back(std::move(provider));
  }

  for (int r = 0; r < n_requests; ++r) {
    const auto& entry = entries[draw_below(engine, entries.size())];
    const PaymentFlow flow =
        draw_below(engine, 2) == 0 ? PaymentFlow::Single : PaymentFlow::Recurring;
    const bool perf = draw_below(engine, 2) == 1;
    const double tau = 1.0 + draw_unit(engine) * 719.0;
    const Application app = make_application(entry, flow);

    Request request;
    request.app_id = app.app_id;
    request.duration_hours = tau;
    request.payment_flow = flow;
    request.perf_required = perf;
    request.willingness = app.initial_price + tau * app.num_services * kMaxCatalogHourCost;
    scenario.requests.push_back(std::move(request));
  }
  return scenario;
}

/// Builds the per-request game, one player per provider in ascending id.
///
/// A provider that does not host the requested application, cannot place
/// every service on its stock, or is left with no feasible grid point enters
/// with an empty grid and abstains; its context is inert and never read.
/// Utilization is the requested service count over the provider's total VM
/// units.
inline std::vector<PlayerState> make_request_players(const Scenario& scenario,
                                                     const Request& request) {
  std::vector<PlayerState> players;
  players.reserve(scenario.providers.size());
  for (const auto& provider : scenario.providers) {
    PlayerState player;
    player.provider_id = provider.provider_id;
    player.ctx.gamma = scenario.gamma;
    player.ctx.theta = 0.0;
    player.ctx.infra_cost = 1.0;

    const Application* app = provider.find_application(request.app_id);
    if (app != nullptr) {
      if (auto assignment = select_vms(*app, provider)) {
        PricingContext ctx;
        ctx.gamma = scenario.gamma;
        ctx.theta = app->initial_price;
        ctx.infra_cost = infrastructure_cost(*assignment, request.duration_hours);
        double alpha = 0.0;
        for (const auto& vm : assignment->vms) alpha += provider.vm_benefits.at(vm.size_label);
        ctx.alpha_sum = alpha;
        ctx.beta = provider.app_benefits.at(app->app_id);
        ctx.willingness = request.willingness;
        const double rho = utilization(app->num_services, provider.total_vm_units());
        ctx.level = classify_service_level(rho, app->multi_tenant(), request.perf_required,
                                           request.payment_flow);
        player.ctx = ctx;
        player.grid = feasible_omegas(omega_grid(ctx.level), ctx);
      }
    }
    players.push_back(std::move(player));
  }
  std::sort(players.begin(), players.end(),
            [](const PlayerState& a, const PlayerState& b) { return a.provider_id < b.provider_id; });
  return players;
}

/// Every schema and invariant violation in the scenario, one message each;
/// empty means the scenario is clean.
inline std::vector<std::string> validate_scenario(const Scenario& scenario) {
  std::vector<std::string> problems;
  auto complain = [&](std::string message) { problems.push_back(std::move(message)); };

  if (scenario.providers.empty()) complain("scenario must define at least one provider");
  if (scenario.requests.empty()) complain("scenario must define at least one request");
  if (!(scenario.gamma > 0.0)) complain("gamma must be > 0");
  if (!(scenario.gamma < 1.0)) complain("gamma must be < 1");
  if (scenario.max_iterations < 1) complain("max_iterations must be >= 1");

  std::set<std::string> known_apps;
  for (const auto& provider : scenario.providers)
    for (const auto& app : provider.applications) known_apps.insert(app.app_id);

  std::set<int> seen_ids;
  for (const auto& provider : scenario.providers) {
    const std::string where = "provider " + std::to_string(provider.provider_id);
    if (provider.provider_id < 0) complain(where + ": provider_id must be non-negative");
    if (!seen_ids.insert(provider.provider_id).second) complain(where + ": duplicate provider_id");

    std::set<std::string> labels;
    for (const auto& entry : provider.vm_inventory) {
      const auto& vm = entry.vm_type;
      const std::string vm_where = where + ", vm type '" + vm.size_label + "'";
      if (!labels.insert(vm.size_label).second) complain(vm_where + ": duplicate size_label");
      if (entry.count < 1) complain(vm_where + ": count must be >= 1");
      if (vm.vcpu < 1) complain(vm_where + ": vcpu must be >= 1");
      if (!(vm.memory_gb > 0.0)) complain(vm_where + ": memory_gb must be > 0");
      if (!(vm.storage_gb > 0.0)) complain(vm_where + ": storage_gb must be > 0");
      if (vm.hour_cost < 0.0) complain(vm_where + ": hour_cost must be >= 0");
      auto it = provider.vm_benefits.find(vm.size_label);
      if (it == provider.vm_benefits.end())
        complain(vm_where + ": missing vm_benefits entry");
      else if (!(it->second > 0.0 && it->second <= 1.0))
        complain(vm_where + ": vm benefit must be in (0,1]");
    }

    std::set<std::string> app_ids;
    for (const auto& app : provider.applications) {
      const std::string app_where = where + ", application '" + app.app_id + "'";
      if (!app_ids.insert(app.app_id).second) complain(app_where + ": duplicate app_id");
      if (app.num_services < 1) complain(app_where + ": num_services must be >= 1");
      if (static_cast<int>(app.services.size()) != app.num_services)
        complain(app_where + ": services length must equal num_services");
      if (app.max_tenants < 1) complain(app_where + ": max_tenants must be >= 1");
      if (app.initial_price < 0.0) complain(app_where + ": initial_price must be >= 0");
      for (const auto& service : app.services) {
        if (service.min_vcpu < 1 || !(service.min_memory_gb > 0.0) ||
            !(service.min_storage_gb > 0.0)) {
          complain(app_where + ": service requirement minima must be positive");
          break;
        }
      }
      auto it = provider.app_benefits.find(app.app_id);
      if (it == provider.app_benefits.end())
        complain(app_where + ": missing app_benefits entry");
      else if (!(it->second > 0.0 && it->second <= 1.0))
        complain(app_where + ": app benefit must be in (0,1]");
    }
  }

  for (std::size_t r = 0; r < scenario.requests.size(); ++r)
    for (RequestError error : validate_request(scenario.requests[r], known_apps))
      complain("request " + std::to_string(r) + ": " + to_string(error));

  return problems;
}

}  // namespace dpg
