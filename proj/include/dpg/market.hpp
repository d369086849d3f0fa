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

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpg {

/// How the user pays: a one-off purchase or a regularly recurring payment.
enum class PaymentFlow { Single, Recurring };

/// Service-level bucket of a request; each level owns its own pricing grid.
enum class ServiceLevel { L1, L2, L3, L4 };

/// An IaaS virtual machine offering.
struct VmType {
  std::string size_label;
  int vcpu = 1;
  double memory_gb = 0.0;
  double storage_gb = 0.0;
  std::string host_os;
  double hour_cost = 0.0;  // money per hour

  friend bool operator==(const VmType&, const VmType&) = default;
};

/// Resource minima one service of an application needs from its VM.
struct ServiceRequirement {
  int min_vcpu = 1;
  double min_memory_gb = 0.0;
  double min_storage_gb = 0.0;
  std::string host_os;

  friend bool operator==(const ServiceRequirement&, const ServiceRequirement&) = default;
};

/// A SaaS application as hosted by one provider. Every service runs on its
/// own VM; num_services must equal services.size().
struct Application {
  std::string app_id;
  int num_services = 0;
  std::vector<ServiceRequirement> services;
  int max_tenants = 1;  // > 1 marks a multi-tenant application
  double initial_price = 0.0;

  bool multi_tenant() const { return max_tenants > 1; }

  friend bool operator==(const Application&, const Application&) = default;
};

/// One user demand for an application.
struct Request {
  std::string app_id;
  double willingness = 0.0;  // budget cap for this request
  double duration_hours = 0.0;
  PaymentFlow payment_flow = PaymentFlow::Single;
  bool perf_required = false;

  friend bool operator==(const Request&, const Request&) = default;
};

struct VmInventoryEntry {
  VmType vm_type;
  int count = 0;

  friend bool operator==(const VmInventoryEntry&, const VmInventoryEntry&) = default;
};

/// A SaaS provider: VM stock, hosted applications, per-unit benefit tables.
struct Provider {
  int provider_id = 0;
  std::vector<VmInventoryEntry> vm_inventory;
  std::vector<Application> applications;
  std::map<std::string, double> vm_benefits;   // size_label -> per-unit benefit
  std::map<std::string, double> app_benefits;  // app_id -> per-unit benefit

  int total_vm_units() const {
    int total = 0;
    for (const auto& entry : vm_inventory) total += entry.count;
    return total;
  }

  const Application* find_application(const std::string& app_id) const {
    for (const auto& app : applications)
      if (app.app_id == app_id) return &app;
    return nullptr;
  }

  friend bool operator==(const Provider&, const Provider&) = default;
};

/// One VM choice per service, in service order.
struct VmAssignment {
  std::vector<VmType> vms;
  double total_hour_cost = 0.0;

  friend bool operator==(const VmAssignment&, const VmAssignment&) = default;
};

inline bool satisfies(const VmType& vm, const ServiceRequirement& req) {
  return vm.vcpu >= req.min_vcpu && vm.memory_gb >= req.min_memory_gb &&
         vm.storage_gb >= req.min_storage_gb && vm.host_os == req.host_os;
}

/// Buckets a request into a service level.
///
/// Utilization and payment flow partition the levels: at full utilization a
/// single payment is level 1 and a recurring one level 2; below full
/// utilization performance guarantees are dropped, recurring payment is level
/// 3 and single payment level 4. Multi-tenancy does not move the boundary.
/// Total for every input with positive utilization.
inline ServiceLevel classify_service_level(double utilization, bool multi_tenant,
                                           bool perf_required, PaymentFlow payment_flow) {
  if (!(utilization > 0.0))
    throw std::invalid_argument("classify_service_level: utilization must be positive");
  (void)multi_tenant;
  (void)perf_required;
  if (utilization >= 1.0)
    return payment_flow == PaymentFlow::Single ? ServiceLevel::L1 : ServiceLevel::L2;
  return payment_flow == PaymentFlow::Recurring ? ServiceLevel::L3 : ServiceLevel::L4;
}

/// The finite pricing-parameter grid of a service level, strictly increasing.
/// Lower levels keep higher values so their prices stay close to the full
/// price; discounted levels get the small grids.
inline std::vector<double> omega_grid(ServiceLevel level) {
  switch (level) {
    case ServiceLevel::L1:
      return {0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40};
    case ServiceLevel::L2:
      return {0.04, 0.05, 0.06, 0.07, 0.08, 0.09};
    case ServiceLevel::L3:
      return {0.006, 0.009, 0.012, 0.015, 0.018, 0.021, 0.024, 0.027, 0.030};
    case ServiceLevel::L4:
      return {0.001, 0.002, 0.003, 0.004, 0.005};
  }
  throw std::invalid_argument("omega_grid: unknown service level");
}

/// Picks one inventory VM per service at the minimal summed hourly cost.
///
/// Unit counts are honored within the single request. When several assignments
/// reach the minimal cost, the lexicographically smallest size-label sequence
/// (in service order) wins, which reduces to the per-service cheapest type
/// with label tie-break whenever counts do not bind. Empty when some service
/// cannot be placed.
inline std::optional<VmAssignment> select_vms(const Application& app, const Provider& provider) {
  const std::size_t n_services = app.services.size();
  const auto& inventory = provider.vm_inventory;

  // Candidate type indices per service, cheapest first, label-ordered on ties.
  std::vector<std::vector<std::size_t>> candidates(n_services);
  for (std::size_t s = 0; s < n_services; ++s) {
    for (std::size_t t = 0; t < inventory.size(); ++t)
      if (inventory[t].count > 0 && satisfies(inventory[t].vm_type, app.services[s]))
        candidates[s].push_back(t);
    if (candidates[s].empty()) return std::nullopt;
    std::sort(candidates[s].begin(), candidates[s].end(), [&](std::size_t a, std::size_t b) {
      if (inventory[a].vm_type.hour_cost != inventory[b].vm_type.hour_cost)
        return inventory[a].vm_type.hour_cost < inventory[b].vm_type.hour_cost;
      return inventory[a].vm_type.size_label < inventory[b].vm_type.size_label;
    });
  }

  auto build = [&](const std::vector<std::size_t>& choice) {
    VmAssignment assignment;
    for (std::size_t type_index : choice) {
      assignment.vms.push_back(inventory[type_index].vm_type);
      assignment.total_hour_cost += inventory[type_index].vm_type.hour_cost;
    }
    return assignment;
  };

  // Fast path: per-service cheapest is optimal when no type is oversubscribed.
  {
    std::map<std::size_t, int> demand;
    for (const auto& c : candidates) ++demand[c.front()];
    bool fits = true;
    for (const auto& [type_index, units] : demand)
      if (units > inventory[type_index].count) {
        fits = false;
        break;
      }
    if (fits) {
      std::vector<std::size_t> choice;
      choice.reserve(n_services);
      for (const auto& c : candidates) choice.push_back(c.front());
      return build(choice);
    }
  }

  // Contended counts: exact search over per-service candidates with a
  // remaining-cost bound.
  std::vector<double> tail_min(n_services + 1, 0.0);
  for (std::size_t s = n_services; s-- > 0;)
    tail_min[s] = tail_min[s + 1] + inventory[candidates[s].front()].vm_type.hour_cost;

  std::vector<int> remaining(inventory.size());
  for (std::size_t t = 0; t < inventory.size(); ++t) remaining[t] = inventory[t].count;

  std::vector<std::size_t> chosen(n_services);
  std::vector<std::size_t> best_choice;
  std::vector<std::string> best_labels;
  double best_cost = std::numeric_limits<double>::infinity();

  auto labels_of = [&](const std::vector<std::size_t>& choice) {
    std::vector<std::string> labels;
    labels.reserve(choice.size());
    for (std::size_t type_index : choice) labels.push_back(inventory[type_index].vm_type.size_label);
    return labels;
  };

  std::function<void(std::size_t, double)> search = [&](std::size_t s, double cost) {
    if (cost + tail_min[s] > best_cost) return;
    if (s == n_services) {
      auto labels = labels_of(chosen);
      if (cost < best_cost || (cost == best_cost && labels < best_labels)) {
        best_cost = cost;
        best_choice = chosen;
        best_labels = std::move(labels);
      }
      return;
    }
    for (std::size_t type_index : candidates[s]) {
      if (remaining[type_index] == 0) continue;
      --remaining[type_index];
      chosen[s] = type_index;
      search(s + 1, cost + inventory[type_index].vm_type.hour_cost);
      ++remaining[type_index];
    }
  };
  search(0, 0.0);

  if (best_choice.empty() && n_services > 0) return std::nullopt;
  return build(best_choice);
}

enum class RequestError { UnknownApplication, NonPositiveWillingness, NonPositiveDuration };

inline const char* to_string(RequestError error) {
  switch (error) {
    case RequestError::UnknownApplication: return "UnknownApplication";
    case RequestError::NonPositiveWillingness: return "NonPositiveWillingness";
    case RequestError::NonPositiveDuration: return "NonPositiveDuration";
  }
  return "UnknownRequestError";
}

/// Full list of admission-gate violations for a request; empty means valid.
inline std::vector<RequestError> validate_request(const Request& request,
                                                  const std::set<std::string>& known_apps) {
  std::vector<RequestError> errors;
  if (known_apps.find(request.app_id) == known_apps.end())
    errors.push_back(RequestError::UnknownApplication);
  if (!(request.willingness > 0.0)) errors.push_back(RequestError::NonPositiveWillingness);
  if (!(request.duration_hours > 0.0)) errors.push_back(RequestError::NonPositiveDuration);
  return errors;
}

}  // namespace dpg
