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

#include <string>
#include <vector>

#include "dpg/market.hpp"

namespace dpg {

/// Hourly VM offerings modeled on Amazon EC2 on-demand instances.
inline std::vector<VmType> builtin_vm_catalog() {
  return {
      {"t2.small", 1, 2.0, 4.0, "linux", 0.026},  {"t2.medium", 2, 4.0, 4.0, "linux", 0.052},
      {"m3.medium", 1, 3.75, 4.0, "linux", 0.070}, {"c3.large", 2, 3.75, 32.0, "linux", 0.105},
      {"m3.large", 2, 7.5, 32.0, "linux", 0.140},  {"R3.large", 2, 15.0, 32.0, "linux", 0.175},
  };
}

/// Largest hourly price in the builtin VM catalog.
inline constexpr double kMaxCatalogHourCost = 0.175;

/// One CRM product: both license prices plus its synthetic service needs.
struct AppCatalogEntry {
  std::string name;
  double on_premise_price = 0.0;      // one-off license
  double online_monthly_price = 0.0;  // per user per month
  std::vector<ServiceRequirement> services;

  friend bool operator==(const AppCatalogEntry&, const AppCatalogEntry&) = default;
};

/// Microsoft Dynamics CRM product list used by the builtin experiments. The
/// server edition needs one large VM and two small ones; every CAL edition
/// runs as a single small service.
inline std::vector<AppCatalogEntry> builtin_app_catalog() {
  const ServiceRequirement small{1, 2.0, 4.0, "linux"};
  const ServiceRequirement large{2, 10.0, 32.0, "linux"};
  return {
      {"CRM Server 2013", 4922.0, 150.0, {large, small, small}},
      {"CRM Professional User CAL", 983.0, 65.0, {small}},
      {"CRM Professional Device CAL", 787.0, 65.0, {small}},
      {"CRM Basic User CAL", 342.0, 30.0, {small}},
      {"CRM Basic Device CAL", 236.0, 30.0, {small}},
      {"CRM Essential CAL", 79.0, 15.0, {small}},
  };
}

/// Application id of one license model of a catalog product.
inline std::string catalog_app_id(const AppCatalogEntry& entry, PaymentFlow flow) {
  return entry.name + (flow == PaymentFlow::Single ? " (on-premise)" : " (online)");
}

/// Materializes a hostable application for one license model. A single
/// payment buys the on-premise license (single tenant); recurring payment
/// rents the online edition (multi-tenant).
inline Application make_application(const AppCatalogEntry& entry, PaymentFlow flow) {
  Application app;
  app.app_id = catalog_app_id(entry, flow);
  app.num_services = static_cast<int>(entry.services.size());
  app.services = entry.services;
  app.max_tenants = flow == PaymentFlow::Single ? 1 : 10;
  app.initial_price =
      flow == PaymentFlow::Single ? entry.on_premise_price : entry.online_monthly_price;
  return app;
}

/// Every license-model variant of the builtin catalog; the application list
/// every generated provider hosts.
inline std::vector<Application> builtin_applications() {
  std::vector<Application> apps;
  for (const auto& entry : builtin_app_catalog()) {
    apps.push_back(make_application(entry, PaymentFlow::Single));
    apps.push_back(make_application(entry, PaymentFlow::Recurring));
  }
  return apps;
}

}  // namespace dpg
