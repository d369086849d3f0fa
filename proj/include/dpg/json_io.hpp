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

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dpg/scenario.hpp"

namespace dpg {

inline void to_json(nlohmann::json& j, const PaymentFlow& flow) {
  j = flow == PaymentFlow::Single ? "single" : "recurring";
}

inline void from_json(const nlohmann::json& j, PaymentFlow& flow) {
  const std::string text = j.get<std::string>();
  if (text == "single")
    flow = PaymentFlow::Single;
  else if (text == "recurring")
    flow = PaymentFlow::Recurring;
  else
    throw std::invalid_argument("payment_flow must be \"single\" or \"recurring\", got \"" + text +
                                "\"");
}

inline void to_json(nlohmann::json& j, const VmType& vm) {
  j = nlohmann::json{{"size_label", vm.size_label}, {"vcpu", vm.vcpu},
                     {"memory_gb", vm.memory_gb},   {"storage_gb", vm.storage_gb},
                     {"host_os", vm.host_os},       {"hour_cost", vm.hour_cost}};
}

inline void from_json(const nlohmann::json& j, VmType& vm) {
  j.at("size_label").get_to(vm.size_label);
  j.at("vcpu").get_to(vm.vcpu);
  j.at("memory_gb").get_to(vm.memory_gb);
  j.at("storage_gb").get_to(vm.storage_gb);
  j.at("host_os").get_to(vm.host_os);
  j.at("hour_cost").get_to(vm.hour_cost);
}

inline void to_json(nlohmann::json& j, const ServiceRequirement& req) {
  j = nlohmann::json{{"min_vcpu", req.min_vcpu},
                     {"min_memory_gb", req.min_memory_gb},
                     {"min_storage_gb", req.min_storage_gb},
                     {"host_os", req.host_os}};
}

inline void from_json(const nlohmann::json& j, ServiceRequirement& req) {
  j.at("min_vcpu").get_to(req.min_vcpu);
  j.at("min_memory_gb").get_to(req.min_memory_gb);
  j.at("min_storage_gb").get_to(req.min_storage_gb);
  j.at("host_os").get_to(req.host_os);
}

inline void to_json(nlohmann::json& j, const Application& app) {
  j = nlohmann::json{{"app_id", app.app_id},
                     {"num_services", app.num_services},
                     {"services", app.services},
                     {"max_tenants", app.max_tenants},
                     {"initial_price", app.initial_price}};
}

inline void from_json(const nlohmann::json& j, Application& app) {
  j.at("app_id").get_to(app.app_id);
  j.at("num_services").get_to(app.num_services);
  j.at("services").get_to(app.services);
  j.at("max_tenants").get_to(app.max_tenants);
  j.at("initial_price").get_to(app.initial_price);
}

inline void to_json(nlohmann::json& j, const Request& request) {
  j = nlohmann::json{{"app_id", request.app_id},
                     {"willingness", request.willingness},
                     {"duration_hours", request.duration_hours},
                     {"payment_flow", request.payment_flow},
                     {"perf_required", request.perf_required}};
}

inline void from_json(const nlohmann::json& j, Request& request) {
  j.at("app_id").get_to(request.app_id);
  j.at("willingness").get_to(request.willingness);
  j.at("duration_hours").get_to(request.duration_hours);
  j.at("payment_flow").get_to(request.payment_flow);
  j.at("perf_required").get_to(request.perf_required);
}

inline void to_json(nlohmann::json& j, const VmInventoryEntry& entry) {
  j = nlohmann::json{{"vm_type", entry.vm_type}, {"count", entry.count}};
}

inline void from_json(const nlohmann::json& j, VmInventoryEntry& entry) {
  j.at("vm_type").get_to(entry.vm_type);
  j.at("count").get_to(entry.count);
}

inline void to_json(nlohmann::json& j, const Provider& provider) {
  j = nlohmann::json{{"provider_id", provider.provider_id},
                     {"vm_inventory", provider.vm_inventory},
                     {"applications", provider.applications},
                     {"vm_benefits", provider.vm_benefits},
                     {"app_benefits", provider.app_benefits}};
}

inline void from_json(const nlohmann::json& j, Provider& provider) {
  j.at("provider_id").get_to(provider.provider_id);
  j.at("vm_inventory").get_to(provider.vm_inventory);
  j.at("applications").get_to(provider.applications);
  j.at("vm_benefits").get_to(provider.vm_benefits);
  j.at("app_benefits").get_to(provider.app_benefits);
}

inline void to_json(nlohmann::json& j, const Scenario& scenario) {
  j = nlohmann::json{{"seed", scenario.seed},
                     {"gamma", scenario.gamma},
                     {"max_iterations", scenario.max_iterations},
                     {"providers", scenario.providers},
                     {"requests", scenario.requests}};
}

inline void from_json(const nlohmann::json& j, Scenario& scenario) {
  j.at("seed").get_to(scenario.seed);
  j.at("gamma").get_to(scenario.gamma);
  j.at("max_iterations").get_to(scenario.max_iterations);
  j.at("providers").get_to(scenario.providers);
  j.at("requests").get_to(scenario.requests);
}

/// Market definition document: VM offerings, applications and providers.
struct CatalogDocument {
  std::vector<VmType> vm_types;
  std::vector<Application> applications;
  std::vector<Provider> providers;

  friend bool operator==(const CatalogDocument&, const CatalogDocument&) = default;
};

inline void to_json(nlohmann::json& j, const CatalogDocument& doc) {
  j = nlohmann::json{{"vm_types", doc.vm_types},
                     {"applications", doc.applications},
                     {"providers", doc.providers}};
}

inline void from_json(const nlohmann::json& j, CatalogDocument& doc) {
  j.at("vm_types").get_to(doc.vm_types);
  j.at("applications").get_to(doc.applications);
  j.at("providers").get_to(doc.providers);
}

/// Parses a UTF-8 JSON file; parse errors carry line/column diagnostics.
inline nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return nlohmann::json::parse(in);
}

inline Scenario load_scenario(const std::string& path) {
  return parse_json_file(path).get<Scenario>();
}

inline std::string scenario_to_string(const Scenario& scenario) {
  return nlohmann::json(scenario).dump(2) + "\n";
}

inline void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << scenario_to_string(scenario);
  if (!out.good()) throw std::runtime_error("failed writing '" + path + "'");
}

inline CatalogDocument load_catalog_document(const std::string& path) {
  return parse_json_file(path).get<CatalogDocument>();
}

}  // namespace dpg
