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

#include <doctest.h>

#include <random>

#include "dpg/market.hpp"
#include "dpg/rng.hpp"
#include "test_helpers.hpp"

using namespace dpg;

TEST_CASE("service level classification") {
  CHECK(classify_service_level(1.2, false, true, PaymentFlow::Single) == ServiceLevel::L1);
  CHECK(classify_service_level(1.0, false, true, PaymentFlow::Recurring) == ServiceLevel::L2);
  CHECK(classify_service_level(0.5, true, false, PaymentFlow::Recurring) == ServiceLevel::L3);
  // Below full utilization a performance request cannot be honored; the tuple
  // falls through to the discounted single-payment level.
  CHECK(classify_service_level(0.5, true, true, PaymentFlow::Single) == ServiceLevel::L4);

  CHECK_THROWS_AS(classify_service_level(0.0, false, false, PaymentFlow::Single),
                  std::invalid_argument);
}

TEST_CASE("classification never grants performance below full utilization") {
  for (double rho : {0.01, 0.25, 0.5, 0.999}) {
    for (bool mt : {false, true}) {
      for (bool perf : {false, true}) {
        for (PaymentFlow flow : {PaymentFlow::Single, PaymentFlow::Recurring}) {
          const ServiceLevel level = classify_service_level(rho, mt, perf, flow);
          // L1 and L2 are the only levels with guaranteed performance.
          CHECK(level != ServiceLevel::L1);
          CHECK(level != ServiceLevel::L2);
        }
      }
    }
  }
}

TEST_CASE("omega grids match the level table exactly") {
  const auto l1 = omega_grid(ServiceLevel::L1);
  const auto l2 = omega_grid(ServiceLevel::L2);
  const auto l3 = omega_grid(ServiceLevel::L3);
  const auto l4 = omega_grid(ServiceLevel::L4);

  CHECK(l1.size() == 7);
  CHECK(l2.size() == 6);
  CHECK(l3.size() == 9);
  CHECK(l4.size() == 5);

  // Independent arithmetic-progression route, exact integer ratios.
  for (std::size_t k = 0; k < l1.size(); ++k)
    CHECK(std::abs(l1[k] - (10.0 + 5.0 * k) / 100.0) <= 1e-12);
  for (std::size_t k = 0; k < l2.size(); ++k)
    CHECK(std::abs(l2[k] - (4.0 + 1.0 * k) / 100.0) <= 1e-12);
  for (std::size_t k = 0; k < l3.size(); ++k)
    CHECK(std::abs(l3[k] - (6.0 + 3.0 * k) / 1000.0) <= 1e-12);
  for (std::size_t k = 0; k < l4.size(); ++k)
    CHECK(std::abs(l4[k] - (1.0 + 1.0 * k) / 1000.0) <= 1e-12);

  CHECK(l4 == std::vector<double>{0.001, 0.002, 0.003, 0.004, 0.005});
  CHECK(l1.front() == 0.10);
  CHECK(l1.back() == 0.40);

  for (const auto& grid : {l1, l2, l3, l4})
    for (std::size_t k = 1; k < grid.size(); ++k) CHECK(grid[k - 1] < grid[k]);
}

TEST_CASE("select_vms picks the cheapest satisfying type") {
  const Provider provider = dpg_test::catalog_provider();

  Application app;
  app.app_id = "probe";
  app.num_services = 1;

  SUBCASE("small service lands on t2.small") {
    app.services = {{1, 2.0, 4.0, "linux"}};
    const auto assignment = select_vms(app, provider);
    REQUIRE(assignment);
    CHECK(assignment->vms.front().size_label == "t2.small");
    CHECK(assignment->total_hour_cost == 0.026);
  }

  SUBCASE("memory-heavy service needs R3.large") {
    app.services = {{2, 10.0, 32.0, "linux"}};
    const auto assignment = select_vms(app, provider);
    REQUIRE(assignment);
    CHECK(assignment->vms.front().size_label == "R3.large");
    CHECK(assignment->total_hour_cost == 0.175);
  }

  SUBCASE("empty inventory aborts") {
    Provider empty;
    empty.provider_id = 1;
    app.services = {{1, 2.0, 4.0, "linux"}};
    CHECK_FALSE(select_vms(app, empty));
  }

  SUBCASE("host_os must match exactly") {
    app.services = {{1, 2.0, 4.0, "windows"}};
    CHECK_FALSE(select_vms(app, provider));
  }
}

TEST_CASE("select_vms is deterministic") {
  const Provider provider = dpg_test::catalog_provider();
  Application app;
  app.app_id = "probe";
  app.num_services = 3;
  app.services = {{2, 10.0, 32.0, "linux"}, {1, 2.0, 4.0, "linux"}, {2, 4.0, 4.0, "linux"}};
  const auto a = select_vms(app, provider);
  const auto b = select_vms(app, provider);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*a == *b);
}

TEST_CASE("select_vms stays optimal when unit counts contend") {
  // Service 0 accepts cheap, mid or pricey; service 1 needs two cores and
  // accepts only cheap or pricey. There is one cheap unit: taking it for
  // service 0 in service order would push service 1 onto the pricey type.
  Provider provider;
  provider.provider_id = 0;
  provider.vm_inventory = {
      {{"cheap", 2, 8.0, 32.0, "linux", 0.01}, 1},
      {{"mid", 1, 16.0, 64.0, "linux", 0.05}, 1},
      {{"pricey", 2, 8.0, 32.0, "linux", 1.00}, 1},
  };

  Application app;
  app.app_id = "contended";
  app.num_services = 2;
  app.services = {{1, 8.0, 32.0, "linux"}, {2, 8.0, 32.0, "linux"}};

  const auto assignment = select_vms(app, provider);
  REQUIRE(assignment);
  CHECK(dpg_test::money_eq(assignment->total_hour_cost, 0.06));
  CHECK(assignment->vms[0].size_label == "mid");
  CHECK(assignment->vms[1].size_label == "cheap");
}

TEST_CASE("select_vms minimality against exhaustive search") {
  std::mt19937_64 engine(20260811ULL);
  const std::vector<std::string> labels = {"a", "b", "c", "d", "e", "f"};

  for (int instance = 0; instance < 300; ++instance) {
    Provider provider;
    provider.provider_id = 0;
    const std::size_t n_types = 1 + draw_below(engine, 6);
    for (std::size_t t = 0; t < n_types; ++t) {
      VmType vm;
      vm.size_label = labels[t];
      vm.vcpu = 1 + static_cast<int>(draw_below(engine, 4));
      vm.memory_gb = 1.0 + static_cast<double>(draw_below(engine, 16));
      vm.storage_gb = 4.0 + static_cast<double>(4 * draw_below(engine, 16));
      vm.host_os = "linux";
      vm.hour_cost = 0.01 * static_cast<double>(1 + draw_below(engine, 50));
      provider.vm_inventory.push_back({vm, 1 + static_cast<int>(draw_below(engine, 3))});
    }

    Application app;
    app.app_id = "random";
    const std::size_t n_services = 1 + draw_below(engine, 4);
    app.num_services = static_cast<int>(n_services);
    for (std::size_t s = 0; s < n_services; ++s) {
      ServiceRequirement req;
      req.min_vcpu = 1 + static_cast<int>(draw_below(engine, 4));
      req.min_memory_gb = 1.0 + static_cast<double>(draw_below(engine, 16));
      req.min_storage_gb = 4.0 + static_cast<double>(4 * draw_below(engine, 16));
      req.host_os = "linux";
      app.services.push_back(req);
    }

    const auto assignment = select_vms(app, provider);
    const auto oracle = dpg_test::brute_force_min_assignment_cost(app, provider);
    REQUIRE(assignment.has_value() == oracle.has_value());
    if (assignment) {
      CHECK(dpg_test::money_eq(assignment->total_hour_cost, *oracle));
      for (std::size_t s = 0; s < n_services; ++s)
        CHECK(satisfies(assignment->vms[s], app.services[s]));
    }
  }
}

TEST_CASE("request validation") {
  const std::set<std::string> known = {"crm", "erp"};

  Request request;
  request.app_id = "crm";
  request.willingness = 10.0;
  request.duration_hours = 5.0;
  CHECK(validate_request(request, known).empty());

  request.willingness = 0.0;
  CHECK(validate_request(request, known) ==
        std::vector<RequestError>{RequestError::NonPositiveWillingness});

  request.willingness = 10.0;
  request.app_id = "unknown";
  CHECK(validate_request(request, known) ==
        std::vector<RequestError>{RequestError::UnknownApplication});

  request.willingness = -1.0;
  request.duration_hours = 0.0;
  CHECK(validate_request(request, known) ==
        std::vector<RequestError>{RequestError::UnknownApplication,
                                  RequestError::NonPositiveWillingness,
                                  RequestError::NonPositiveDuration});
}
