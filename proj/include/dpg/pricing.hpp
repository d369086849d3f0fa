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
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dpg/market.hpp"

namespace dpg {

/// Per-player, per-request pricing inputs. gamma lies in (0,1); alpha_sum and
/// beta are strictly positive; theta + infra_cost must be positive.
struct PricingContext {
  double gamma = 0.95;       // marketplace constant scaling the quadratic term
  double theta = 0.0;        // application initial price
  double infra_cost = 0.0;   // infrastructure cost of hosting this request
  double alpha_sum = 1.0;    // summed per-unit VM benefits over the assigned VMs
  double beta = 1.0;         // per-unit application benefit
  double willingness = 1.0;  // user budget cap
  ServiceLevel level = ServiceLevel::L4;

  friend bool operator==(const PricingContext&, const PricingContext&) = default;
};

/// duration * summed hourly cost of the assigned VMs.
inline double infrastructure_cost(const VmAssignment& assignment, double duration_hours) {
  if (duration_hours < 0.0)
    throw std::invalid_argument("infrastructure_cost: duration_hours must be non-negative");
  return duration_hours * assignment.total_hour_cost;
}

/// Required-over-provided resource ratio; values >= 1 permit performance
/// guarantees, values < 1 mark discount-eligible service.
inline double utilization(int required_units, int provided_units) {
  if (provided_units <= 0)
    throw std::invalid_argument("utilization: provided_units must be positive");
  if (required_units <= 0)
    throw std::invalid_argument("utilization: required_units must be positive");
  return static_cast<double>(required_units) / static_cast<double>(provided_units);
}

/// Price offer sqrt(w) * (1 + gamma*sqrt(w)) * (theta + c). Zero at w = 0 and
/// strictly increasing in w.
inline double bid_price(double omega, const PricingContext& ctx) {
  if (omega < 0.0) throw std::invalid_argument("bid_price: omega must be non-negative");
  const double root = std::sqrt(omega);
  return root * (1.0 + ctx.gamma * root) * (ctx.theta + ctx.infra_cost);
}

/// Provisioning cost w * (alpha_sum*c + beta*theta), linear through the origin.
inline double provisioning_cost(double omega, const PricingContext& ctx) {
  if (omega < 0.0) throw std::invalid_argument("provisioning_cost: omega must be non-negative");
  return omega * (ctx.alpha_sum * ctx.infra_cost + ctx.beta * ctx.theta);
}

/// The winner takes bid - cost; everyone else takes exactly zero.
inline double payoff(bool is_winner, double bid, double cost) {
  return is_winner ? bid - cost : 0.0;
}

/// Payoff a player would collect at omega if it won the request.
inline double winning_payoff(double omega, const PricingContext& ctx) {
  return bid_price(omega, ctx) - provisioning_cost(omega, ctx);
}

/// Grid points whose bid stays positive and within both the budget cap and
/// theta + c. May be empty, in which case the provider abstains.
inline std::vector<double> feasible_omegas(const std::vector<double>& grid,
                                           const PricingContext& ctx) {
  const double cap = std::min(ctx.willingness, ctx.theta + ctx.infra_cost);
  std::vector<double> feasible;
  for (double omega : grid) {
    const double bid = bid_price(omega, ctx);
    if (bid > 0.0 && bid <= cap) feasible.push_back(omega);
  }
  return feasible;
}

enum class OmegaStarVariant { Corrected, AsPrinted };

/// Interior stationary point of the winning payoff as a function of omega.
///
/// With stake = theta + c and unit_cost = alpha_sum*c + beta*theta, the
/// Corrected variant returns (stake / (2*unit_cost - 2*gamma*stake))^2, the
/// exact zero of d/dw [bid - cost]; AsPrinted keeps a single gamma term in the
/// denominator. Empty when the denominator is not positive: the winning
/// payoff is then increasing in omega and has no interior maximum.
inline std::optional<double> omega_star(const PricingContext& ctx, OmegaStarVariant variant) {
  const double stake = ctx.theta + ctx.infra_cost;
  const double unit_cost = ctx.alpha_sum * ctx.infra_cost + ctx.beta * ctx.theta;
  const double denom = variant == OmegaStarVariant::Corrected
                           ? 2.0 * unit_cost - 2.0 * ctx.gamma * stake
                           : 2.0 * unit_cost - ctx.gamma * stake;
  if (!(denom > 0.0)) return std::nullopt;
  const double root = stake / denom;
  return root * root;
}

}  // namespace dpg
