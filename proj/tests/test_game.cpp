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

#include <algorithm>
#include <cmath>
#include <random>

#include "dpg/game.hpp"
#include "test_helpers.hpp"

using namespace dpg;

namespace {

PricingContext small_ctx(double alpha_sum = 2.0, double beta = 2.0) {
  PricingContext ctx;
  ctx.gamma = 0.95;
  ctx.theta = 65.0;
  ctx.infra_cost = 295.0;
  ctx.alpha_sum = alpha_sum;
  ctx.beta = beta;
  ctx.willingness = 360.0;
  ctx.level = ServiceLevel::L4;
  return ctx;
}

PlayerState make_player(int id, const PricingContext& ctx, ServiceLevel level) {
  PlayerState player;
  player.provider_id = id;
  player.ctx = ctx;
  player.ctx.level = level;
  player.grid = feasible_omegas(omega_grid(level), player.ctx);
  return player;
}

StrategyProfile profile_at(const std::vector<PlayerState>& players,
                           const std::vector<std::optional<double>>& omegas) {
  std::vector<PlayerState> positioned = players;
  for (std::size_t i = 0; i < positioned.size(); ++i) positioned[i].current_omega = omegas[i];
  return make_profile(positioned);
}

double grid_argmax(const PlayerState& player) {
  double best = player.grid.front();
  for (double omega : player.grid)
    if (winning_payoff(omega, player.ctx) > winning_payoff(best, player.ctx)) best = omega;
  return best;
}

}  // namespace

TEST_CASE("winner determination") {
  StrategyProfile profile = {{0, 0.1, 11.5}, {1, 0.1, 11.2}, {2, 0.1, 12.0}};
  CHECK(determine_winner(profile) == 1);

  StrategyProfile tie = {{0, 0.1, 11.2}, {1, 0.1, 11.2}};
  CHECK(determine_winner(tie) == 0);

  StrategyProfile silent = {{0, std::nullopt, std::nullopt}, {1, std::nullopt, std::nullopt}};
  CHECK_FALSE(determine_winner(silent));
}

TEST_CASE("unilateral improvement") {
  const auto p0 = make_player(0, small_ctx(), ServiceLevel::L4);
  const auto p1 = make_player(1, small_ctx(), ServiceLevel::L4);
  const std::vector<PlayerState> players = {p0, p1};

  SUBCASE("a losing player undercuts to its best winning point") {
    // p0 sits at 0.003, p1 at 0.004 and is losing; undercutting at 0.002
    // pays more than 0.001 because the winning payoff rises with omega here.
    const auto profile = profile_at(players, {0.003, 0.004});
    const auto improvement = unilateral_improvement(p1, profile);
    REQUIRE(improvement);
    CHECK(*improvement == 0.002);

    // Exhaustive scan over the grid agrees.
    double best_gain = 0.0;
    double best_omega = -1.0;
    for (double omega : p1.grid) {
      const double bid = bid_price(omega, p1.ctx);
      const bool wins = bid < *profile[0].bid;
      const double gain = wins ? winning_payoff(omega, p1.ctx) : 0.0;
      if (gain > best_gain) {
        best_gain = gain;
        best_omega = omega;
      }
    }
    CHECK(best_omega == *improvement);
  }

  SUBCASE("a winner at its best winning point stays") {
    // p0 alone in the market wins everywhere: its best point is the grid
    // argmax of the winning payoff.
    PlayerState solo = p0;
    solo.current_omega = grid_argmax(solo);
    const auto profile = make_profile({solo});
    CHECK_FALSE(unilateral_improvement(solo, profile));
  }

  SUBCASE("an empty grid leaves nothing to deviate to") {
    PlayerState mute = p1;
    mute.grid.clear();
    mute.current_omega.reset();
    const auto profile = profile_at({p0, mute}, {0.003, std::nullopt});
    CHECK_FALSE(unilateral_improvement(mute, profile));
  }

  CHECK_THROWS_AS(unilateral_improvement(p0, StrategyProfile{{1, 0.1, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("nash detection") {
  const auto p0 = make_player(0, small_ctx(), ServiceLevel::L4);
  const auto p1 = make_player(1, small_ctx(), ServiceLevel::L4);

  SUBCASE("single player at its argmax is an equilibrium") {
    PlayerState solo = p0;
    solo.current_omega = grid_argmax(solo);
    CHECK(is_nash({solo}, make_profile({solo})));
  }

  SUBCASE("a profitable undercut breaks equilibrium") {
    const auto profile = profile_at({p0, p1}, {0.003, 0.004});
    CHECK_FALSE(is_nash({p0, p1}, profile));
  }

  SUBCASE("everyone abstaining with a profitable entry is not an equilibrium") {
    const auto profile = profile_at({p0, p1}, {std::nullopt, std::nullopt});
    CHECK_FALSE(is_nash({p0, p1}, profile));
  }
}

TEST_CASE("run_game single player converges to the grid argmax") {
  const auto solo = make_player(0, small_ctx(), ServiceLevel::L4);
  // Interior optimum lies far above the level-4 grid, so the payoff is
  // increasing across the grid and the argmax is the top point.
  const auto outcome = run_game({solo}, GameConfig{7, 100});
  CHECK(outcome.converged);
  CHECK(outcome.iterations <= 2);
  CHECK(outcome.winner_id == 0);
  REQUIRE(outcome.equilibrium_profile[0].omega);
  CHECK(*outcome.equilibrium_profile[0].omega == grid_argmax(solo));
  CHECK(outcome.payoffs[0] ==
        winning_payoff(*outcome.equilibrium_profile[0].omega, solo.ctx));
}

TEST_CASE("run_game symmetric duopoly ends tied at the floor") {
  const auto p0 = make_player(0, small_ctx(), ServiceLevel::L4);
  const auto p1 = make_player(1, small_ctx(), ServiceLevel::L4);

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 17ULL, 99ULL}) {
    const auto outcome = run_game({p0, p1}, GameConfig{seed, 10000});
    REQUIRE(outcome.converged);
    CHECK(outcome.winner_id == 0);
    REQUIRE(outcome.equilibrium_profile[0].bid);
    REQUIRE(outcome.equilibrium_profile[1].bid);
    CHECK(*outcome.equilibrium_profile[0].bid == *outcome.equilibrium_profile[1].bid);

    // The exhaustive enumeration confirms the converged profile.
    const auto equilibria = enumerate_nash({p0, p1});
    CHECK(std::find(equilibria.begin(), equilibria.end(), outcome.equilibrium_profile) !=
          equilibria.end());
  }
}

TEST_CASE("run_game rejects bad arguments") {
  const auto solo = make_player(0, small_ctx(), ServiceLevel::L4);
  CHECK_THROWS_AS(run_game({}, GameConfig{1, 100}), std::invalid_argument);
  CHECK_THROWS_AS(run_game({solo}, GameConfig{1, 0}), std::invalid_argument);
}

TEST_CASE("run_game abstains players who can only lose money") {
  // Cost coefficients dwarf the stake: every grid point bids below cost.
  PricingContext ctx;
  ctx.gamma = 0.95;
  ctx.theta = 0.01;
  ctx.infra_cost = 1.0;
  ctx.alpha_sum = 30.0;
  ctx.beta = 1.0;
  ctx.willingness = 2.0;
  ctx.level = ServiceLevel::L1;

  PlayerState player;
  player.provider_id = 0;
  player.ctx = ctx;
  player.grid = omega_grid(ServiceLevel::L1);

  for (double omega : player.grid) REQUIRE(winning_payoff(omega, ctx) < 0.0);

  const auto outcome = run_game({player}, GameConfig{5, 100});
  CHECK(outcome.converged);
  CHECK_FALSE(outcome.winner_id);
  CHECK_FALSE(outcome.equilibrium_profile[0].bid);
  CHECK(outcome.payoffs[0] == 0.0);
}

TEST_CASE("enumerate_nash") {
  const auto p0 = make_player(0, small_ctx(), ServiceLevel::L4);
  const auto p1 = make_player(1, small_ctx(0.5, 0.7), ServiceLevel::L4);

  SUBCASE("two players over level-4 grids always admit an equilibrium") {
    const auto equilibria = enumerate_nash({p0, p1});
    CHECK(!equilibria.empty());
    for (const auto& profile : equilibria) CHECK(is_nash({p0, p1}, profile));
  }

  SUBCASE("single player equilibria are exactly the argmax points") {
    const auto equilibria = enumerate_nash({p0});
    const double best = winning_payoff(grid_argmax(p0), p0.ctx);
    std::vector<double> expected;
    for (double omega : p0.grid)
      if (winning_payoff(omega, p0.ctx) == best) expected.push_back(omega);
    REQUIRE(equilibria.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k)
      CHECK(equilibria[k][0].omega == expected[k]);
  }

  SUBCASE("the product guard trips") {
    CHECK_THROWS_AS(enumerate_nash({p0, p1}, 10), std::length_error);
  }
}

TEST_CASE("random instances: dynamics agree with the enumeration oracle") {
  std::mt19937_64 engine(20260811ULL);
  int converged_games = 0;

  for (int instance = 0; instance < 60; ++instance) {
    const int n = 2 + static_cast<int>(draw_below(engine, 3));
    std::vector<PlayerState> players;
    for (int i = 0; i < n; ++i) {
      PricingContext ctx;
      ctx.gamma = 0.95;
      ctx.theta = 10.0 + 200.0 * draw_unit(engine);
      ctx.infra_cost = 500.0 * draw_unit(engine);
      ctx.alpha_sum = 0.1 + 2.3 * draw_unit(engine);
      ctx.beta = 0.1 + 0.7 * draw_unit(engine);
      ctx.willingness = (ctx.theta + ctx.infra_cost) * (0.2 + 0.8 * draw_unit(engine));
      const auto level = static_cast<ServiceLevel>(draw_below(engine, 4));
      ctx.level = level;
      players.push_back(make_player(i, ctx, level));
    }

    const auto outcome = run_game(players, GameConfig{engine(), 10000});
    if (!outcome.converged) continue;
    ++converged_games;

    const auto equilibria = enumerate_nash(players);
    CHECK(std::find(equilibria.begin(), equilibria.end(), outcome.equilibrium_profile) !=
          equilibria.end());

    // Losers take exactly zero; a converged winner never loses money.
    for (std::size_t k = 0; k < outcome.payoffs.size(); ++k) {
      const bool is_winner = outcome.winner_id &&
                             *outcome.winner_id == outcome.equilibrium_profile[k].provider_id;
      if (is_winner)
        CHECK(outcome.payoffs[k] >= 0.0);
      else
        CHECK(outcome.payoffs[k] == 0.0);
    }
  }
  CHECK(converged_games >= 55);
}

TEST_CASE("runs are deterministic and traces stabilize after convergence") {
  const auto p0 = make_player(0, small_ctx(), ServiceLevel::L3);
  const auto p1 = make_player(1, small_ctx(1.0, 0.3), ServiceLevel::L3);
  const auto p2 = make_player(2, small_ctx(0.4, 0.9), ServiceLevel::L3);

  const auto a = run_game({p0, p1, p2}, GameConfig{123, 10000});
  const auto b = run_game({p0, p1, p2}, GameConfig{123, 10000});
  CHECK(a == b);

  REQUIRE(a.converged);
  const int settled = convergence_iteration(a);
  CHECK(settled >= 1);
  for (const auto& record : a.trace)
    if (record.iteration >= settled) CHECK(record.profile == a.trace.back().profile);

  // A different seed draws different initial omegas but still converges.
  const auto c = run_game({p0, p1, p2}, GameConfig{124, 10000});
  CHECK(c.converged);
}
