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
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dpg/pricing.hpp"
#include "dpg/rng.hpp"

namespace dpg {

struct GameConfig {
  std::uint64_t seed = 0;
  int max_iterations = 10000;
};

/// One player's published offer; both fields absent when the player abstains.
struct ProfileEntry {
  int provider_id = 0;
  std::optional<double> omega;
  std::optional<double> bid;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

/// One entry per player, ascending provider_id.
using StrategyProfile = std::vector<ProfileEntry>;

/// One player of the pricing game. grid holds its feasible omegas in
/// ascending order; an empty grid means the player abstains. current_omega,
/// when present, is a member of grid.
struct PlayerState {
  int provider_id = 0;
  PricingContext ctx;
  std::vector<double> grid;
  std::optional<double> current_omega;
};

/// Snapshot taken after each single-player update.
struct IterationRecord {
  int iteration = 0;  // 1-based
  StrategyProfile profile;
  std::optional<int> winner_id;
  std::vector<std::optional<double>> costs;  // aligned with profile, present iff bidding
  std::vector<double> payoffs;               // aligned with profile

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct GameOutcome {
  std::optional<int> winner_id;
  StrategyProfile equilibrium_profile;
  std::vector<double> payoffs;  // aligned with equilibrium_profile
  std::vector<IterationRecord> trace;
  int iterations = 0;
  bool converged = false;

  friend bool operator==(const GameOutcome&, const GameOutcome&) = default;
};

/// Lowest bid wins; equal bids go to the smaller provider_id; empty when
/// nobody bids.
inline std::optional<int> determine_winner(const StrategyProfile& profile) {
  std::optional<int> winner;
  double best = 0.0;
  for (const auto& entry : profile) {
    if (!entry.bid) continue;
    if (!winner || *entry.bid < best || (*entry.bid == best && entry.provider_id < *winner)) {
      winner = entry.provider_id;
      best = *entry.bid;
    }
  }
  return winner;
}

namespace detail {

struct BidRef {
  bool present = false;
  double bid = 0.0;
  int provider_id = 0;
};

inline BidRef lowest_bid_excluding(const StrategyProfile& profile, int excluded_id) {
  BidRef lowest;
  for (const auto& entry : profile) {
    if (entry.provider_id == excluded_id || !entry.bid) continue;
    if (!lowest.present || *entry.bid < lowest.bid ||
        (*entry.bid == lowest.bid && entry.provider_id < lowest.provider_id)) {
      lowest = {true, *entry.bid, entry.provider_id};
    }
  }
  return lowest;
}

inline bool beats(double bid, int provider_id, const BidRef& rivals) {
  return !rivals.present || bid < rivals.bid ||
         (bid == rivals.bid && provider_id < rivals.provider_id);
}

/// Players whose every grid point loses money even when winning hold no bid:
/// abstention weakly dominates the whole grid for them.
inline void normalize_abstention(std::vector<PlayerState>& players) {
  for (auto& player : players) {
    if (player.grid.empty()) {
      player.current_omega.reset();
      continue;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (double omega : player.grid) best = std::max(best, winning_payoff(omega, player.ctx));
    if (best < 0.0) {
      player.grid.clear();
      player.current_omega.reset();
    }
  }
}

}  // namespace detail

/// Best strictly improving deviation for one player, all rivals held fixed.
///
/// Scans the player's grid and returns the omega with the highest
/// post-deviation payoff when that payoff strictly exceeds the current one;
/// equal payoffs keep the smaller omega. Empty when no grid point improves.
inline std::optional<double> unilateral_improvement(const PlayerState& player,
                                                    const StrategyProfile& profile) {
  const ProfileEntry* self = nullptr;
  for (const auto& entry : profile)
    if (entry.provider_id == player.provider_id) {
      self = &entry;
      break;
    }
  if (!self) throw std::invalid_argument("unilateral_improvement: player missing from profile");

  const detail::BidRef rivals = detail::lowest_bid_excluding(profile, player.provider_id);

  double current = 0.0;
  if (self->bid && detail::beats(*self->bid, player.provider_id, rivals))
    current = *self->bid - provisioning_cost(*self->omega, player.ctx);

  std::optional<double> best_omega;
  double best_payoff = current;
  for (double omega : player.grid) {
    const double bid = bid_price(omega, player.ctx);
    const double gained = detail::beats(bid, player.provider_id, rivals)
                              ? bid - provisioning_cost(omega, player.ctx)
                              : 0.0;
    if (gained > best_payoff) {
      best_payoff = gained;
      best_omega = omega;
    }
  }
  return best_omega;
}

/// True when no player has a strictly improving unilateral deviation.
inline bool is_nash(const std::vector<PlayerState>& players, const StrategyProfile& profile) {
  for (const auto& player : players)
    if (unilateral_improvement(player, profile)) return false;
  return true;
}

/// Profile induced by the players' current omegas, ascending provider_id.
inline StrategyProfile make_profile(const std::vector<PlayerState>& players) {
  StrategyProfile profile;
  profile.reserve(players.size());
  for (const auto& player : players) {
    ProfileEntry entry;
    entry.provider_id = player.provider_id;
    if (player.current_omega) {
      entry.omega = player.current_omega;
      entry.bid = bid_price(*player.current_omega, player.ctx);
    }
    profile.push_back(entry);
  }
  std::sort(profile.begin(), profile.end(),
            [](const ProfileEntry& a, const ProfileEntry& b) { return a.provider_id < b.provider_id; });
  return profile;
}

/// Iterated best-response dynamics to a Nash equilibrium.
///
/// Each iteration lets one player update, cycling through players in
/// ascending provider_id; the updating player adopts its best improving
/// omega and keeps the current one when none improves. Initial omegas are
/// drawn uniformly from each grid with config.seed. A full cycle without any
/// change means no player has an improving deviation, which is exactly the
/// equilibrium test and ends the run with converged = true; hitting
/// config.max_iterations first reports converged = false. Deterministic in
/// (players, config).
inline GameOutcome run_game(std::vector<PlayerState> players, const GameConfig& config) {
  if (players.empty()) throw std::invalid_argument("run_game: at least one player required");
  if (config.max_iterations < 1)
    throw std::invalid_argument("run_game: max_iterations must be >= 1");

  std::sort(players.begin(), players.end(),
            [](const PlayerState& a, const PlayerState& b) { return a.provider_id < b.provider_id; });
  detail::normalize_abstention(players);

  std::mt19937_64 engine(config.seed);
  for (auto& player : players)
    if (!player.grid.empty())
      player.current_omega = player.grid[draw_below(engine, player.grid.size())];

  StrategyProfile profile = make_profile(players);

  GameOutcome outcome;
  const std::size_t n = players.size();
  std::size_t quiet_streak = 0;
  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    const std::size_t i = static_cast<std::size_t>(iteration - 1) % n;
    bool changed = false;
    if (auto better = unilateral_improvement(players[i], profile)) {
      players[i].current_omega = *better;
      profile[i].omega = *better;
      profile[i].bid = bid_price(*better, players[i].ctx);
      changed = true;
    }
    quiet_streak = changed ? 0 : quiet_streak + 1;

    IterationRecord record;
    record.iteration = iteration;
    record.profile = profile;
    record.winner_id = determine_winner(profile);
    record.costs.resize(n);
    record.payoffs.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (profile[k].omega) record.costs[k] = provisioning_cost(*profile[k].omega, players[k].ctx);
      const bool won = record.winner_id && *record.winner_id == profile[k].provider_id;
      record.payoffs[k] = payoff(won, profile[k].bid.value_or(0.0), record.costs[k].value_or(0.0));
    }
    outcome.trace.push_back(std::move(record));

    if (quiet_streak >= n) {
      outcome.converged = true;
      break;
    }
  }

  outcome.iterations = static_cast<int>(outcome.trace.size());
  outcome.equilibrium_profile = profile;
  outcome.winner_id = determine_winner(profile);
  outcome.payoffs = outcome.trace.back().payoffs;
  return outcome;
}

/// First 1-based iteration from which the recorded profile never changes
/// again; 0 for an empty trace.
inline int convergence_iteration(const GameOutcome& outcome) {
  if (outcome.trace.empty()) return 0;
  const StrategyProfile& final_profile = outcome.trace.back().profile;
  int first = outcome.trace.back().iteration;
  for (auto it = outcome.trace.rbegin(); it != outcome.trace.rend(); ++it) {
    if (!(it->profile == final_profile)) break;
    first = it->iteration;
  }
  return first;
}

namespace detail {

/// Equilibrium test written directly against the deviation definition; kept
/// separate from unilateral_improvement so the enumeration stays an
/// independent check on the dynamics.
inline bool profile_is_nash(const std::vector<PlayerState>& players,
                            const StrategyProfile& profile) {
  // Lowest and second-lowest (bid, id) pairs over all bidding entries.
  BidRef lowest, second;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const auto& entry = profile[k];
    if (!entry.bid) continue;
    const BidRef ref{true, *entry.bid, entry.provider_id};
    auto before = [](const BidRef& a, const BidRef& b) {
      return !b.present || a.bid < b.bid || (a.bid == b.bid && a.provider_id < b.provider_id);
    };
    if (before(ref, lowest)) {
      second = lowest;
      lowest = ref;
    } else if (before(ref, second)) {
      second = ref;
    }
  }

  for (std::size_t k = 0; k < players.size(); ++k) {
    const auto& player = players[k];
    if (player.grid.empty()) continue;
    const BidRef rivals =
        (lowest.present && lowest.provider_id == player.provider_id) ? second : lowest;

    const auto& entry = profile[k];
    double current = 0.0;
    if (entry.bid && beats(*entry.bid, player.provider_id, rivals))
      current = *entry.bid - provisioning_cost(*entry.omega, player.ctx);

    for (double omega : player.grid) {
      const double bid = bid_price(omega, player.ctx);
      const double gained =
          beats(bid, player.provider_id, rivals) ? bid - provisioning_cost(omega, player.ctx) : 0.0;
      if (gained > current) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Exhaustively enumerates pure strategy profiles and returns the equilibria.
///
/// Strategy sets are the players' grids; a player with an empty grid
/// contributes the single pseudo-strategy "abstain". Profiles come back in
/// odometer order over players sorted by provider_id (last player fastest).
/// Throws std::length_error when the product of grid sizes exceeds
/// product_bound.
inline std::vector<StrategyProfile> enumerate_nash(std::vector<PlayerState> players,
                                                   std::size_t product_bound = 1000000) {
  std::sort(players.begin(), players.end(),
            [](const PlayerState& a, const PlayerState& b) { return a.provider_id < b.provider_id; });
  detail::normalize_abstention(players);

  std::size_t product = 1;
  for (const auto& player : players) {
    const std::size_t options = std::max<std::size_t>(1, player.grid.size());
    if (product > product_bound / options)
      throw std::length_error("enumerate_nash: strategy product exceeds bound");
    product *= options;
  }

  const std::size_t n = players.size();
  std::vector<std::size_t> index(n, 0);
  StrategyProfile profile(n);
  for (std::size_t k = 0; k < n; ++k) profile[k].provider_id = players[k].provider_id;

  auto apply_index = [&](std::size_t k) {
    if (players[k].grid.empty()) {
      profile[k].omega.reset();
      profile[k].bid.reset();
    } else {
      const double omega = players[k].grid[index[k]];
      profile[k].omega = omega;
      profile[k].bid = bid_price(omega, players[k].ctx);
    }
  };
  for (std::size_t k = 0; k < n; ++k) apply_index(k);

  std::vector<StrategyProfile> equilibria;
  for (std::size_t step = 0;; ++step) {
    if (detail::profile_is_nash(players, profile)) equilibria.push_back(profile);
    if (step + 1 == product) break;
    // Odometer increment, last player fastest.
    std::size_t k = n;
    while (k-- > 0) {
      if (players[k].grid.empty()) continue;
      if (++index[k] < players[k].grid.size()) {
        apply_index(k);
        break;
      }
      index[k] = 0;
      apply_index(k);
    }
  }
  return equilibria;
}

}  // namespace dpg
