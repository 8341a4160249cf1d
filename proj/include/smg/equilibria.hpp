#pragma once

#include "smg/arena.hpp"
#include "smg/probabilistic.hpp"
#include "smg/zero_sum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smg {

struct EquilibriumVerdict {
  std::vector<Rational> payoff;         // z
  std::vector<Rational> best_response;  // r
  bool is_nash = false;
  std::optional<int> violating_player;  // smallest i with r_i > z_i
  bool within_bounds = true;            // x <= z <= y
};

/// Empty x or y means no bound on that side.
EquilibriumVerdict verify_nash(const Game& g, const StrategyProfile& p, const std::vector<Rational>& x = {},
                               const std::vector<Rational>& y = {});
EquilibriumVerdict verify_stationary_nash(const Game& g, const Stationary& p, const std::vector<Rational>& x = {},
                                          const std::vector<Rational>& y = {});

struct PosNeResult {
  std::optional<Positional> profile;
  std::optional<EquilibriumVerdict> verdict;
  std::uint64_t candidates = 0;  // complete on-path assignments examined
};

/// Searches the positional profiles for a Nash equilibrium with x <= z <= y.
PosNeResult decide_posne(const Game& g, const std::vector<Rational>& x, const std::vector<Rational>& y,
                         std::uint64_t guard = kDefaultStrategyGuard);

/// Every positional Nash profile of g (all controlled vertices assigned), in
/// lexicographic order.
std::vector<std::pair<Positional, EquilibriumVerdict>> positional_nash_profiles(
    const Game& g, std::uint64_t guard = kDefaultStrategyGuard);

struct StrQualInstance {
  std::vector<int> x;
  VertexSet z;  // vertices of value 0 for every player i with x_i = 0
  VertexSet t;  // union of the end components inside z with payoff x
  Mdp gx;       // all players merged, restricted to z; gx.origin maps back to g
};

struct StrQualResult {
  bool answer = false;
  StrQualInstance instance;
  PositionalChoice witness;  // indexed by vertices of g; empty outside z
};

StrQualResult decide_strqualne(const Game& g, const std::vector<int>& x, std::uint64_t guard = kDefaultStrategyGuard);

bool check_favourable(const Game& g, const Positional& base, std::uint64_t guard = kDefaultStrategyGuard);

/// Follows base and switches to the coalition's optimal counter-strategy
/// against the first player to deviate. Throws NotFavourable.
FiniteState construct_threat_equilibrium(const Game& g, const Positional& base,
                                         std::uint64_t guard = kDefaultStrategyGuard);

struct StatNeQuery {
  std::vector<Rational> x, y;
  std::vector<std::pair<VertexId, VertexId>> support;
};

/// The support with every edge of g.
std::vector<std::pair<VertexId, VertexId>> full_support(const Game& g);

struct StatNeSets {
  std::vector<VertexSet> f, r, t;  // per player
};
StatNeSets statne_sets(const Game& g, const StatNeQuery& q);

/// SMT-LIB 2 (QF_NRA) sentence that is satisfiable iff g has a stationary
/// Nash equilibrium with the query's support and payoff in [x, y].
std::string emit_statne_formula(const Game& g, const StatNeQuery& q);

struct GpOptimum {
  bool exact = false;
  Rational x0;        // probability of staying at t1 and t2
  Rational payoff3;   // player 3's payoff from s1
  std::string constraint;
  Stationary profile;  // for the game gen_gp(p)
};

/// Optimal stationary profile of G(p); when sqrt(p) is irrational x0 is the
/// feasible rational within `precision` below the optimum.
GpOptimum gp_optimal_profile(const Rational& p, const Rational& precision = Rational(1, 1000000));

}  // namespace smg
