#pragma once

#include "smg/arena.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace smg {

using MemoryState = std::uint32_t;
using Distribution = std::vector<std::pair<VertexId, Rational>>;

struct MemoryStructure {
  std::size_t size = 1;
  std::vector<std::vector<MemoryState>> update;  // update[m][v]
  MemoryState initial = 0;
};

/// One successor per controlled vertex (empty for stochastic vertices).
struct Positional {
  std::vector<std::optional<VertexId>> choice;
};

struct Stationary {
  std::vector<Distribution> choice;
};

struct FiniteState {
  MemoryStructure memory;
  std::vector<std::vector<Distribution>> choice;  // choice[m][v]
};

using StrategyProfile = std::variant<Positional, Stationary, FiniteState>;

/// Checks the profile against g and brings it to finite-state form.
FiniteState to_finite_state(const Game& g, const StrategyProfile& p);

struct MarkovChain {
  std::vector<std::pair<MemoryState, VertexId>> state;  // state 0 is initial
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> rows;
  std::vector<ColourId> colour;
  std::size_t num_colours = 0;

  std::size_t size() const { return state.size(); }
};

MarkovChain induced_chain(const Game& g, const StrategyProfile& p);
/// Chain of a positional profile over the vertices reachable from `from`.
MarkovChain positional_chain(const Game& g, const std::vector<std::optional<VertexId>>& choice, VertexId from);

/// Bottom SCCs of the chain (states reachable from state 0 only).
std::vector<std::vector<std::uint32_t>> bottom_sccs(const MarkovChain& c);

/// Exact probability of reaching `target` from every state.
std::vector<Rational> reach_probabilities(const MarkovChain& c, const std::vector<char>& target);

std::vector<Rational> chain_payoffs(const MarkovChain& c, const std::vector<Objective>& objectives);
/// payoff[i][s]: probability that player i wins from state s.
std::vector<std::vector<Rational>> chain_payoffs_all(const MarkovChain& c, const std::vector<Objective>& objectives);

// A Markov decision process, stored as a one-player game: player 0 owns the
// freed player's states, everything else is stochastic.
struct Mdp {
  Game game;
  std::vector<std::pair<MemoryState, VertexId>> origin;
  VertexId initial = 0;
};

Mdp induced_mdp(const Game& g, const StrategyProfile& p, int player);
/// Positional profile with `player` freed, over all vertices of g (no pruning).
Mdp positional_mdp(const Game& g, const std::vector<std::optional<VertexId>>& choice, int player);

struct ReachResult {
  std::vector<Rational> value;
  std::vector<std::optional<VertexId>> strategy;  // an optimal positional choice per controlled state
};

std::vector<Rational> mdp_max_reach(const Mdp& m, const VertexSet& target);
ReachResult mdp_max_reach_with_strategy(const Mdp& m, const VertexSet& target);
std::vector<Rational> mdp_value_omega(const Mdp& m);
VertexSet mdp_almost_sure_reach(const Mdp& m, const VertexSet& target);

/// The almost-sure set together with a positional strategy that stays in it
/// and reaches the target with probability one from every member.
std::pair<VertexSet, std::vector<std::optional<VertexId>>> mdp_almost_sure_strategy(const Mdp& m,
                                                                                   const VertexSet& target);

}  // namespace smg
