#pragma once

#include "smg/arena.hpp"
#include "smg/probabilistic.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace smg {

constexpr std::uint64_t kDefaultStrategyGuard = 10'000'000;

using PositionalChoice = std::vector<std::optional<VertexId>>;

struct ValueTable {
  std::vector<Rational> value;              // player 0's value at every vertex
  std::optional<std::vector<Rational>> lower;  // max over player 0 of the min
  std::optional<std::vector<Rational>> upper;  // min over player 1 of the max
  std::optional<PositionalChoice> sigma;    // globally optimal for player 0
  std::optional<PositionalChoice> tau;      // globally optimal for player 1
};

/// Player i against the coalition of everybody else, with complementary objectives.
Game coalition_game(const Game& g, int i);

/// Values of a two-player zero-sum game (objectives[1] is the complement of
/// objectives[0]). Throws TooLarge if a strategy space exceeds the guard.
ValueTable s2g_values(const Game& g, std::uint64_t guard = kDefaultStrategyGuard);

/// W_i: vertices from which player i has positive value in g.
VertexSet value_positive_set(const Game& g, int i, std::uint64_t guard = kDefaultStrategyGuard);

/// Vertices from which player 0 of a two-player game visits f infinitely
/// often with probability one.
VertexSet almost_sure_buchi(const Game& g, const VertexSet& f);

/// Number of positional strategies of `player` (saturating at UINT64_MAX).
std::uint64_t positional_strategy_count(const Game& g, int player);

/// Calls f(choice) for every positional strategy of `player`, in
/// lexicographic order of successor indices (last vertex varies fastest).
/// Choices of other vertices are left empty.
template <class F>
void for_each_positional(const Game& g, int player, F&& f) {
  std::vector<VertexId> owned;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (g.owner[v] == player)
      owned.push_back(v);
  std::vector<std::size_t> idx(owned.size(), 0);
  PositionalChoice choice(g.num_vertices());
  for (std::size_t k = 0; k < owned.size(); ++k)
    choice[owned[k]] = g.succ[owned[k]][0].to;
  while (true) {
    f(static_cast<const PositionalChoice&>(choice));
    std::size_t k = owned.size();
    while (k > 0) {
      --k;
      VertexId v = owned[k];
      if (++idx[k] < g.succ[v].size()) {
        choice[v] = g.succ[v][idx[k]].to;
        break;
      }
      idx[k] = 0;
      choice[v] = g.succ[v][0].to;
      if (k == 0)
        return;
    }
    if (owned.empty())
      return;
  }
}

}  // namespace smg
