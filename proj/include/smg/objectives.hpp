#pragma once

#include "smg/arena.hpp"
#include "smg/objective.hpp"

#include <vector>

namespace smg {

/// Whether an infinite play whose set of colours seen infinitely often is
/// `inf` satisfies `obj`. Reach is read in its terminal form: the play ends
/// in a terminal whose colour is in F.
bool wins_inf(const Objective& obj, const ColourSet& inf);

/// Payoff vector of an end component u.
std::vector<int> ec_payoff(const Game& g, const VertexSet& u);

/// All non-empty subsets of `colours` on which obj is won.
std::vector<ColourSet> to_muller(const Objective& obj, const ColourSet& colours);

/// The objective won exactly by the plays that lose obj; `used` restricts the
/// colours a Muller complement has to range over.
Objective complement(const Objective& obj, const ColourSet& used);

/// True if obj is a terminal-reach objective whose colours only label terminals.
bool is_terminal_reach(const Game& g, const Objective& obj);
/// Throws UnsupportedObjective unless every objective is prefix independent.
void require_prefix_independent(const Game& g);

struct LarProduct {
  Game game;                       // two players, parity objectives
  std::vector<VertexId> entry;     // product vertex for (v, initial record)
  std::vector<VertexId> base;      // original vertex of each product vertex
};

/// Latest-appearance-record product of a two-player game in which player 0
/// has objective objectives[0] (converted to Muller); player 1 gets the
/// complementary parity condition.
LarProduct muller_to_parity_game(const Game& g, std::size_t max_colours = 7);

}  // namespace smg
