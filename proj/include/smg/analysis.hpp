#pragma once

#include "smg/arena.hpp"

#include <vector>

namespace smg {

constexpr std::size_t kDefaultBruteGuard = 20;

struct EndComponentSet {
  std::vector<VertexSet> members;
  VertexSet all;  // union of the members
};

/// SCCs of the graph of g restricted to `within`, sinks first.
std::vector<VertexSet> strongly_connected_components(const Game& g, const VertexSet& within);
bool is_strongly_connected(const Game& g, const VertexSet& u);
bool is_end_component(const Game& g, const VertexSet& u);

/// The end components maximal inside s, ordered by smallest vertex.
EndComponentSet maximal_end_components(const Game& g, const VertexSet& s);
/// Every end component inside s, by subset enumeration (|s| <= guard).
EndComponentSet all_end_components_brute(const Game& g, const VertexSet& s,
                                         std::size_t guard = kDefaultBruteGuard);

/// Union of the end components of g with payoff x; all objectives parity.
VertexSet find_ec_parity(const Game& g, const std::vector<int>& x);
/// Same recursion started from an arbitrary vertex set.
VertexSet find_ec_parity(const Game& g, const std::vector<int>& x, const VertexSet& s);

/// Union of all end components inside s whose payoff is x.
VertexSet union_ecs_with_payoff(const Game& g, const std::vector<int>& x, const VertexSet& s,
                                std::size_t guard = kDefaultBruteGuard);

/// Brute-force reference for union_ecs_with_payoff.
VertexSet union_ecs_with_payoff_brute(const Game& g, const std::vector<int>& x, const VertexSet& s,
                                      std::size_t guard = kDefaultBruteGuard);

}  // namespace smg
