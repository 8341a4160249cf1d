#pragma once

#include "smg/error.hpp"
#include "smg/objective.hpp"
#include "smg/rational.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace smg {

using VertexId = std::uint32_t;
using VertexSet = boost::dynamic_bitset<>;

constexpr int kStochastic = -1;

enum class Mode { Explicit, Ssmg };

struct Edge {
  VertexId to;
  std::optional<Rational> prob;  // empty for controlled transitions
};

// A finite stochastic multiplayer game. Vertices and colours are named by
// strings in the text format and addressed by dense indices everywhere else.
struct Game {
  std::string name = "game";
  Mode mode = Mode::Explicit;
  int players = 1;

  std::vector<std::string> vertex_names;
  std::vector<int> owner;  // player index or kStochastic
  std::vector<ColourId> colour;
  std::vector<std::vector<Edge>> succ;

  std::vector<std::string> colour_names;
  std::vector<Objective> objectives;
  std::optional<VertexId> initial;

  std::size_t num_vertices() const { return vertex_names.size(); }
  std::size_t num_colours() const { return colour_names.size(); }
  bool is_stochastic(VertexId v) const { return owner[v] == kStochastic; }
  bool is_terminal(VertexId v) const { return succ[v].size() == 1 && succ[v][0].to == v; }
  std::size_t out_degree(VertexId v) const { return succ[v].size(); }

  /// Adds a vertex; its colour defaults to a colour named like the vertex.
  VertexId add_vertex(const std::string& id, int owner_, const std::string& colour_name = "");
  void add_edge(VertexId from, VertexId to, std::optional<Rational> p = std::nullopt);
  /// Stochastic self-loop with probability one.
  VertexId add_terminal(const std::string& id);
  ColourId intern_colour(const std::string& c);

  std::optional<VertexId> find_vertex(const std::string& id) const;
  std::optional<ColourId> find_colour(const std::string& c) const;
  VertexId vertex(const std::string& id) const;  // throws InvalidVertex
  ColourId colour_id(const std::string& c) const;

  ColourSet empty_colours() const { return ColourSet(num_colours()); }
  ColourSet colours_of(const std::vector<std::string>& names) const;
  VertexSet empty_vertices() const { return VertexSet(num_vertices()); }
  VertexSet all_vertices() const { return ~VertexSet(num_vertices()); }
  /// χ(U).
  ColourSet colours_of(const VertexSet& u) const;
  /// Colours that label at least one vertex.
  ColourSet used_colours() const;

  /// Resizes every objective to the current colour count.
  void seal();

  /// Probability of the edge v -> w (0 if absent); v must be stochastic.
  Rational prob(VertexId v, VertexId w) const;
  bool has_edge(VertexId v, VertexId w) const;

 private:
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, ColourId> colour_index_;
};

struct Violation {
  std::string rule;
  std::string where;
  std::string detail;
};

std::vector<Violation> validate(const Game& g);
std::string to_string(const Violation& v);

bool is_subarena(const Game& g, const VertexSet& u);
/// G restricted to u: vertices of u in their original order, edges inside u.
/// Throws NotASubarena unless is_subarena(g, u).
Game restrict(const Game& g, const VertexSet& u);

/// A fragment with entry vertex 0 made of stochastic and terminal vertices
/// only, in which player i reaches a winning terminal with probability p[i].
/// Terminal objectives are given as Reach over the fragment's terminal colours.
Game realize_payoff_vector(const std::vector<Rational>& p, int players);

// Builds SSMG-mode games: terminals carry a payoff vector and the objectives
// are derived as terminal reachability when the game is finished.
class SsmgBuilder {
 public:
  SsmgBuilder(std::string name, int players);

  VertexId vertex(const std::string& id, int owner);
  VertexId stochastic(const std::string& id) { return vertex(id, kStochastic); }
  /// A terminal (or, for non-0/1 payoffs, a realised fragment) with entry `id`.
  VertexId terminal(const std::string& id, const std::vector<Rational>& payoff);
  /// Terminal won by exactly the listed players.
  VertexId terminal_won_by(const std::string& id, const std::vector<int>& winners);
  void edge(VertexId from, VertexId to) { g_.add_edge(from, to); }
  void edge(VertexId from, VertexId to, const Rational& p) { g_.add_edge(from, to, p); }
  void edge(const std::string& from, const std::string& to);
  void edge(const std::string& from, const std::string& to, const Rational& p);
  void init(VertexId v) { g_.initial = v; }
  void init(const std::string& id) { g_.initial = g_.vertex(id); }

  Game& raw() { return g_; }
  Game finish();

 private:
  Game g_;
  std::vector<std::vector<std::string>> wins_;  // per player, winning terminal colours
};

}  // namespace smg
