#include "smg/analysis.hpp"
#include "smg/format.hpp"
#include "smg/objectives.hpp"
#include "smg/probabilistic.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace smg;
using namespace smg::testing;

namespace {

VertexSet vs(const Game& g, std::initializer_list<const char*> names) {
  VertexSet s = g.empty_vertices();
  for (const char* n : names)
    s.set(g.vertex(n));
  return s;
}

Game random_mixed_game(Rng& rng, int players, int vertices) {
  Game g = random_parity_game(rng, players, vertices, 3);
  for (auto& o : g.objectives) {
    o = random_objective(rng, g.num_colours());
    o.resize(g.num_colours());
  }
  return g;
}

// The same game with vertices listed in a different order.
Game permuted(const Game& g, const std::vector<VertexId>& order) {
  Game h;
  h.players = g.players;
  for (VertexId v : order)
    h.add_vertex(g.vertex_names[v], g.owner[v], g.colour_names[g.colour[v]]);
  for (VertexId v : order)
    for (const auto& e : g.succ[v])
      h.add_edge(h.vertex(g.vertex_names[v]), h.vertex(g.vertex_names[e.to]), e.prob);
  for (const auto& o : g.objectives) {
    Objective p = o;
    std::vector<int> prio(h.num_colours());
    for (ColourId c = 0; c < g.num_colours(); ++c)
      prio[h.colour_id(g.colour_names[c])] = o.priority[c];
    p.priority = prio;
    h.objectives.push_back(p);
  }
  h.seal();
  return h;
}

VertexSet map_back(const Game& h, const Game& g, const VertexSet& s) {
  VertexSet out = g.empty_vertices();
  for (auto v = s.find_first(); v != VertexSet::npos; v = s.find_next(v))
    out.set(g.vertex(h.vertex_names[v]));
  return out;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("strongly connected controlled game is its own maximal end component") {
    Game g = parse_game(
        "players 2\nvertex a player=0\nvertex b player=1\nvertex c player=0\n"
        "edge a b\nedge b c\nedge c a\nedge a c\nobjective 0 buchi a\nobjective 1 buchi b\n");
    auto m = maximal_end_components(g, g.all_vertices());
    REQUIRE(m.members.size() == 1);
    CHECK(m.members[0] == g.all_vertices());
  }

  TEST_CASE("self-loops and two-cycles") {
    Game one = parse_game("players 1\nvertex a player=0\nedge a a\nobjective 0 buchi a\n");
    auto b = all_end_components_brute(one, one.all_vertices());
    REQUIRE(b.members.size() == 1);
    CHECK(b.members[0] == one.all_vertices());

    Game two = parse_game(
        "players 1\nvertex v player=0\nvertex w player=0\nedge v w\nedge w v\nedge w w\nobjective 0 buchi v\n");
    auto e = all_end_components_brute(two, two.all_vertices());
    CHECK(e.members.size() == 2);
    CHECK(std::count(e.members.begin(), e.members.end(), two.all_vertices()) == 1);
    CHECK(std::count(e.members.begin(), e.members.end(), vs(two, {"w"})) == 1);
  }

  TEST_CASE("the terminal DAG decomposes into terminal singletons") {
    Game g = fixture("no-pure-nash");
    auto m = maximal_end_components(g, g.all_vertices());
    auto b = all_end_components_brute(g, g.all_vertices());
    CHECK(m.members == b.members);
    std::size_t terminals = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      terminals += g.is_terminal(v);
    CHECK(m.members.size() == terminals);
    for (const auto& u : m.members) {
      CHECK(u.count() == 1);
      CHECK(g.is_terminal(static_cast<VertexId>(u.find_first())));
    }
  }

  TEST_CASE("stochastic leaks break end components") {
    Game g = parse_game(
        "players 1\nvertex a player=0\nvertex s stochastic\nvertex t player=0\n"
        "edge a s\nedge s a p=1/2\nedge s t p=1/2\nedge t t\nedge t a\nobjective 0 buchi a\n");
    CHECK(is_end_component(g, g.all_vertices()));
    CHECK_FALSE(is_end_component(g, vs(g, {"a", "s"})));
    CHECK(is_end_component(g, vs(g, {"t"})));
  }

  TEST_CASE("brute force respects its guard") {
    Rng rng(3);
    Game g = random_parity_game(rng, 1, 12, 2);
    CHECK_THROWS_AS(all_end_components_brute(g, g.all_vertices(), 10), Error);
  }

  TEST_CASE("maximal end components agree with brute force on random games") {
    Rng rng(5);
    for (int round = 0; round < 200; ++round) {
      Game g = random_parity_game(rng, 2, rng.between(1, 10), 2);
      VertexSet s = g.all_vertices();
      if (round % 3 == 0)
        for (VertexId v = 0; v < g.num_vertices(); ++v)
          if (rng.below(4) == 0)
            s.reset(v);
      auto m = maximal_end_components(g, s);
      auto b = all_end_components_brute(g, s);
      VertexSet seen = g.empty_vertices();
      for (const auto& u : m.members) {
        CHECK(is_end_component(g, u));
        CHECK(u.is_subset_of(s));
        CHECK_FALSE(u.intersects(seen));
        seen |= u;
        CHECK(std::count(b.members.begin(), b.members.end(), u) == 1);
        // Adding any other vertex of s breaks the end-component property.
        for (auto v = s.find_first(); v != VertexSet::npos; v = s.find_next(v))
          if (!u.test(v)) {
            VertexSet bigger = u;
            bigger.set(v);
            bool contained = false;
            for (const auto& w : b.members)
              contained |= bigger.is_subset_of(w);
            CHECK_FALSE(contained);
          }
      }
      CHECK(m.all == seen);
      for (const auto& u : b.members) {
        CHECK(is_end_component(g, u));
        bool inside = false;
        for (const auto& w : m.members)
          inside |= u.is_subset_of(w);
        CHECK(inside);
      }
    }
  }

  TEST_CASE("bottom components of induced chains are end components") {
    Rng rng(9);
    for (int round = 0; round < 100; ++round) {
      Game g = random_parity_game(rng, 2, rng.between(1, 9), 2);
      Positional p;
      p.choice.resize(g.num_vertices());
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (!g.is_stochastic(v))
          p.choice[v] = g.succ[v][rng.below(static_cast<int>(g.succ[v].size()))].to;
      MarkovChain c = induced_chain(g, p);
      for (const auto& bottom : bottom_sccs(c)) {
        VertexSet u = g.empty_vertices();
        for (auto s : bottom)
          u.set(c.state[s].second);
        CHECK(is_end_component(g, u));
      }
    }
  }

  TEST_CASE("FindEC examples") {
    Game g = parse_game(
        "players 2\nvertex a player=0\nvertex b player=1\nedge a b\nedge b a\n"
        "objective 0 parity a:0 b:1\nobjective 1 parity a:1 b:3\n");
    CHECK(find_ec_parity(g, {1, 0}) == g.all_vertices());
    CHECK(find_ec_parity(g, {0, 0}).none());
    CHECK(find_ec_parity(g, {0, 1}).none());

    Game nested = parse_game(
        "players 1\nvertex a player=0\nvertex b player=0\nedge a b\nedge b a\nedge b b\n"
        "objective 0 parity a:1 b:2\n");
    CHECK(find_ec_parity(nested, {1}) == vs(nested, {"b"}));
    CHECK(find_ec_parity(nested, {0}) == nested.all_vertices());

    Game buchi = parse_game("players 1\nvertex a player=0\nedge a a\nobjective 0 buchi a\n");
    CHECK_THROWS_AS(find_ec_parity(buchi, {1}), Error);
    CHECK_THROWS_AS(find_ec_parity(g, {1}), Error);
  }

  TEST_CASE("FindEC equals the brute-force union on random parity games") {
    Rng rng(1);
    for (int round = 0; round < 300; ++round) {
      int players = rng.between(1, 3);
      Game g = random_parity_game(rng, players, rng.between(1, 10), 4);
      for (const auto& x : all_binary(players)) {
        VertexSet t = find_ec_parity(g, x);
        CHECK(t == union_ecs_with_payoff_brute(g, x, g.all_vertices()));
        CHECK(t == union_ecs_with_payoff(g, x, g.all_vertices()));
      }
    }
  }

  TEST_CASE("FindEC does not depend on vertex order") {
    Rng rng(2);
    for (int round = 0; round < 50; ++round) {
      Game g = random_parity_game(rng, 2, rng.between(2, 9), 4);
      std::vector<VertexId> order(g.num_vertices());
      for (VertexId v = 0; v < order.size(); ++v)
        order[v] = v;
      std::shuffle(order.begin(), order.end(), rng.engine);
      Game h = permuted(g, order);
      for (const auto& x : all_binary(2))
        CHECK(map_back(h, g, find_ec_parity(h, x)) == find_ec_parity(g, x));
    }
  }

  TEST_CASE("union of end components with a payoff") {
    Game g = parse_game(
        "players 2\nvertex a player=0\nvertex b player=0\nvertex c player=0\n"
        "edge a b\nedge b a\nedge a c\nedge c c\nobjective 0 muller {a b}\nobjective 1 muller {c}\n");
    CHECK(union_ecs_with_payoff(g, {1, 0}, g.all_vertices()) == vs(g, {"a", "b"}));
    CHECK(union_ecs_with_payoff(g, {0, 1}, g.all_vertices()) == vs(g, {"c"}));
    CHECK(union_ecs_with_payoff(g, {1, 1}, g.all_vertices()).none());
    CHECK(union_ecs_with_payoff(g, {1, 0}, g.empty_vertices()).none());
    CHECK_THROWS_AS(union_ecs_with_payoff(g, {1}, g.all_vertices()), Error);
  }

  TEST_CASE("union of end components agrees with brute force for every objective kind") {
    Rng rng(4);
    for (int round = 0; round < 300; ++round) {
      int players = rng.between(1, 3);
      Game g = random_mixed_game(rng, players, rng.between(1, 8));
      VertexSet s = g.all_vertices();
      if (round % 2)
        s.reset(static_cast<std::size_t>(rng.below(static_cast<int>(g.num_vertices()))));
      for (const auto& x : all_binary(players))
        CHECK(union_ecs_with_payoff(g, x, s) == union_ecs_with_payoff_brute(g, x, s));
    }
  }
}
