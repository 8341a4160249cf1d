#include "smg/arena.hpp"
#include "smg/format.hpp"
#include "smg/gadgets.hpp"
#include "smg/probabilistic.hpp"
#include "smg/two_counter.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace smg;
using namespace smg::testing;

namespace {

std::vector<std::string> rules(const Game& g) {
  std::vector<std::string> out;
  for (const auto& v : validate(g))
    out.push_back(v.rule);
  return out;
}

const char* kOptimalNoNash = R"(# two players, five vertices
game optimal
mode ssmg
players 2
vertex v0 player=0
vertex v1 player=1
terminal t00 payoff=0,0
terminal t10 payoff=1,0
terminal t11 payoff=1,1
edge v0 t00
edge v0 v1
edge v1 t10
edge v1 t11
init v0
)";

}  // namespace

TEST_SUITE("arena") {
  TEST_CASE("a stochastic self-loop is valid") {
    Game g = parse_game("players 1\nvertex a stochastic\nedge a a p=1\nobjective 0 buchi a\n");
    CHECK(validate(g).empty());
    CHECK(g.is_terminal(0));
  }

  TEST_CASE("probabilities must sum to one") {
    Game g = parse_game(
        "players 1\nvertex a stochastic\nvertex b stochastic\nvertex c stochastic\n"
        "edge a b p=1/2\nedge a c p=1/3\nedge b b p=1\nedge c c p=1\nobjective 0 buchi a\n");
    auto v = validate(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "ProbabilitySum");
    CHECK(v[0].where == "a");
    CHECK(v[0].detail == "5/6");
    CHECK(to_string(v[0]) == "ProbabilitySum(a, 5/6)");
  }

  TEST_CASE("a vertex without successors is a dead end") {
    Game g;
    g.players = 1;
    g.add_vertex("v", 0);
    g.objectives = {Objective::buchi(ColourSet(1))};
    g.seal();
    CHECK(rules(g) == std::vector<std::string>{"DeadEnd"});
  }

  TEST_CASE("targeted violations are each reported once") {
    Game g;
    g.players = 2;
    VertexId a = g.add_vertex("a", 0), b = g.add_vertex("b", kStochastic), c = g.add_vertex("c", 5);
    g.add_edge(a, b);
    g.add_edge(a, b);
    g.add_edge(b, a);
    g.add_edge(c, a, Rational(1));
    g.objectives = {Objective::buchi(ColourSet(3))};
    g.seal();
    auto r = rules(g);
    CHECK(std::count(r.begin(), r.end(), "DuplicateEdge") == 1);
    CHECK(std::count(r.begin(), r.end(), "MissingProbability") == 1);
    CHECK(std::count(r.begin(), r.end(), "InvalidOwner") == 1);
    CHECK(std::count(r.begin(), r.end(), "ControlledWithProbability") == 1);
    CHECK(std::count(r.begin(), r.end(), "ObjectiveCount") == 1);
  }

  TEST_CASE("parity objectives need a priority for every used colour") {
    Game g = parse_game("players 1\nvertex a player=0\nvertex b player=0\nedge a b\nedge b a\nobjective 0 parity a:0\n");
    CHECK(rules(g) == std::vector<std::string>{"MissingPriority"});
  }

  TEST_CASE("subarenas") {
    Game g = parse_game(kOptimalNoNash);
    CHECK(is_subarena(g, g.all_vertices()));
    VertexSet t(g.num_vertices());
    t.set(g.vertex("t10"));
    CHECK(is_subarena(g, t));
    VertexSet v1(g.num_vertices());
    v1.set(g.vertex("v1"));
    CHECK_FALSE(is_subarena(g, v1));
    CHECK_FALSE(is_subarena(g, g.empty_vertices()));
    CHECK_THROWS_AS(is_subarena(g, VertexSet(2)), Error);

    Game s = parse_game(
        "players 1\nvertex a stochastic\nvertex b player=0\nvertex c player=0\n"
        "edge a b p=1/2\nedge a c p=1/2\nedge b a\nedge c c\nobjective 0 buchi a\n");
    VertexSet ab(3);
    ab.set(0);
    ab.set(1);
    CHECK_FALSE(is_subarena(s, ab));
  }

  TEST_CASE("restrict") {
    Game g = parse_game(kOptimalNoNash);
    CHECK(serialize_game(restrict(g, g.all_vertices())) == serialize_game(g));
    VertexSet t(g.num_vertices());
    t.set(g.vertex("t11"));
    Game r = restrict(g, t);
    CHECK(r.num_vertices() == 1);
    CHECK(r.is_terminal(0));
    VertexSet v1(g.num_vertices());
    v1.set(g.vertex("v1"));
    CHECK_THROWS_AS(restrict(g, v1), Error);
  }

  TEST_CASE("restrictions of valid games to grown subarenas stay valid") {
    Rng rng(3);
    int checked = 0;
    for (int round = 0; round < 200; ++round) {
      Game g = random_parity_game(rng, 2, rng.between(2, 9), 3);
      // Grow a closed set from a random vertex, then trim to a subarena.
      VertexSet u(g.num_vertices());
      u.set(rng.below(static_cast<int>(g.num_vertices())));
      for (bool grew = true; grew;) {
        grew = false;
        for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v))
          for (const auto& e : g.succ[v])
            if (!u.test(e.to) && (g.is_stochastic(v) || rng.below(2) == 0 || e.to == g.succ[v].front().to)) {
              u.set(e.to);
              grew = true;
            }
      }
      if (!is_subarena(g, u))
        continue;
      ++checked;
      CHECK(validate(restrict(g, u)).empty());
    }
    CHECK(checked > 50);
  }

  TEST_CASE("payoff vectors are realised exactly") {
    Rng rng(5);
    std::vector<std::vector<Rational>> cases = {
        {1, 0}, {0, 0, 0}, {Rational(1, 2), Rational(1, 2)}, {Rational(1, 3), 1, Rational(2, 7), Rational(1, 3)}};
    for (int k = 0; k < 50; ++k) {
      std::vector<Rational> p;
      for (int i = rng.between(1, 4); i > 0; --i)
        p.push_back(ratio(rng.between(0, 12), 12));
      cases.push_back(p);
    }
    for (const auto& p : cases) {
      const int k = static_cast<int>(p.size());
      Game f = realize_payoff_vector(p, k);
      CHECK(validate(f).empty());
      for (VertexId v = 0; v < f.num_vertices(); ++v)
        CHECK((f.is_stochastic(v)));
      auto z = chain_payoffs(induced_chain(f, Positional{std::vector<std::optional<VertexId>>(f.num_vertices())}),
                             f.objectives);
      CHECK(z == p);
    }
    Game one = realize_payoff_vector({1, 0}, 2);
    CHECK(one.num_vertices() == 1);
    Game zero = realize_payoff_vector({0, 0, 0}, 3);
    CHECK(zero.num_vertices() == 1);
    CHECK(zero.objectives[0].set.none());
    CHECK_THROWS_AS(realize_payoff_vector({Rational(3, 2)}, 1), Error);
    CHECK_THROWS_AS(realize_payoff_vector({Rational(1, 2)}, 2), Error);
  }

  TEST_CASE("parsing") {
    Game one = parse_game("players 1\nvertex a stochastic\nedge a a p=1\nobjective 0 buchi a\n");
    CHECK(one.num_vertices() == 1);
    Game g = parse_game(kOptimalNoNash);
    CHECK(g.players == 2);
    CHECK(g.num_vertices() == 5);
    CHECK(g.mode == Mode::Ssmg);
    CHECK(g.initial == g.vertex("v0"));
    CHECK(g.objectives[1].kind == ObjectiveKind::Reach);

    Game e = parse_game(
        "players 2\nvertex a player=0 color=red\nvertex b player=1 color=blue\nedge a b\nedge b a\nedge a a\n"
        "objective 0 streett (red;blue) (blue;)\nobjective 1 muller {red} {red blue}\n");
    CHECK(e.colour_names[e.colour[0]] == "red");
    CHECK(e.objectives[0].pairs.size() == 2);
    CHECK(e.objectives[1].family.size() == 2);
  }

  TEST_CASE("syntax errors carry line and column") {
    try {
      parse_game("players 1\nvertex a stochastic\nedge a a p=x\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() > 1);
    }
    CHECK_THROWS_AS(parse_game("players 1\nfrobnicate a\n"), ParseError);
    CHECK_THROWS_AS(parse_game("vertex a stochastic\n"), ParseError);
  }

  TEST_CASE("serialisation round-trips generated games") {
    CnfFormula f{2, {{1, 2}, {-1}}};
    TwoCounterMachine m{{"q0"}, "q0", {{"q0", Instruction::Inc, 1, "q0"}}};
    std::vector<Game> games = {gen_sat_posne(f),
                               gen_sat_posne_qualitative(f),
                               gen_gp(Rational(1, 4)),
                               gen_sqrtsum({{1, 4}, 3}),
                               gen_sat_streett(f, SatVariant::Streett),
                               gen_sat_streett(f, SatVariant::Rabin),
                               gen_rabin_allwin(f),
                               gen_two_counter(m),
                               gen_halting_variant(m)};
    for (const auto& name : fixture_names())
      games.push_back(fixture(name));
    Rng rng(9);
    for (int k = 0; k < 20; ++k)
      games.push_back(random_parity_game(rng, 3, 6, 4));
    for (const auto& g : games) {
      CAPTURE(g.name);
      std::string text = serialize_game(g);
      Game back = parse_game(text);
      CHECK(serialize_game(back) == text);
      CHECK(back.num_vertices() == g.num_vertices());
      CHECK(back.players == g.players);
      for (int i = 0; i < g.players; ++i)
        CHECK(back.objectives[i].kind == g.objectives[i].kind);
    }
  }

  TEST_CASE("profiles round-trip through text") {
    Game g = fixture("no-stationary-nash");
    StrategyProfile fs = no_stationary_nash_profile(g);
    std::string text = serialize_profile(g, fs);
    CHECK(serialize_profile(g, parse_profile(g, text)) == text);
    Game h = fixture("no-pure-nash");
    StrategyProfile st = no_pure_nash_profile(h);
    CHECK(serialize_profile(h, parse_profile(h, serialize_profile(h, st))) == serialize_profile(h, st));
    CHECK_THROWS_AS(parse_profile(h, "profile positional\nchoose nowhere v1\n"), ParseError);
    CHECK_THROWS_AS(parse_profile(h, "choose v0 v1\n"), ParseError);
  }
}
