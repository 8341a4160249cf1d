// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include "smg/analysis.hpp"
#include "smg/equilibria.hpp"
#include "smg/format.hpp"
#include "smg/gadgets.hpp"
#include "smg/two_counter.hpp"
#include "smg/zero_sum.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace smg;
using namespace smg::testing;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok)
    throw Failure{what};
}

std::vector<Rational> R(std::initializer_list<Rational> v) { return v; }

// Zero-sum instances gathered from the random suites for the determinacy check.
std::vector<Game> zero_sum_pool;

void collect_coalition_games(const Game& g) {
  for (int i = 0; i < g.players; ++i)
    zero_sum_pool.push_back(coalition_game(g, i));
}

void optimal_without_nash() {
  Game g = fixture("optimal-no-nash");
  expect(g.players == 2 && g.num_vertices() == 5, "fixture shape");
  auto yes = decide_posne(g, R({1, 1}), R({1, 1}));
  expect(yes.profile.has_value(), "no positional equilibrium with payoff (1,1)");
  expect(yes.verdict->payoff == R({1, 1}), "witness payoff is not (1,1)");
  auto no = decide_posne(g, R({1, 0}), R({1, 0}));
  expect(!no.profile, "found a positional equilibrium with payoff (1,0)");
  auto all = positional_nash_profiles(g);
  expect(!all.empty(), "no positional equilibrium at all");
  for (const auto& [p, v] : all)
    expect(v.payoff == R({1, 1}), "positional equilibrium with payoff other than (1,1)");
}

void no_pure_nash() {
  Game g = fixture("no-pure-nash");
  auto v = verify_stationary_nash(g, no_pure_nash_profile(g));
  expect(v.is_nash, "mixed profile is not an equilibrium");
  expect(v.payoff == R({1, Rational(1, 2), Rational(1, 2)}), "mixed profile payoff is not (1,1/2,1/2)");
  for (const auto& [p, pv] : positional_nash_profiles(g))
    expect(pv.payoff[0] == 0, "pure positional equilibrium with positive payoff for player 0");
}

void no_stationary_nash() {
  Game g = fixture("no-stationary-nash");
  auto v = verify_nash(g, no_stationary_nash_profile(g));
  expect(v.is_nash, "memory profile is not an equilibrium");
  expect(v.payoff == R({1, 0, 0}), "memory profile payoff is not (1,0,0)");
  for (const auto& [p, pv] : positional_nash_profiles(g))
    expect(pv.payoff[0] == 0, "positional equilibrium with positive payoff for player 0");
}

// Payoffs of G(p) when t1 and t2 continue with probabilities a1/N and a2/N,
// in integer arithmetic: player 3 gets num3/den, player k gets numk/(2 den).
struct GpPoint {
  std::int64_t num3, num1, num2, den;
};

GpPoint gp_point(std::int64_t P, std::int64_t Q, std::int64_t N, std::int64_t a1, std::int64_t a2) {
  const std::int64_t q = Q - P;
  GpPoint r;
  r.den = Q * Q * N * N - q * q * a1 * a2;
  r.num3 = (P * Q * N + q * a1 * P) * N;
  r.num1 = (P * N + 2 * q * (N - a1)) * Q * N;
  r.num2 = (P * N + 2 * q * (N - a2)) * Q * N;
  return r;
}

void gp_optimum() {
  const std::int64_t N = 1000;
  for (auto [P, Q, S1, S2] : {std::array<std::int64_t, 4>{1, 4, 1, 2}, std::array<std::int64_t, 4>{9, 16, 3, 4}}) {
    Rational p(P, Q), root(S1, S2);
    GpOptimum opt = gp_optimal_profile(p);
    expect(opt.exact, "optimum not exact for a square p");
    expect(opt.payoff3 == root, "player 3 payoff differs from sqrt(p)");
    Game g = gen_gp(p);
    auto v = verify_stationary_nash(g, opt.profile);
    expect(v.is_nash, "optimal profile is not an equilibrium");
    expect(v.payoff[3] == root, "verified payoff differs from sqrt(p)");
    // The closed form agrees with the chain solver on a few grid points.
    for (std::int64_t a1 : {0, 250, 1000})
      for (std::int64_t a2 : {0, 500, 999}) {
        Stationary s = opt.profile;
        auto set = [&](const char* t, const char* cont, const char* exit, std::int64_t a) {
          Distribution d;
          if (a > 0)
            d.emplace_back(g.vertex(cont), ratio(a, N));
          if (a < N)
            d.emplace_back(g.vertex(exit), ratio(N - a, N));
          s.choice[g.vertex(t)] = d;
        };
        set("t1", "s2", "e1", a1);
        set("t2", "s1", "e2", a2);
        auto z = chain_payoffs(induced_chain(g, s), g.objectives);
        GpPoint pt = gp_point(P, Q, N, a1, a2);
        if (pt.den == 0)
          continue;
        expect(z[3] == ratio(pt.num3, pt.den), "closed form for player 3 disagrees with the chain");
        expect(z[1] == ratio(pt.num1, 2 * pt.den), "closed form for player 1 disagrees with the chain");
      }
    std::int64_t feasible = 0;
    for (std::int64_t a1 = 0; a1 <= N; ++a1)
      for (std::int64_t a2 = 0; a2 <= N; ++a2) {
        GpPoint pt = gp_point(P, Q, N, a1, a2);
        if (pt.den <= 0)
          continue;
        // Players 1 and 2 must not prefer quitting (payoff 1/2) at s1 and s2.
        if (pt.num1 < pt.den || pt.num2 < pt.den)
          continue;
        ++feasible;
        expect(pt.num3 * S2 <= S1 * pt.den, "grid point beats sqrt(p)");
      }
    expect(feasible > 0, "no feasible grid point");
  }
}

void sat_posne() {
  for (const auto& f : cnf_family()) {
    Game g = gen_sat_posne(f);
    auto r = decide_posne(g, R({1, Rational(1, 2)}), R({1, Rational(1, 2)}));
    expect(r.profile.has_value() == satisfiable(f), "posne verdict disagrees on\n" + to_dimacs(f));
  }
}

void sat_strqual() {
  for (const auto& f : cnf_family()) {
    bool sat = satisfiable(f);
    expect(decide_strqualne(gen_sat_streett(f, SatVariant::Streett), {1, 0}).answer == sat,
           "Streett gadget verdict disagrees on\n" + to_dimacs(f));
    expect(decide_strqualne(gen_sat_streett(f, SatVariant::Rabin), {0, 1}).answer == !sat,
           "Rabin gadget verdict disagrees on\n" + to_dimacs(f));
    Game all = gen_rabin_allwin(f);
    expect(decide_strqualne(all, std::vector<int>(all.players, 1)).answer == sat,
           "all-win gadget verdict disagrees on\n" + to_dimacs(f));
  }
}

void ec_oracle() {
  Rng rng(7);
  for (int round = 0; round < 300; ++round) {
    Game g = random_parity_game(rng, rng.between(1, 3), rng.between(1, 10), rng.between(1, 3));
    for (int k = 0; k < 3; ++k) {
      std::vector<int> x(g.players);
      for (auto& b : x)
        b = rng.below(2);
      expect(find_ec_parity(g, x) == union_ecs_with_payoff_brute(g, x, g.all_vertices()),
             "end-component search disagrees with enumeration on game " + std::to_string(round) + "\n" +
                 serialize_game(g));
    }
    collect_coalition_games(g);
  }
}

void mdp_oracle() {
  Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    Mdp m = random_mdp(rng, rng.between(1, 8));
    VertexSet target(m.game.num_vertices());
    for (VertexId v = 0; v < target.size(); ++v)
      if (rng.below(3) == 0)
        target.set(v);
    expect(mdp_max_reach(m, target) == oracle_mdp_reach(m, target),
           "reachability value disagrees on MDP " + std::to_string(round) + "\n" + serialize_game(m.game));
    expect(mdp_value_omega(m) == oracle_mdp_omega(m),
           "Buchi value disagrees on MDP " + std::to_string(round) + "\n" + serialize_game(m.game));
    Game two = m.game;
    two.players = 2;
    two.objectives.push_back(complement(two.objectives[0], two.used_colours()));
    two.seal();
    zero_sum_pool.push_back(two);
  }
}

void threat_construction() {
  Rng rng(13);
  for (int round = 0; round < 100; ++round) {
    Game g = random_parity_game(rng, rng.between(1, 3), rng.between(1, 8), rng.between(1, 3));
    Positional base;
    base.choice.assign(g.num_vertices(), std::nullopt);
    for (int i = 0; i < g.players; ++i) {
      ValueTable t = s2g_values(coalition_game(g, i));
      expect(t.sigma.has_value(), "no globally optimal positional strategy for player " + std::to_string(i));
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (g.owner[v] == i)
          base.choice[v] = (*t.sigma)[v];
    }
    std::string where = " on game " + std::to_string(round) + "\n" + serialize_game(g);
    expect(check_favourable(g, base), "optimal base profile is not favourable" + where);
    FiniteState eq = construct_threat_equilibrium(g, base);
    auto v = verify_nash(g, eq);
    expect(v.is_nash, "threat profile is not an equilibrium" + where);
    expect(v.payoff == chain_payoffs(induced_chain(g, base), g.objectives), "threat profile changes the payoff" + where);
    collect_coalition_games(g);
  }
}

void determinacy() {
  expect(!zero_sum_pool.empty(), "random suites did not run");
  std::size_t both = 0;
  for (const auto& g : zero_sum_pool) {
    ValueTable t = s2g_values(g);
    if (t.lower && t.upper) {
      ++both;
      expect(*t.lower == *t.upper, "max-min differs from min-max\n" + serialize_game(g));
    }
  }
  expect(both == zero_sum_pool.size(), "some instance was not solved from both sides");
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void audit(const Game& g, const std::string& golden) {
  expect(validate(g).empty(), g.name + " does not validate");
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (g.is_stochastic(v)) {
      Rational s = 0;
      for (const auto& e : g.succ[v])
        s += *e.prob;
      expect(s == 1, "row of " + g.vertex_names[v] + " sums to " + to_string(s));
    }
  std::filesystem::path path = std::filesystem::path(SMG_TEST_DIR) / "golden" / golden;
  expect(std::filesystem::exists(path), "missing golden file " + golden);
  expect(serialize_game(g) == read(path), g.name + " differs from " + golden);
}

void gadget_audit() {
  TwoCounterMachine loop{{"q0"}, "q0", {{"q0", Instruction::Inc, 1, "q0"}}};
  Game a = gen_two_counter(loop);
  expect(a.players == 10, "two-counter game does not have 10 players");
  audit(a, "two_counter_inc_loop.smg");
  TwoCounterMachine halt{{"q0", "q1"}, "q0", {{"q0", Instruction::Inc, 1, "q1"}}};
  Game b = gen_halting_variant(halt);
  expect(b.players == 14, "halting variant does not have 14 players");
  audit(b, "halting_two_state.smg");
}

std::string statne_formula(std::string& note) {
  Game g = gen_gp(Rational(1, 4));
  StatNeQuery q;
  for (const auto& [v, w] : full_support(g)) {
    const std::string& name = g.vertex_names[v];
    if ((name == "s1" && g.vertex_names[w] != "r1") || (name == "s2" && g.vertex_names[w] != "r2"))
      continue;
    q.support.emplace_back(v, w);
  }
  q.y.assign(4, Rational(1));
  q.x = R({1, 0, 0, Rational(1, 2)});
  std::string sat = emit_statne_formula(g, q);
  q.x[3] = Rational(3, 5);
  std::string unsat = emit_statne_formula(g, q);
  std::size_t declared = 0;
  for (std::size_t pos = sat.find("(declare-fun"); pos != std::string::npos; pos = sat.find("(declare-fun", pos + 1))
    ++declared;
  const std::size_t n = g.num_vertices();
  expect(declared == n * n + 2 * static_cast<std::size_t>(g.players) * n, "unexpected number of declared variables");
  expect(sat.find("(set-logic QF_NRA)") != std::string::npos && sat.find("(check-sat)") != std::string::npos,
         "formula lacks the logic or check-sat command");
  std::string solver = find_solver();
  if (solver.empty()) {
    note = " (solver step skipped: z3 not found)";
    return note;
  }
  std::string a = run_solver(solver, sat), b = run_solver(solver, unsat);
  expect(a == "sat", "threshold 1/2 gave '" + a + "'");
  expect(b == "unsat", "threshold 3/5 gave '" + b + "'");
  return note;
}

void statne_smt(std::string& note) { statne_formula(note); }

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<void(std::string&)> run;
  };
  auto plain = [](void (*f)()) { return [f](std::string&) { f(); }; };
  std::vector<Criterion> all = {
      {1, "optimal strategies that extend to no equilibrium", 1, plain(optimal_without_nash)},
      {2, "mixed equilibrium where no pure one exists", 1, plain(no_pure_nash)},
      {3, "memory equilibrium where no stationary one exists", 1, plain(no_stationary_nash)},
      {4, "optimum of G(p) at p=1/4 and p=9/16", 10, plain(gp_optimum)},
      {5, "SAT gadget against truth tables (positional)", 120, plain(sat_posne)},
      {6, "Streett, Rabin and all-win gadgets against truth tables", 300, plain(sat_strqual)},
      {7, "end-component search against subset enumeration", 120, plain(ec_oracle)},
      {8, "MDP values against positional enumeration", 120, plain(mdp_oracle)},
      {9, "threat equilibria preserve the base payoff", 180, plain(threat_construction)},
      {10, "zero-sum determinacy on the random suites", 0, plain(determinacy)},
      {11, "two-counter gadget audits", 1, plain(gadget_audit)},
      {12, "stationary-equilibrium formula for G(1/4)", 0, statne_smt},
  };
  int failed = 0;
  for (auto& c : all) {
    std::string note, error;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(note);
    } catch (const Failure& f) {
      error = f.what;
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && c.limit > 0 && secs > c.limit)
      error = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit) + " s";
    std::printf("[%s] criterion %2d: %s (%.2f s)%s\n", error.empty() ? "PASS" : "FAIL", c.id, c.name, secs,
                note.c_str());
    if (!error.empty()) {
      std::printf("       %s\n", error.c_str());
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
