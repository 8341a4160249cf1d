#pragma once

#include "smg/arena.hpp"
#include "smg/gadgets.hpp"
#include "smg/objectives.hpp"
#include "smg/probabilistic.hpp"
#include "smg/zero_sum.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <cstdint>
#include <random>
#include <vector>

namespace smg::testing {

// Portable draws: std::uniform_int_distribution differs between standard
// libraries, the raw engine output does not.
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  int below(int n) { return static_cast<int>(engine() % static_cast<std::uint64_t>(n)); }
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }
  bool coin() { return below(2) == 1; }
};

inline void random_edges(Game& g, Rng& rng, int max_degree) {
  const int n = static_cast<int>(g.num_vertices());
  for (int v = 0; v < n; ++v) {
    std::vector<int> succ;
    for (int k = rng.between(1, max_degree); k > 0; --k) {
      int w = rng.below(n);
      if (std::find(succ.begin(), succ.end(), w) == succ.end())
        succ.push_back(w);
    }
    if (g.owner[v] == kStochastic) {
      std::vector<int> weight;
      int total = 0;
      for (std::size_t k = 0; k < succ.size(); ++k)
        total += weight.emplace_back(rng.between(1, 5));
      for (std::size_t k = 0; k < succ.size(); ++k)
        g.add_edge(v, succ[k], ratio(weight[k], total));
    } else {
      for (int w : succ)
        g.add_edge(v, w);
    }
  }
}

inline Game random_parity_game(Rng& rng, int players, int vertices, int priorities, int max_degree = 3) {
  Game g;
  g.name = "random";
  g.players = players;
  for (int v = 0; v < vertices; ++v)
    g.add_vertex("v" + std::to_string(v), rng.between(-1, players - 1));
  random_edges(g, rng, max_degree);
  for (int i = 0; i < players; ++i) {
    std::vector<int> p(g.num_colours());
    for (auto& x : p)
      x = rng.below(priorities);
    g.objectives.push_back(Objective::parity(p));
  }
  g.initial = 0;
  g.seal();
  return g;
}

// Player-0 vertices and stochastic vertices, Buchi objective on a random set.
inline Mdp random_mdp(Rng& rng, int vertices) {
  Game g;
  g.name = "random-mdp";
  g.players = 1;
  for (int v = 0; v < vertices; ++v)
    g.add_vertex("v" + std::to_string(v), rng.coin() ? 0 : kStochastic);
  random_edges(g, rng, 3);
  ColourSet f(g.num_colours());
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (rng.below(3) == 0)
      f.set(g.colour[v]);
  g.objectives = {Objective::buchi(f)};
  g.initial = 0;
  g.seal();
  Mdp m;
  m.game = g;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    m.origin.emplace_back(0, v);
  return m;
}

// All 0/1 payoff vectors of the given length.
inline std::vector<std::vector<int>> all_binary(int players) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << players); ++mask) {
    std::vector<int> x(players);
    for (int i = 0; i < players; ++i)
      x[i] = mask >> i & 1;
    out.push_back(x);
  }
  return out;
}

inline std::vector<ColourSet> nonempty_subsets(std::size_t n) {
  std::vector<ColourSet> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    ColourSet s(n);
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1)
        s.set(k);
    out.push_back(s);
  }
  return out;
}

inline Objective random_objective(Rng& rng, std::size_t n) {
  auto set = [&] {
    ColourSet s(n);
    for (std::size_t k = 0; k < n; ++k)
      if (rng.coin())
        s.set(k);
    return s;
  };
  switch (rng.below(6)) {
    case 0: return Objective::buchi(set());
    case 1: return Objective::cobuchi(set());
    case 2: {
      std::vector<int> p(n);
      for (auto& x : p)
        x = rng.below(5);
      return Objective::parity(p);
    }
    case 3:
    case 4: {
      std::vector<ColourPair> pairs;
      for (int k = rng.between(0, 3); k > 0; --k)
        pairs.push_back({set(), set()});
      return rng.below(2) ? Objective::streett(pairs) : Objective::rabin(pairs);
    }
    default: {
      std::vector<ColourSet> fam;
      for (const auto& s : nonempty_subsets(n))
        if (rng.coin())
          fam.push_back(s);
      return Objective::muller(fam);
    }
  }
}

// Dense Markov chain over all vertices of g under a positional choice,
// analysed without the library's chain code.
struct DenseChain {
  std::size_t n;
  std::vector<std::vector<Rational>> p;
};

inline DenseChain dense_chain(const Game& g, const PositionalChoice& choice) {
  DenseChain c{g.num_vertices(), {}};
  c.p.assign(c.n, std::vector<Rational>(c.n, Rational(0)));
  for (VertexId v = 0; v < c.n; ++v) {
    if (g.is_stochastic(v))
      for (const auto& e : g.succ[v])
        c.p[v][e.to] += *e.prob;
    else
      c.p[v][*choice[v]] = 1;
  }
  return c;
}

inline std::vector<std::vector<char>> closure(const DenseChain& c) {
  std::vector<std::vector<char>> r(c.n, std::vector<char>(c.n, 0));
  for (std::size_t v = 0; v < c.n; ++v) {
    r[v][v] = 1;
    for (std::size_t w = 0; w < c.n; ++w)
      if (c.p[v][w] != 0)
        r[v][w] = 1;
  }
  for (std::size_t k = 0; k < c.n; ++k)
    for (std::size_t i = 0; i < c.n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < c.n; ++j)
          if (r[k][j])
            r[i][j] = 1;
  return r;
}

// Probability of eventually reaching `target`, by Gaussian elimination on
// the states that can reach it.
inline std::vector<Rational> dense_reach(const DenseChain& c, const std::vector<char>& target) {
  auto r = closure(c);
  std::vector<char> live(c.n, 0);
  for (std::size_t v = 0; v < c.n; ++v)
    for (std::size_t w = 0; w < c.n; ++w)
      if (r[v][w] && target[w])
        live[v] = 1;
  std::vector<std::size_t> idx;
  std::vector<int> pos(c.n, -1);
  for (std::size_t v = 0; v < c.n; ++v)
    if (live[v] && !target[v]) {
      pos[v] = static_cast<int>(idx.size());
      idx.push_back(v);
    }
  const std::size_t k = idx.size();
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1, Rational(0)));
  for (std::size_t row = 0; row < k; ++row) {
    std::size_t v = idx[row];
    a[row][row] = 1;
    for (std::size_t w = 0; w < c.n; ++w) {
      if (c.p[v][w] == 0)
        continue;
      if (target[w])
        a[row][k] += c.p[v][w];
      else if (pos[w] >= 0)
        a[row][pos[w]] -= c.p[v][w];
    }
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (a[piv][col] == 0)
      ++piv;
    std::swap(a[piv], a[col]);
    for (std::size_t row = 0; row < k; ++row) {
      if (row == col || a[row][col] == 0)
        continue;
      Rational f = a[row][col] / a[col][col];
      for (std::size_t j = col; j <= k; ++j)
        a[row][j] -= f * a[col][j];
    }
  }
  std::vector<Rational> out(c.n, Rational(0));
  for (std::size_t v = 0; v < c.n; ++v)
    if (target[v])
      out[v] = 1;
  for (std::size_t row = 0; row < k; ++row)
    out[idx[row]] = a[row][k] / a[row][row];
  return out;
}

// Probability of winning `obj` from every vertex: reach the bottom SCCs
// whose colour set satisfies it.
inline std::vector<Rational> dense_win(const Game& g, const DenseChain& c, const Objective& obj) {
  auto r = closure(c);
  std::vector<char> good(c.n, 0);
  for (std::size_t v = 0; v < c.n; ++v) {
    bool bottom = true;
    for (std::size_t w = 0; w < c.n; ++w)
      if (r[v][w] && !r[w][v])
        bottom = false;
    if (!bottom)
      continue;
    ColourSet inf(g.num_colours());
    for (std::size_t w = 0; w < c.n; ++w)
      if (r[v][w])
        inf.set(g.colour[w]);
    good[v] = wins_inf(obj, inf);
  }
  return dense_reach(c, good);
}

// Pointwise maximum over the positional strategies of player 0 in an MDP.
inline std::vector<Rational> oracle_mdp_reach(const Mdp& m, const VertexSet& target) {
  std::vector<char> t(m.game.num_vertices());
  for (VertexId v = 0; v < t.size(); ++v)
    t[v] = target.test(v);
  std::vector<Rational> best(t.size(), Rational(0));
  for_each_positional(m.game, 0, [&](const PositionalChoice& c) {
    auto val = dense_reach(dense_chain(m.game, c), t);
    for (std::size_t v = 0; v < t.size(); ++v)
      best[v] = std::max(best[v], val[v]);
  });
  return best;
}

inline std::vector<Rational> oracle_mdp_omega(const Mdp& m) {
  std::vector<Rational> best(m.game.num_vertices(), Rational(0));
  for_each_positional(m.game, 0, [&](const PositionalChoice& c) {
    auto val = dense_win(m.game, dense_chain(m.game, c), m.game.objectives[0]);
    for (std::size_t v = 0; v < best.size(); ++v)
      best[v] = std::max(best[v], val[v]);
  });
  return best;
}

// An SMT solver binary on this machine, or empty.
inline std::string find_solver() {
  for (const char* p : {"/usr/local/bin/z3", "/usr/bin/z3"})
    if (std::filesystem::exists(p))
      return p;
  return "";
}

inline std::string run_solver(const std::string& solver, const std::string& formula) {
  auto path = std::filesystem::temp_directory_path() / ("smg_test_" + std::to_string(::getpid()) + ".smt2");
  std::ofstream(path) << formula;
  std::string out;
  if (FILE* pipe = popen((solver + " " + path.string() + " 2>&1").c_str(), "r")) {
    char buf[256];
    while (fgets(buf, sizeof buf, pipe))
      out += buf;
    pclose(pipe);
  }
  std::filesystem::remove(path);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r'))
    out.pop_back();
  return out;
}

// Fixed CNF family: hand-picked unsatisfiable formulas, then formulas drawn
// from a seeded stream until both kinds are well represented.
inline std::vector<CnfFormula> cnf_family() {
  std::vector<CnfFormula> out = {
      {1, {{1}}},
      {1, {{1}, {-1}}},
      {2, {{1, 2}, {-1}}},
      {2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}}},
      {2, {{1}, {-1, 2}, {-2}}},
      {2, {{1}, {2}, {-1, -2}}},
      {3, {{1, 2, 3}, {-1}, {-2}, {-3}}},
      {3, {{1, -2}, {2, -3}, {3}, {-1}}},
      {3, {{1, 2, 3}, {-1, -2, -3}}},
      {2, {{1, 1}, {-1, 2}}},
  };
  Rng rng(20240607);
  int sat = 0, unsat = 0;
  for (const auto& f : out)
    (satisfiable(f) ? sat : unsat)++;
  while (sat < 30 || unsat < 25) {
    CnfFormula f;
    f.variables = rng.between(1, 3);
    int m = rng.between(2, 4);
    for (int j = 0; j < m; ++j) {
      std::vector<int> c;
      for (int len = rng.between(1, 2); len > 0; --len) {
        int lit = rng.between(1, f.variables) * (rng.coin() ? 1 : -1);
        if (std::find(c.begin(), c.end(), lit) == c.end())
          c.push_back(lit);
      }
      f.clauses.push_back(c);
    }
    bool s = satisfiable(f);
    if ((s && sat < 30) || (!s && unsat < 25)) {
      (s ? sat : unsat)++;
      out.push_back(f);
    }
  }
  return out;
}

}  // namespace smg::testing
