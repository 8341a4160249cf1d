#include "smg/probabilistic.hpp"

#include "smg/analysis.hpp"
#include "smg/graph.hpp"
#include "smg/objectives.hpp"

#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace smg {

namespace {

[[noreturn]] void mismatch(const Game& g, VertexId v, const std::string& why) {
  throw Error(ErrorCode::ProfileMismatch, "at " + g.vertex_names[v] + ": " + why);
}

Distribution checked_distribution(const Game& g, VertexId v, const Distribution& d) {
  Distribution out;
  Rational sum = 0;
  for (auto [w, p] : d) {
    p.canonicalize();
    if (p < 0)
      mismatch(g, v, "negative probability");
    if (!g.has_edge(v, w))
      mismatch(g, v, "choice " + (w < g.num_vertices() ? g.vertex_names[w] : std::to_string(w)) + " is not a successor");
    for (const auto& [u, q] : out)
      if (u == w)
        mismatch(g, v, "successor listed twice");
    sum += p;
    if (p > 0)
      out.emplace_back(w, p);
  }
  if (sum != 1)
    mismatch(g, v, "probabilities sum to " + to_string(sum));
  return out;
}

}  // namespace

FiniteState to_finite_state(const Game& g, const StrategyProfile& p) {
  const std::size_t n = g.num_vertices();
  FiniteState fs;
  if (const auto* pos = std::get_if<Positional>(&p)) {
    if (pos->choice.size() != n)
      throw Error(ErrorCode::ProfileMismatch, "positional profile has the wrong size");
    fs.memory.update.assign(1, std::vector<MemoryState>(n, 0));
    fs.choice.assign(1, std::vector<Distribution>(n));
    for (VertexId v = 0; v < n; ++v) {
      if (g.is_stochastic(v))
        continue;
      if (!pos->choice[v])
        mismatch(g, v, "no choice for a controlled vertex");
      fs.choice[0][v] = checked_distribution(g, v, {{*pos->choice[v], Rational(1)}});
    }
    return fs;
  }
  if (const auto* st = std::get_if<Stationary>(&p)) {
    if (st->choice.size() != n)
      throw Error(ErrorCode::ProfileMismatch, "stationary profile has the wrong size");
    fs.memory.update.assign(1, std::vector<MemoryState>(n, 0));
    fs.choice.assign(1, std::vector<Distribution>(n));
    for (VertexId v = 0; v < n; ++v)
      if (!g.is_stochastic(v))
        fs.choice[0][v] = checked_distribution(g, v, st->choice[v]);
    return fs;
  }
  const auto& in = std::get<FiniteState>(p);
  const auto& mem = in.memory;
  if (mem.size == 0 || mem.update.size() != mem.size || in.choice.size() != mem.size || mem.initial >= mem.size)
    throw Error(ErrorCode::ProfileMismatch, "memory structure has inconsistent sizes");
  fs.memory = mem;
  fs.choice.assign(mem.size, std::vector<Distribution>(n));
  for (std::size_t m = 0; m < mem.size; ++m) {
    if (mem.update[m].size() != n || in.choice[m].size() != n)
      throw Error(ErrorCode::ProfileMismatch, "memory rows have the wrong size");
    for (VertexId v = 0; v < n; ++v) {
      if (mem.update[m][v] >= mem.size)
        throw Error(ErrorCode::ProfileMismatch, "memory update out of range");
      if (!g.is_stochastic(v))
        fs.choice[m][v] = checked_distribution(g, v, in.choice[m][v]);
    }
  }
  return fs;
}

namespace {

MarkovChain product_chain(const Game& g, const FiniteState& fs, VertexId start) {
  const std::uint64_t n = g.num_vertices();
  MarkovChain c;
  c.num_colours = g.num_colours();
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  std::deque<std::uint32_t> queue;
  auto visit = [&](MemoryState m, VertexId v) {
    std::uint64_t key = m * n + v;
    auto it = index.find(key);
    if (it != index.end())
      return it->second;
    auto id = static_cast<std::uint32_t>(c.state.size());
    index.emplace(key, id);
    c.state.emplace_back(m, v);
    c.colour.push_back(g.colour[v]);
    c.rows.emplace_back();
    queue.push_back(id);
    return id;
  };
  visit(fs.memory.initial, start);
  while (!queue.empty()) {
    auto id = queue.front();
    queue.pop_front();
    auto [m, v] = c.state[id];
    MemoryState next = fs.memory.update[m][v];
    std::vector<std::pair<std::uint32_t, Rational>> row;
    if (g.is_stochastic(v)) {
      for (const auto& e : g.succ[v])
        row.emplace_back(visit(next, e.to), *e.prob);
    } else {
      for (const auto& [w, p] : fs.choice[m][v])
        row.emplace_back(visit(next, w), p);
    }
    c.rows[id] = std::move(row);
  }
  return c;
}

void require_initial(const Game& g) {
  if (!g.initial)
    throw Error(ErrorCode::InvalidVertex, "game has no initial vertex");
}

}  // namespace

MarkovChain induced_chain(const Game& g, const StrategyProfile& p) {
  require_initial(g);
  return product_chain(g, to_finite_state(g, p), *g.initial);
}

MarkovChain positional_chain(const Game& g, const std::vector<std::optional<VertexId>>& choice, VertexId from) {
  const std::size_t n = g.num_vertices();
  MarkovChain c;
  c.num_colours = g.num_colours();
  std::vector<std::uint32_t> index(n, UINT32_MAX);
  std::vector<VertexId> order{from};
  index[from] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    VertexId v = order[k];
    auto visit = [&](VertexId w) {
      if (index[w] == UINT32_MAX) {
        index[w] = static_cast<std::uint32_t>(order.size());
        order.push_back(w);
      }
    };
    if (g.is_stochastic(v))
      for (const auto& e : g.succ[v])
        visit(e.to);
    else
      visit(*choice[v]);
  }
  c.state.reserve(order.size());
  c.rows.resize(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    VertexId v = order[k];
    c.state.emplace_back(0, v);
    c.colour.push_back(g.colour[v]);
    if (g.is_stochastic(v))
      for (const auto& e : g.succ[v])
        c.rows[k].emplace_back(index[e.to], *e.prob);
    else
      c.rows[k].emplace_back(index[*choice[v]], Rational(1));
  }
  return c;
}

std::vector<std::vector<std::uint32_t>> bottom_sccs(const MarkovChain& c) {
  const auto n = static_cast<std::uint32_t>(c.size());
  std::vector<char> in(n, 1);
  auto comps = graph::tarjan(n, in, [&](std::uint32_t s, auto&& f) {
    for (const auto& [t, p] : c.rows[s])
      f(t);
  });
  std::vector<std::uint32_t> comp_of(n);
  for (std::size_t k = 0; k < comps.size(); ++k)
    for (auto s : comps[k])
      comp_of[s] = static_cast<std::uint32_t>(k);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    bool bottom = true;
    for (auto s : comps[k])
      for (const auto& [t, p] : c.rows[s])
        if (comp_of[t] != k)
          bottom = false;
    if (bottom)
      out.push_back(comps[k]);
  }
  return out;
}

namespace {

// Solves A x = b in place over the rationals; A is square and non-singular.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0)
      ++piv;
    if (piv == n)
      throw std::logic_error("singular system in reachability solve");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0)
        continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k)
        if (a[col][k] != 0)
          a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace

std::vector<Rational> reach_probabilities(const MarkovChain& c, const std::vector<char>& target) {
  const auto n = static_cast<std::uint32_t>(c.size());
  std::vector<std::vector<std::uint32_t>> pred(n);
  for (std::uint32_t s = 0; s < n; ++s)
    for (const auto& [t, p] : c.rows[s])
      pred[t].push_back(s);

  std::vector<char> reaches(n, 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t s = 0; s < n; ++s)
    if (target[s]) {
      reaches[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    auto t = stack.back();
    stack.pop_back();
    for (auto s : pred[t])
      if (!reaches[s]) {
        reaches[s] = 1;
        stack.push_back(s);
      }
  }
  // States that can hit a probability-0 state before the target.
  std::vector<char> leaks(n, 0);
  for (std::uint32_t s = 0; s < n; ++s)
    if (!reaches[s]) {
      leaks[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    auto t = stack.back();
    stack.pop_back();
    for (auto s : pred[t])
      if (!leaks[s] && !target[s]) {
        leaks[s] = 1;
        stack.push_back(s);
      }
  }

  std::vector<Rational> value(n, Rational(0));
  std::vector<char> open(n, 0);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (!reaches[s])
      value[s] = 0;
    else if (!leaks[s])
      value[s] = 1;
    else
      open[s] = 1;
  }
  auto comps = graph::tarjan(n, open, [&](std::uint32_t s, auto&& f) {
    for (const auto& [t, p] : c.rows[s])
      f(t);
  });
  std::vector<std::uint32_t> local(n, UINT32_MAX);
  for (const auto& comp : comps) {
    if (comp.size() == 1) {
      auto s = comp[0];
      Rational self = 0, rhs = 0;
      for (const auto& [t, p] : c.rows[s]) {
        if (t == s)
          self += p;
        else
          rhs += p * value[t];
      }
      value[s] = rhs / (1 - self);
      continue;
    }
    const std::size_t k = comp.size();
    for (std::size_t i = 0; i < k; ++i)
      local[comp[i]] = static_cast<std::uint32_t>(i);
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k, Rational(0)));
    std::vector<Rational> b(k, Rational(0));
    for (std::size_t i = 0; i < k; ++i) {
      a[i][i] = 1;
      for (const auto& [t, p] : c.rows[comp[i]]) {
        if (open[t] && local[t] != UINT32_MAX && comp[local[t]] == t)
          a[i][local[t]] -= p;
        else
          b[i] += p * value[t];
      }
    }
    auto x = solve_linear(std::move(a), std::move(b));
    for (std::size_t i = 0; i < k; ++i) {
      value[comp[i]] = x[i];
      local[comp[i]] = UINT32_MAX;
    }
  }
  return value;
}

std::vector<std::vector<Rational>> chain_payoffs_all(const MarkovChain& c, const std::vector<Objective>& objectives) {
  auto bottoms = bottom_sccs(c);
  std::vector<std::vector<Rational>> out;
  std::vector<ColourSet> inf;
  for (const auto& b : bottoms) {
    ColourSet s(c.num_colours);
    for (auto st : b)
      s.set(c.colour[st]);
    inf.push_back(std::move(s));
  }
  for (const auto& obj : objectives) {
    std::vector<char> target(c.size(), 0);
    for (std::size_t k = 0; k < bottoms.size(); ++k)
      if (wins_inf(obj, inf[k]))
        for (auto st : bottoms[k])
          target[st] = 1;
    out.push_back(reach_probabilities(c, target));
  }
  return out;
}

std::vector<Rational> chain_payoffs(const MarkovChain& c, const std::vector<Objective>& objectives) {
  auto all = chain_payoffs_all(c, objectives);
  std::vector<Rational> z;
  for (const auto& row : all)
    z.push_back(row.empty() ? Rational(0) : row[0]);
  return z;
}

namespace {

Game mdp_shell(const Game& g, int player) {
  Game m;
  m.name = g.name + "-mdp" + std::to_string(player);
  m.players = 1;
  for (const auto& c : g.colour_names)
    m.intern_colour(c);
  m.objectives.push_back(g.objectives.at(player));
  return m;
}

}  // namespace

Mdp induced_mdp(const Game& g, const StrategyProfile& p, int player) {
  require_initial(g);
  FiniteState fs = to_finite_state(g, p);
  const std::uint64_t n = g.num_vertices();
  Mdp out;
  out.game = mdp_shell(g, player);
  std::unordered_map<std::uint64_t, VertexId> index;
  std::deque<VertexId> queue;
  bool plain = fs.memory.size == 1;
  auto visit = [&](MemoryState m, VertexId v) {
    std::uint64_t key = m * n + v;
    auto it = index.find(key);
    if (it != index.end())
      return it->second;
    std::string name = plain ? g.vertex_names[v] : std::to_string(m) + ":" + g.vertex_names[v];
    VertexId id = out.game.add_vertex(name, g.owner[v] == player ? 0 : kStochastic, g.colour_names[g.colour[v]]);
    index.emplace(key, id);
    out.origin.emplace_back(m, v);
    queue.push_back(id);
    return id;
  };
  out.initial = visit(fs.memory.initial, *g.initial);
  while (!queue.empty()) {
    VertexId id = queue.front();
    queue.pop_front();
    auto [m, v] = out.origin[id];
    MemoryState next = fs.memory.update[m][v];
    if (g.owner[v] == player) {
      for (const auto& e : g.succ[v])
        out.game.add_edge(id, visit(next, e.to));
    } else if (g.is_stochastic(v)) {
      for (const auto& e : g.succ[v])
        out.game.add_edge(id, visit(next, e.to), *e.prob);
    } else {
      for (const auto& [w, q] : fs.choice[m][v])
        out.game.add_edge(id, visit(next, w), q);
    }
  }
  out.game.initial = out.initial;
  out.game.seal();
  return out;
}

Mdp positional_mdp(const Game& g, const std::vector<std::optional<VertexId>>& choice, int player) {
  Mdp out;
  out.game = mdp_shell(g, player);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out.game.add_vertex(g.vertex_names[v], g.owner[v] == player ? 0 : kStochastic, g.colour_names[g.colour[v]]);
    out.origin.emplace_back(0, v);
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.owner[v] == player) {
      for (const auto& e : g.succ[v])
        out.game.add_edge(v, e.to);
    } else if (g.is_stochastic(v)) {
      for (const auto& e : g.succ[v])
        out.game.add_edge(v, e.to, *e.prob);
    } else {
      if (!choice[v])
        mismatch(g, v, "no choice for a controlled vertex");
      out.game.add_edge(v, *choice[v], Rational(1));
    }
  }
  out.initial = g.initial.value_or(0);
  out.game.initial = out.initial;
  out.game.seal();
  return out;
}

namespace {

struct AlmostSure {
  VertexSet set;
  std::vector<std::optional<VertexId>> strategy;
};

AlmostSure almost_sure(const Game& m, const VertexSet& target) {
  const std::size_t n = m.num_vertices();
  VertexSet x = m.all_vertices();
  std::vector<std::optional<VertexId>> strat(n);
  while (true) {
    VertexSet y = target & x;
    std::fill(strat.begin(), strat.end(), std::nullopt);
    bool grew = true;
    while (grew) {
      grew = false;
      for (VertexId v = 0; v < n; ++v) {
        if (!x.test(v) || y.test(v))
          continue;
        if (!m.is_stochastic(v)) {
          for (const auto& e : m.succ[v])
            if (y.test(e.to)) {
              strat[v] = e.to;
              break;
            }
          if (strat[v]) {
            y.set(v);
            grew = true;
          }
        } else {
          bool all_in = true, some = false;
          for (const auto& e : m.succ[v]) {
            all_in = all_in && x.test(e.to);
            some = some || y.test(e.to);
          }
          if (all_in && some) {
            y.set(v);
            grew = true;
          }
        }
      }
    }
    if (y == x)
      break;
    x = y;
  }
  // Target states in the set still need some move that stays inside.
  for (VertexId v = 0; v < n; ++v)
    if (x.test(v) && !m.is_stochastic(v) && !strat[v]) {
      for (const auto& e : m.succ[v])
        if (x.test(e.to)) {
          strat[v] = e.to;
          break;
        }
      if (!strat[v])
        strat[v] = m.succ[v].front().to;
    }
  return AlmostSure{std::move(x), std::move(strat)};
}

MarkovChain policy_chain(const Game& m, const std::vector<std::optional<VertexId>>& policy) {
  MarkovChain c;
  c.num_colours = m.num_colours();
  c.rows.resize(m.num_vertices());
  for (VertexId v = 0; v < m.num_vertices(); ++v) {
    c.state.emplace_back(0, v);
    c.colour.push_back(m.colour[v]);
    if (m.is_stochastic(v))
      for (const auto& e : m.succ[v])
        c.rows[v].emplace_back(e.to, *e.prob);
    else
      c.rows[v].emplace_back(*policy[v], Rational(1));
  }
  return c;
}

}  // namespace

VertexSet mdp_almost_sure_reach(const Mdp& m, const VertexSet& target) { return almost_sure(m.game, target).set; }

std::pair<VertexSet, std::vector<std::optional<VertexId>>> mdp_almost_sure_strategy(const Mdp& m,
                                                                                   const VertexSet& target) {
  AlmostSure a = almost_sure(m.game, target);
  return {std::move(a.set), std::move(a.strategy)};
}

ReachResult mdp_max_reach_with_strategy(const Mdp& mdp, const VertexSet& target) {
  const Game& m = mdp.game;
  const std::size_t n = m.num_vertices();
  if (target.size() != n)
    throw Error(ErrorCode::InvalidVertex, "target set has the wrong size");

  // Graph distance to the target; infinite means probability 0.
  std::vector<std::vector<VertexId>> pred(n);
  for (VertexId v = 0; v < n; ++v)
    for (const auto& e : m.succ[v])
      pred[e.to].push_back(v);
  constexpr std::size_t kFar = SIZE_MAX;
  std::vector<std::size_t> dist(n, kFar);
  std::deque<VertexId> queue;
  for (VertexId v = 0; v < n; ++v)
    if (target.test(v)) {
      dist[v] = 0;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    VertexId w = queue.front();
    queue.pop_front();
    for (auto v : pred[w])
      if (dist[v] == kFar) {
        dist[v] = dist[w] + 1;
        queue.push_back(v);
      }
  }

  AlmostSure one = almost_sure(m, target);
  std::vector<std::optional<VertexId>> policy(n);
  for (VertexId v = 0; v < n; ++v) {
    if (m.is_stochastic(v))
      continue;
    if (one.set.test(v)) {
      policy[v] = one.strategy[v];
      continue;
    }
    VertexId best = m.succ[v].front().to;
    for (const auto& e : m.succ[v])
      if (dist[e.to] < dist[best])
        best = e.to;
    policy[v] = best;
  }

  std::vector<char> flags(n, 0);
  for (VertexId v = 0; v < n; ++v)
    flags[v] = target.test(v);
  std::vector<Rational> value;
  while (true) {
    value = reach_probabilities(policy_chain(m, policy), flags);
    bool improved = false;
    for (VertexId v = 0; v < n; ++v) {
      if (m.is_stochastic(v) || target.test(v) || one.set.test(v))
        continue;
      const Rational& cur = value[*policy[v]];
      std::optional<VertexId> best;
      for (const auto& e : m.succ[v])
        if (value[e.to] > cur && (!best || value[e.to] > value[*best]))
          best = e.to;
      if (best) {
        policy[v] = best;
        improved = true;
      }
    }
    if (!improved)
      break;
  }

  // Bellman optimality of a value that some policy attains.
  for (VertexId v = 0; v < n; ++v) {
    if (target.test(v)) {
      if (value[v] != 1)
        throw std::logic_error("max-reach: target state below 1");
      continue;
    }
    Rational expect = 0;
    if (m.is_stochastic(v)) {
      for (const auto& e : m.succ[v])
        expect += *e.prob * value[e.to];
    } else {
      expect = value[m.succ[v].front().to];
      for (const auto& e : m.succ[v])
        if (value[e.to] > expect)
          expect = value[e.to];
    }
    if (expect != value[v])
      throw std::logic_error("max-reach: Bellman check failed at " + m.vertex_names[v]);
  }
  return ReachResult{std::move(value), std::move(policy)};
}

std::vector<Rational> mdp_max_reach(const Mdp& m, const VertexSet& target) {
  return mdp_max_reach_with_strategy(m, target).value;
}

std::vector<Rational> mdp_value_omega(const Mdp& m) {
  require_prefix_independent(m.game);
  VertexSet t = union_ecs_with_payoff(m.game, {1}, m.game.all_vertices());
  return mdp_max_reach(m, t);
}

}  // namespace smg
