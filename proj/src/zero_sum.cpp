#include "smg/zero_sum.hpp"

#include "smg/objectives.hpp"

#include <stdexcept>

namespace smg {

Game coalition_game(const Game& g, int i) {
  Game c = g;
  c.name = g.name + "-coalition" + std::to_string(i);
  c.mode = Mode::Explicit;
  c.players = 2;
  for (auto& o : c.owner)
    if (o != kStochastic)
      o = o == i ? 0 : 1;
  const Objective& mine = g.objectives.at(i);
  c.objectives = {mine, complement(mine, g.used_colours())};
  c.seal();
  return c;
}

std::uint64_t positional_strategy_count(const Game& g, int player) {
  std::uint64_t n = 1;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.owner[v] != player)
      continue;
    std::uint64_t d = g.succ[v].size();
    if (n > UINT64_MAX / d)
      return UINT64_MAX;
    n *= d;
  }
  return n;
}

namespace {

bool positional_side(ObjectiveKind k) {
  return k == ObjectiveKind::Reach || k == ObjectiveKind::Buchi || k == ObjectiveKind::CoBuchi ||
         k == ObjectiveKind::Parity || k == ObjectiveKind::Rabin;
}

void check_guard(const Game& g, int player, std::uint64_t guard) {
  std::uint64_t n = positional_strategy_count(g, player);
  if (n > guard)
    throw Error(ErrorCode::TooLarge, "player " + std::to_string(player) + " has more than " + std::to_string(guard) +
                                         " positional strategies");
}

bool dominates(const std::vector<Rational>& a, const std::vector<Rational>& b, bool larger) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (larger ? a[k] < b[k] : a[k] > b[k])
      return false;
  return true;
}

// Best guaranteed value over the positional strategies of `player`, with the
// opponent's exact best response computed in the MDP. Values are player 0's.
std::pair<std::vector<Rational>, std::optional<PositionalChoice>> side_values(const Game& g, int player) {
  const int other = 1 - player;
  const bool maximise = player == 0;
  std::optional<std::vector<Rational>> best;
  std::optional<std::vector<Rational>> best_strategy_values;
  PositionalChoice best_choice;
  for_each_positional(g, player, [&](const PositionalChoice& choice) {
    Mdp m = positional_mdp(g, choice, other);
    std::vector<Rational> r = mdp_value_omega(m);
    if (other == 1)
      for (auto& x : r)
        x = 1 - x;
    if (!best) {
      best = r;
      best_strategy_values = r;
      best_choice = choice;
      return;
    }
    for (std::size_t k = 0; k < r.size(); ++k)
      if (maximise ? r[k] > (*best)[k] : r[k] < (*best)[k])
        (*best)[k] = r[k];
    if (dominates(r, *best_strategy_values, maximise) && r != *best_strategy_values) {
      best_strategy_values = r;
      best_choice = choice;
    }
  });
  std::optional<PositionalChoice> optimal;
  if (*best_strategy_values == *best)
    optimal = best_choice;
  return {std::move(*best), std::move(optimal)};
}

}  // namespace

ValueTable s2g_values(const Game& g, std::uint64_t guard) {
  if (g.players != 2 || g.objectives.size() != 2)
    throw Error(ErrorCode::UnsupportedObjective, "s2g_values needs a two-player game");
  require_prefix_independent(g);
  const ObjectiveKind k0 = g.objectives[0].kind, k1 = g.objectives[1].kind;
  ValueTable t;
  if (k0 == ObjectiveKind::Muller || k1 == ObjectiveKind::Muller) {
    LarProduct lar = muller_to_parity_game(g);
    ValueTable inner = s2g_values(lar.game, guard);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      t.value.push_back(inner.value[lar.entry[v]]);
    if (inner.lower) {
      t.lower.emplace();
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        t.lower->push_back((*inner.lower)[lar.entry[v]]);
    }
    if (inner.upper) {
      t.upper.emplace();
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        t.upper->push_back((*inner.upper)[lar.entry[v]]);
    }
    return t;
  }
  const bool use_sigma = positional_side(k0);
  const bool use_tau = positional_side(k1);
  if (!use_sigma && !use_tau)
    throw Error(ErrorCode::UnsupportedObjective, "no side of the game has positional optimal strategies");
  if (use_sigma) {
    check_guard(g, 0, guard);
    auto [v, s] = side_values(g, 0);
    t.lower = std::move(v);
    t.sigma = std::move(s);
  }
  if (use_tau) {
    check_guard(g, 1, guard);
    auto [v, s] = side_values(g, 1);
    t.upper = std::move(v);
    t.tau = std::move(s);
  }
  if (t.lower && t.upper && *t.lower != *t.upper)
    throw std::logic_error("zero-sum game is not determined on positional strategies");
  t.value = t.lower ? *t.lower : *t.upper;
  return t;
}

VertexSet value_positive_set(const Game& g, int i, std::uint64_t guard) {
  ValueTable t = s2g_values(coalition_game(g, i), guard);
  VertexSet w = g.empty_vertices();
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (t.value[v] > 0)
      w.set(v);
  return w;
}

VertexSet almost_sure_buchi(const Game& g, const VertexSet& f) {
  const std::size_t n = g.num_vertices();
  auto all_in = [&](VertexId v, const VertexSet& s) {
    for (const auto& e : g.succ[v])
      if (!s.test(e.to))
        return false;
    return true;
  };
  auto some_in = [&](VertexId v, const VertexSet& s) {
    for (const auto& e : g.succ[v])
      if (s.test(e.to))
        return true;
    return false;
  };
  VertexSet y = g.all_vertices();
  while (true) {
    VertexSet cpre(n);
    for (VertexId v = 0; v < n; ++v)
      if (f.test(v) && (g.owner[v] == 0 ? some_in(v, y) : all_in(v, y)))
        cpre.set(v);
    VertexSet x = cpre;
    bool grew = true;
    while (grew) {
      grew = false;
      for (VertexId v = 0; v < n; ++v) {
        if (x.test(v))
          continue;
        bool ok;
        if (g.owner[v] == 0)
          ok = some_in(v, x);
        else if (g.owner[v] == 1)
          ok = all_in(v, x);
        else
          ok = all_in(v, y) && some_in(v, x);
        if (ok) {
          x.set(v);
          grew = true;
        }
      }
    }
    if (x == y)
      return y;
    y = x;
  }
}

}  // namespace smg
