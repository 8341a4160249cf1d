#include "smg/equilibria.hpp"

#include "smg/analysis.hpp"
#include "smg/graph.hpp"
#include "smg/objectives.hpp"

#include <functional>

namespace smg {

namespace {

void require_initial(const Game& g) {
  if (!g.initial)
    throw Error(ErrorCode::InvalidVertex, "game has no initial vertex");
}

bool in_bounds(const std::vector<Rational>& z, const std::vector<Rational>& x, const std::vector<Rational>& y) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i < x.size() && z[i] < x[i])
      return false;
    if (i < y.size() && z[i] > y[i])
      return false;
  }
  return true;
}

void check_bound_sizes(const Game& g, const std::vector<Rational>& x, const std::vector<Rational>& y) {
  auto k = static_cast<std::size_t>(g.players);
  if ((!x.empty() && x.size() != k) || (!y.empty() && y.size() != k))
    throw Error(ErrorCode::ProfileMismatch, "threshold vector length differs from the player count");
}

void finish_verdict(EquilibriumVerdict& v) {
  v.is_nash = true;
  for (std::size_t i = 0; i < v.payoff.size(); ++i)
    if (v.best_response[i] > v.payoff[i]) {
      v.is_nash = false;
      v.violating_player = static_cast<int>(i);
      break;
    }
}

}  // namespace

EquilibriumVerdict verify_nash(const Game& g, const StrategyProfile& p, const std::vector<Rational>& x,
                               const std::vector<Rational>& y) {
  require_initial(g);
  require_prefix_independent(g);
  check_bound_sizes(g, x, y);
  EquilibriumVerdict v;
  v.payoff = chain_payoffs(induced_chain(g, p), g.objectives);
  for (int i = 0; i < g.players; ++i) {
    if (v.payoff[i] == 1) {
      v.best_response.emplace_back(1);
      continue;
    }
    Mdp m = induced_mdp(g, p, i);
    v.best_response.push_back(mdp_value_omega(m)[m.initial]);
  }
  finish_verdict(v);
  v.within_bounds = in_bounds(v.payoff, x, y);
  return v;
}

EquilibriumVerdict verify_stationary_nash(const Game& g, const Stationary& p, const std::vector<Rational>& x,
                                          const std::vector<Rational>& y) {
  return verify_nash(g, StrategyProfile{p}, x, y);
}

namespace {

void check_profile_guard(const Game& g, std::uint64_t guard) {
  std::uint64_t n = 1;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.is_stochastic(v))
      continue;
    std::uint64_t d = g.succ[v].size();
    if (n > guard / d)
      throw Error(ErrorCode::TooLarge, "positional strategy space exceeds " + std::to_string(guard));
    n *= d;
  }
}

// Best-response check of a complete positional profile at the initial vertex.
bool positional_is_nash(const Game& g, const PositionalChoice& choice, const std::vector<Rational>& z,
                        std::vector<Rational>* r) {
  bool ok = true;
  for (int i = 0; i < g.players; ++i) {
    if (z[i] == 1) {
      if (r)
        r->emplace_back(1);
      continue;
    }
    Mdp m = positional_mdp(g, choice, i);
    Rational ri = mdp_value_omega(m)[*g.initial];
    if (r)
      r->push_back(ri);
    if (ri > z[i]) {
      ok = false;
      if (!r)
        return false;
    }
  }
  return ok;
}

EquilibriumVerdict positional_verdict(const Game& g, const PositionalChoice& choice, const std::vector<Rational>& z,
                                      const std::vector<Rational>& x, const std::vector<Rational>& y) {
  EquilibriumVerdict v;
  v.payoff = z;
  positional_is_nash(g, choice, z, &v.best_response);
  finish_verdict(v);
  v.within_bounds = in_bounds(z, x, y);
  return v;
}

class PosNeSearch {
 public:
  PosNeSearch(const Game& g, const std::vector<Rational>& x, const std::vector<Rational>& y)
      : g_(g), x_(x), y_(y), n_(g.num_vertices()), choice_(n_) {
    VertexSet seen = g.empty_vertices();
    std::vector<VertexId> stack{*g.initial};
    seen.set(*g.initial);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (const auto& e : g.succ[v])
        if (!seen.test(e.to)) {
          seen.set(e.to);
          stack.push_back(e.to);
        }
    }
    reachable_ = std::move(seen);
  }

  bool run() { return descend(); }

  PosNeResult result;

 private:
  // Vertices reachable under the partial profile; unassigned controlled
  // vertices are not expanded.
  VertexSet on_path() const {
    VertexSet seen = g_.empty_vertices();
    std::vector<VertexId> stack{*g_.initial};
    seen.set(*g_.initial);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      auto visit = [&](VertexId w) {
        if (!seen.test(w)) {
          seen.set(w);
          stack.push_back(w);
        }
      };
      if (g_.is_stochastic(v)) {
        for (const auto& e : g_.succ[v])
          visit(e.to);
      } else if (choice_[v]) {
        visit(*choice_[v]);
      }
    }
    return seen;
  }

  // True if some bottom SCC already fixed by the partial profile violates a
  // 0/1 bound; such a component is reached with positive probability.
  bool violates_bounds(const VertexSet& path) const {
    std::vector<char> in(n_, 0);
    for (VertexId v = 0; v < n_; ++v)
      in[v] = path.test(v) && (g_.is_stochastic(v) || choice_[v]);
    auto succ = [&](std::uint32_t v, auto&& f) {
      if (g_.is_stochastic(v)) {
        for (const auto& e : g_.succ[v])
          f(e.to);
      } else {
        f(*choice_[v]);
      }
    };
    auto comps = graph::tarjan(static_cast<std::uint32_t>(n_), in, succ);
    std::vector<int> comp_of(n_, -1);
    for (std::size_t k = 0; k < comps.size(); ++k)
      for (auto v : comps[k])
        comp_of[v] = static_cast<int>(k);
    for (std::size_t k = 0; k < comps.size(); ++k) {
      bool closed = true;
      ColourSet inf = g_.empty_colours();
      for (auto v : comps[k]) {
        inf.set(g_.colour[v]);
        succ(v, [&](std::uint32_t w) {
          if (comp_of[w] != static_cast<int>(k))
            closed = false;
        });
      }
      if (!closed)
        continue;
      for (int i = 0; i < g_.players; ++i) {
        bool win = wins_inf(g_.objectives[i], inf);
        if (!x_.empty() && x_[i] == 1 && !win)
          return true;
        if (!y_.empty() && y_[i] == 0 && win)
          return true;
      }
    }
    return false;
  }

  bool descend() {
    VertexSet path = on_path();
    std::optional<VertexId> next;
    for (auto v = path.find_first(); v != VertexSet::npos; v = path.find_next(v))
      if (!g_.is_stochastic(static_cast<VertexId>(v)) && !choice_[v]) {
        next = static_cast<VertexId>(v);
        break;
      }
    if (violates_bounds(path))
      return false;
    if (!next)
      return complete(path);
    for (const auto& e : g_.succ[*next]) {
      choice_[*next] = e.to;
      if (descend())
        return true;
    }
    choice_[*next] = std::nullopt;
    return false;
  }

  bool complete(const VertexSet& path) {
    ++result.candidates;
    auto z = chain_payoffs(positional_chain(g_, choice_, *g_.initial), g_.objectives);
    if (!in_bounds(z, x_, y_))
      return false;
    // Off-path vertices only matter where a deviation can lead.
    std::vector<VertexId> off;
    for (VertexId v = 0; v < n_; ++v) {
      if (g_.is_stochastic(v) || path.test(v))
        continue;
      if (reachable_.test(v))
        off.push_back(v);
      else
        choice_[v] = g_.succ[v][0].to;
    }
    std::vector<std::size_t> idx(off.size(), 0);
    for (auto v : off)
      choice_[v] = g_.succ[v][0].to;
    while (true) {
      if (positional_is_nash(g_, choice_, z, nullptr)) {
        result.profile = Positional{choice_};
        result.verdict = positional_verdict(g_, choice_, z, x_, y_);
        return true;
      }
      std::size_t k = off.size();
      bool advanced = false;
      while (k > 0) {
        --k;
        VertexId v = off[k];
        if (++idx[k] < g_.succ[v].size()) {
          choice_[v] = g_.succ[v][idx[k]].to;
          advanced = true;
          break;
        }
        idx[k] = 0;
        choice_[v] = g_.succ[v][0].to;
      }
      if (!advanced)
        break;
    }
    for (VertexId v = 0; v < n_; ++v)
      if (!g_.is_stochastic(v) && !path.test(v))
        choice_[v] = std::nullopt;
    return false;
  }

  const Game& g_;
  const std::vector<Rational>& x_;
  const std::vector<Rational>& y_;
  std::size_t n_;
  PositionalChoice choice_;
  VertexSet reachable_;
};

}  // namespace

PosNeResult decide_posne(const Game& g, const std::vector<Rational>& x, const std::vector<Rational>& y,
                         std::uint64_t guard) {
  require_initial(g);
  require_prefix_independent(g);
  check_bound_sizes(g, x, y);
  check_profile_guard(g, guard);
  PosNeSearch search(g, x, y);
  search.run();
  return std::move(search.result);
}

std::vector<std::pair<Positional, EquilibriumVerdict>> positional_nash_profiles(const Game& g, std::uint64_t guard) {
  require_initial(g);
  require_prefix_independent(g);
  check_profile_guard(g, guard);
  std::vector<VertexId> owned;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (!g.is_stochastic(v))
      owned.push_back(v);
  PositionalChoice choice(g.num_vertices());
  std::vector<std::size_t> idx(owned.size(), 0);
  for (auto v : owned)
    choice[v] = g.succ[v][0].to;
  std::vector<std::pair<Positional, EquilibriumVerdict>> out;
  while (true) {
    auto z = chain_payoffs(positional_chain(g, choice, *g.initial), g.objectives);
    if (positional_is_nash(g, choice, z, nullptr))
      out.emplace_back(Positional{choice}, positional_verdict(g, choice, z, {}, {}));
    std::size_t k = owned.size();
    bool advanced = false;
    while (k > 0) {
      --k;
      VertexId v = owned[k];
      if (++idx[k] < g.succ[v].size()) {
        choice[v] = g.succ[v][idx[k]].to;
        advanced = true;
        break;
      }
      idx[k] = 0;
      choice[v] = g.succ[v][0].to;
    }
    if (!advanced)
      break;
  }
  return out;
}

StrQualResult decide_strqualne(const Game& g, const std::vector<int>& x, std::uint64_t guard) {
  require_initial(g);
  require_prefix_independent(g);
  if (x.size() != static_cast<std::size_t>(g.players))
    throw Error(ErrorCode::InvalidPayoff, "payoff vector length differs from the player count");
  const std::size_t n = g.num_vertices();
  StrQualResult res;
  res.instance.x = x;
  VertexSet z = g.all_vertices();
  for (int i = 0; i < g.players; ++i)
    if (x[i] == 0)
      z &= ~value_positive_set(g, i, guard);
  // Plays have to stay inside z; keep its largest subarena.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto v = z.find_first(); v != VertexSet::npos; v = z.find_next(v)) {
      bool keep = g.is_stochastic(static_cast<VertexId>(v)) ? true : false;
      for (const auto& e : g.succ[v]) {
        if (g.is_stochastic(static_cast<VertexId>(v)) && !z.test(e.to))
          keep = false;
        if (!g.is_stochastic(static_cast<VertexId>(v)) && z.test(e.to))
          keep = true;
      }
      if (!keep) {
        z.reset(v);
        changed = true;
      }
    }
  }
  res.instance.z = z;
  res.instance.t = g.empty_vertices();
  res.witness.assign(n, std::nullopt);
  if (!z.test(*g.initial))
    return res;
  res.instance.t = union_ecs_with_payoff(g, x, z);

  Mdp& gx = res.instance.gx;
  gx.game = restrict(g, z);
  gx.game.name = g.name + "-merged";
  gx.game.players = 1;
  gx.game.mode = Mode::Explicit;
  gx.game.objectives.clear();
  for (auto& o : gx.game.owner)
    if (o != kStochastic)
      o = 0;
  std::vector<VertexId> local(n, UINT32_MAX);
  for (auto v = z.find_first(); v != VertexSet::npos; v = z.find_next(v)) {
    local[v] = static_cast<VertexId>(gx.origin.size());
    gx.origin.emplace_back(0, static_cast<VertexId>(v));
  }
  gx.initial = local[*g.initial];
  gx.game.initial = gx.initial;
  VertexSet target = gx.game.empty_vertices();
  for (auto v = res.instance.t.find_first(); v != VertexSet::npos; v = res.instance.t.find_next(v))
    target.set(local[v]);
  auto [as, strategy] = mdp_almost_sure_strategy(gx, target);
  res.answer = as.test(gx.initial);
  if (res.answer)
    for (VertexId u = 0; u < gx.origin.size(); ++u)
      if (strategy[u])
        res.witness[gx.origin[u].second] = gx.origin[*strategy[u]].second;
  return res;
}

namespace {

struct CoalitionTables {
  std::vector<std::vector<Rational>> value;  // value[i][v] for player i
  std::vector<std::optional<PositionalChoice>> tau;
};

CoalitionTables coalition_tables(const Game& g, std::uint64_t guard) {
  CoalitionTables t;
  for (int i = 0; i < g.players; ++i) {
    ValueTable vt = s2g_values(coalition_game(g, i), guard);
    t.value.push_back(std::move(vt.value));
    t.tau.push_back(std::move(vt.tau));
  }
  return t;
}

bool favourable(const Game& g, const Positional& base, const CoalitionTables& t) {
  MarkovChain c = induced_chain(g, base);
  auto pay = chain_payoffs_all(c, g.objectives);
  for (std::size_t s = 0; s < c.size(); ++s)
    for (int i = 0; i < g.players; ++i)
      if (pay[i][s] < t.value[i][c.state[s].second])
        return false;
  return true;
}

}  // namespace

bool check_favourable(const Game& g, const Positional& base, std::uint64_t guard) {
  require_initial(g);
  require_prefix_independent(g);
  to_finite_state(g, base);
  return favourable(g, base, coalition_tables(g, guard));
}

FiniteState construct_threat_equilibrium(const Game& g, const Positional& base, std::uint64_t guard) {
  require_initial(g);
  require_prefix_independent(g);
  to_finite_state(g, base);
  CoalitionTables t = coalition_tables(g, guard);
  if (!favourable(g, base, t))
    throw Error(ErrorCode::NotFavourable, "base profile is not favourable");
  for (int j = 0; j < g.players; ++j)
    if (!t.tau[j])
      throw Error(ErrorCode::UnsupportedObjective,
                  "no positional counter-strategy against player " + std::to_string(j));

  // Memory: 0 = start, 1 + u = previous vertex u on the path,
  // 1 + |V| + j = punishing player j.
  const std::size_t n = g.num_vertices();
  const std::size_t k = static_cast<std::size_t>(g.players);
  auto follow = [&](VertexId u) { return static_cast<MemoryState>(1 + u); };
  auto punish = [&](int j) { return static_cast<MemoryState>(1 + n + j); };
  FiniteState fs;
  fs.memory.size = 1 + n + k;
  fs.memory.initial = 0;
  fs.memory.update.assign(fs.memory.size, std::vector<MemoryState>(n));
  fs.choice.assign(fs.memory.size, std::vector<Distribution>(n));
  auto base_move = [&](VertexId v) { return Distribution{{*base.choice[v], Rational(1)}}; };
  auto threat_move = [&](int j, VertexId v) {
    if (g.owner[v] == j)
      return base_move(v);
    return Distribution{{*(*t.tau[j])[v], Rational(1)}};
  };
  for (VertexId v = 0; v < n; ++v) {
    fs.memory.update[0][v] = follow(v);
    if (!g.is_stochastic(v))
      fs.choice[0][v] = base_move(v);
  }
  for (VertexId u = 0; u < n; ++u) {
    MemoryState m = follow(u);
    for (VertexId v = 0; v < n; ++v) {
      int j = g.owner[u];
      bool deviated = j != kStochastic && *base.choice[u] != v;
      fs.memory.update[m][v] = deviated ? punish(j) : follow(v);
      if (!g.is_stochastic(v))
        fs.choice[m][v] = deviated ? threat_move(j, v) : base_move(v);
    }
  }
  for (int j = 0; j < g.players; ++j) {
    MemoryState m = punish(j);
    for (VertexId v = 0; v < n; ++v) {
      fs.memory.update[m][v] = m;
      if (!g.is_stochastic(v))
        fs.choice[m][v] = threat_move(j, v);
    }
  }
  return fs;
}

}  // namespace smg
