#include "smg/analysis.hpp"

#include "smg/graph.hpp"
#include "smg/objectives.hpp"

#include <algorithm>

namespace smg {

namespace {

std::vector<char> as_flags(const VertexSet& s) {
  std::vector<char> in(s.size(), 0);
  for (auto v = s.find_first(); v != VertexSet::npos; v = s.find_next(v))
    in[v] = 1;
  return in;
}

// Largest subset of x closed under the subarena rules.
VertexSet prune_to_subarena(const Game& g, VertexSet x) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto v = x.find_first(); v != VertexSet::npos; v = x.find_next(v)) {
      bool any = false, all = true;
      for (const auto& e : g.succ[v]) {
        if (x.test(e.to))
          any = true;
        else
          all = false;
      }
      if (!any || (g.is_stochastic(static_cast<VertexId>(v)) && !all)) {
        x.reset(v);
        changed = true;
      }
    }
  }
  return x;
}

VertexSet reach_within(const Game& g, const VertexSet& u, std::size_t from, bool forward) {
  VertexSet seen(u.size());
  std::vector<std::size_t> stack{from};
  seen.set(from);
  std::vector<std::vector<VertexId>> pred;
  if (!forward) {
    pred.resize(g.num_vertices());
    for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v))
      for (const auto& e : g.succ[v])
        if (u.test(e.to))
          pred[e.to].push_back(static_cast<VertexId>(v));
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    auto visit = [&](std::size_t w) {
      if (u.test(w) && !seen.test(w)) {
        seen.set(w);
        stack.push_back(w);
      }
    };
    if (forward)
      for (const auto& e : g.succ[v])
        visit(e.to);
    else
      for (auto w : pred[v])
        visit(w);
  }
  return seen;
}

void sort_members(std::vector<VertexSet>& m) {
  std::sort(m.begin(), m.end(), [](const VertexSet& a, const VertexSet& b) { return a.find_first() < b.find_first(); });
}

EndComponentSet make_set(const Game& g, std::vector<VertexSet> members) {
  EndComponentSet out;
  out.all = g.empty_vertices();
  for (const auto& m : members)
    out.all |= m;
  out.members = std::move(members);
  return out;
}

}  // namespace

std::vector<VertexSet> strongly_connected_components(const Game& g, const VertexSet& within) {
  auto comps = graph::tarjan(static_cast<std::uint32_t>(g.num_vertices()), as_flags(within),
                             [&](std::uint32_t v, auto&& f) {
                               for (const auto& e : g.succ[v])
                                 f(e.to);
                             });
  std::vector<VertexSet> out;
  for (const auto& c : comps) {
    VertexSet s(g.num_vertices());
    for (auto v : c)
      s.set(v);
    out.push_back(std::move(s));
  }
  return out;
}

bool is_strongly_connected(const Game& g, const VertexSet& u) {
  auto first = u.find_first();
  if (first == VertexSet::npos)
    return false;
  return reach_within(g, u, first, true) == u && reach_within(g, u, first, false) == u;
}

bool is_end_component(const Game& g, const VertexSet& u) { return is_subarena(g, u) && is_strongly_connected(g, u); }

EndComponentSet maximal_end_components(const Game& g, const VertexSet& s) {
  std::vector<VertexSet> work{s}, found;
  while (!work.empty()) {
    VertexSet x = prune_to_subarena(g, work.back());
    work.pop_back();
    if (x.none())
      continue;
    auto comps = strongly_connected_components(g, x);
    if (comps.size() == 1) {
      found.push_back(std::move(x));
      continue;
    }
    for (auto& c : comps)
      work.push_back(std::move(c));
  }
  sort_members(found);
  return make_set(g, std::move(found));
}

EndComponentSet all_end_components_brute(const Game& g, const VertexSet& s, std::size_t guard) {
  std::vector<VertexId> list;
  for (auto v = s.find_first(); v != VertexSet::npos; v = s.find_next(v))
    list.push_back(static_cast<VertexId>(v));
  const std::size_t k = list.size();
  if (k > guard || k > 30)
    throw Error(ErrorCode::TooLarge, std::to_string(k) + " vertices exceed the brute-force guard");
  std::vector<int> pos(g.num_vertices(), -1);
  for (std::size_t i = 0; i < k; ++i)
    pos[list[i]] = static_cast<int>(i);
  std::vector<std::uint32_t> out_mask(k, 0), in_mask(k, 0);
  std::vector<char> leaks(k, 0), stoch(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    stoch[i] = g.is_stochastic(list[i]);
    for (const auto& e : g.succ[list[i]]) {
      if (pos[e.to] < 0) {
        leaks[i] = 1;
        continue;
      }
      out_mask[i] |= 1u << pos[e.to];
      in_mask[pos[e.to]] |= 1u << i;
    }
  }
  auto closure = [&](std::uint32_t u, const std::vector<std::uint32_t>& adj) {
    std::uint32_t seen = u & (~u + 1), frontier = seen;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1)
        next |= adj[__builtin_ctz(f)];
      next &= u & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  };
  std::vector<VertexSet> members;
  for (std::uint64_t m = 1; m < (std::uint64_t(1) << k); ++m) {
    std::uint32_t u = static_cast<std::uint32_t>(m);
    bool ok = true;
    for (std::uint32_t f = u; f && ok; f &= f - 1) {
      int i = __builtin_ctz(f);
      if (!(out_mask[i] & u))
        ok = false;
      else if (stoch[i] && (leaks[i] || (out_mask[i] & ~u)))
        ok = false;
    }
    if (!ok || closure(u, out_mask) != u || closure(u, in_mask) != u)
      continue;
    VertexSet set(g.num_vertices());
    for (std::uint32_t f = u; f; f &= f - 1)
      set.set(list[__builtin_ctz(f)]);
    members.push_back(std::move(set));
  }
  return make_set(g, std::move(members));
}

namespace {

void require_parity(const Game& g) {
  for (const auto& o : g.objectives)
    if (o.kind != ObjectiveKind::Parity)
      throw Error(ErrorCode::UnsupportedObjective, "find_ec_parity needs parity objectives");
}

int priority_of(const Objective& o, ColourId c) {
  int k = c < o.priority.size() ? o.priority[c] : -1;
  if (k < 0)
    throw Error(ErrorCode::UnsupportedObjective, "colour without a priority");
  return k;
}

VertexSet find_ec_rec(const Game& g, const std::vector<int>& x, const VertexSet& from) {
  VertexSet z = g.empty_vertices();
  for (const auto& u : maximal_end_components(g, from).members) {
    std::vector<int> least(g.players, -1);
    for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v))
      for (int i = 0; i < g.players; ++i) {
        int k = priority_of(g.objectives[i], g.colour[v]);
        if (least[i] < 0 || k < least[i])
          least[i] = k;
      }
    std::vector<int> wrong;
    for (int i = 0; i < g.players; ++i)
      if (least[i] % 2 == x[i] % 2)
        wrong.push_back(i);
    if (wrong.empty()) {
      z |= u;
      continue;
    }
    VertexSet y = u;
    for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v))
      for (int i : wrong)
        if (priority_of(g.objectives[i], g.colour[v]) <= least[i])
          y.reset(v);
    if (y.any())
      z |= find_ec_rec(g, x, y);
  }
  return z;
}

void check_payoff_length(const Game& g, const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != g.players)
    throw Error(ErrorCode::InvalidPayoff, "payoff vector length differs from the player count");
}

// A conjunction of Streett pairs, sets that must be met infinitely often, and
// an upper bound on the colours seen infinitely often.
struct Clause {
  std::vector<ColourPair> pairs;
  std::vector<ColourSet> hit;
  ColourSet allowed;
};

Clause trivial_clause(std::size_t n) {
  Clause c;
  c.allowed = ~ColourSet(n);
  return c;
}

std::vector<ColourPair> parity_pairs(const Objective& o, std::size_t n, int shift) {
  // With priorities shifted by `shift`, the play wins iff for every odd k seen
  // infinitely often some smaller even priority is seen as well.
  int top = -1;
  for (int k : o.priority)
    top = std::max(top, k + shift);
  std::vector<ColourPair> pairs;
  for (int k = 1; k <= top; k += 2) {
    ColourPair p{ColourSet(n), ColourSet(n)};
    for (std::size_t c = 0; c < o.priority.size(); ++c) {
      if (o.priority[c] < 0)
        continue;
      int pk = o.priority[c] + shift;
      if (pk == k)
        p.first.set(c);
      else if (pk < k && pk % 2 == 0)
        p.second.set(c);
    }
    if (p.first.any())
      pairs.push_back(std::move(p));
  }
  return pairs;
}

// Disjunctive normal form of "obj is won" (or lost); nullopt for Muller.
std::optional<std::vector<Clause>> dnf(const Objective& o, bool win, std::size_t n) {
  std::vector<Clause> out;
  auto hit = [&](const ColourSet& f) {
    Clause c = trivial_clause(n);
    c.hit.push_back(f);
    return c;
  };
  auto within = [&](const ColourSet& f) {
    Clause c = trivial_clause(n);
    c.allowed = f;
    return c;
  };
  switch (o.kind) {
    case ObjectiveKind::Reach:
    case ObjectiveKind::Buchi:
      out.push_back(win ? hit(o.set) : within(~o.set));
      break;
    case ObjectiveKind::CoBuchi:
      out.push_back(win ? within(o.set) : hit(~o.set));
      break;
    case ObjectiveKind::Parity: {
      Clause c = trivial_clause(n);
      c.pairs = parity_pairs(o, n, win ? 0 : 1);
      out.push_back(std::move(c));
      break;
    }
    case ObjectiveKind::Streett:
    case ObjectiveKind::Rabin: {
      bool streett_form = (o.kind == ObjectiveKind::Streett) == win;
      if (streett_form) {
        Clause c = trivial_clause(n);
        c.pairs = o.pairs;
        out.push_back(std::move(c));
      } else {
        for (const auto& p : o.pairs) {
          Clause c = trivial_clause(n);
          c.hit.push_back(p.first);
          c.allowed = ~p.second;
          out.push_back(std::move(c));
        }
      }
      break;
    }
    case ObjectiveKind::Muller:
      return std::nullopt;
  }
  return out;
}

VertexSet solve_clause(const Game& g, const Clause& c, const VertexSet& from) {
  VertexSet x = from;
  for (auto v = x.find_first(); v != VertexSet::npos; v = x.find_next(v))
    if (!c.allowed.test(g.colour[v]))
      x.reset(v);
  VertexSet z = g.empty_vertices();
  for (const auto& u : maximal_end_components(g, x).members) {
    ColourSet inf = g.colours_of(u);
    bool dead = false;
    for (const auto& h : c.hit)
      if (!h.intersects(inf))
        dead = true;
    if (dead)
      continue;
    ColourSet drop(g.num_colours());
    for (const auto& p : c.pairs)
      if (p.first.intersects(inf) && !p.second.intersects(inf))
        drop |= p.first;
    if (drop.none()) {
      z |= u;
      continue;
    }
    VertexSet y = u;
    for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v))
      if (drop.test(g.colour[v]))
        y.reset(v);
    if (y.any())
      z |= solve_clause(g, c, y);
  }
  return z;
}

VertexSet brute_within_mecs(const Game& g, const std::vector<int>& x, const VertexSet& s, std::size_t guard) {
  VertexSet z = g.empty_vertices();
  for (const auto& m : maximal_end_components(g, s).members)
    for (const auto& u : all_end_components_brute(g, m, guard).members)
      if (ec_payoff(g, u) == x)
        z |= u;
  return z;
}

}  // namespace

VertexSet find_ec_parity(const Game& g, const std::vector<int>& x) {
  return find_ec_parity(g, x, g.all_vertices());
}

VertexSet find_ec_parity(const Game& g, const std::vector<int>& x, const VertexSet& s) {
  require_parity(g);
  check_payoff_length(g, x);
  return find_ec_rec(g, x, s);
}

VertexSet union_ecs_with_payoff(const Game& g, const std::vector<int>& x, const VertexSet& s, std::size_t guard) {
  check_payoff_length(g, x);
  if (s.none())
    return g.empty_vertices();
  bool all_parity = std::all_of(g.objectives.begin(), g.objectives.end(),
                                [](const Objective& o) { return o.kind == ObjectiveKind::Parity; });
  if (all_parity)
    return find_ec_rec(g, x, s);

  const std::size_t n = g.num_colours();
  std::vector<Clause> combined{trivial_clause(n)};
  bool use_dnf = true;
  for (int i = 0; i < g.players && use_dnf; ++i) {
    auto alts = dnf(g.objectives[i], x[i] == 1, n);
    if (!alts || combined.size() * alts->size() > 4096) {
      use_dnf = false;
      break;
    }
    std::vector<Clause> next;
    for (const auto& c : combined)
      for (const auto& a : *alts) {
        Clause m = c;
        m.pairs.insert(m.pairs.end(), a.pairs.begin(), a.pairs.end());
        m.hit.insert(m.hit.end(), a.hit.begin(), a.hit.end());
        m.allowed &= a.allowed;
        next.push_back(std::move(m));
      }
    combined = std::move(next);
  }
  if (!use_dnf)
    return brute_within_mecs(g, x, s, guard);
  VertexSet z = g.empty_vertices();
  for (const auto& c : combined)
    z |= solve_clause(g, c, s);
  return z;
}

VertexSet union_ecs_with_payoff_brute(const Game& g, const std::vector<int>& x, const VertexSet& s,
                                      std::size_t guard) {
  check_payoff_length(g, x);
  VertexSet z = g.empty_vertices();
  for (const auto& u : all_end_components_brute(g, s, guard).members)
    if (ec_payoff(g, u) == x)
      z |= u;
  return z;
}

}  // namespace smg
