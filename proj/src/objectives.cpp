#include "smg/objectives.hpp"

#include "smg/analysis.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

namespace smg {

const char* objective_kind_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Reach: return "reach";
    case ObjectiveKind::Buchi: return "buchi";
    case ObjectiveKind::CoBuchi: return "cobuchi";
    case ObjectiveKind::Parity: return "parity";
    case ObjectiveKind::Streett: return "streett";
    case ObjectiveKind::Rabin: return "rabin";
    case ObjectiveKind::Muller: return "muller";
  }
  return "?";
}

Objective Objective::reach(ColourSet f) {
  Objective o;
  o.kind = ObjectiveKind::Reach;
  o.set = std::move(f);
  return o;
}

Objective Objective::buchi(ColourSet f) {
  Objective o;
  o.kind = ObjectiveKind::Buchi;
  o.set = std::move(f);
  return o;
}

Objective Objective::cobuchi(ColourSet f) {
  Objective o;
  o.kind = ObjectiveKind::CoBuchi;
  o.set = std::move(f);
  return o;
}

Objective Objective::parity(std::vector<int> priority) {
  Objective o;
  o.kind = ObjectiveKind::Parity;
  o.priority = std::move(priority);
  return o;
}

Objective Objective::streett(std::vector<ColourPair> pairs) {
  Objective o;
  o.kind = ObjectiveKind::Streett;
  o.pairs = std::move(pairs);
  return o;
}

Objective Objective::rabin(std::vector<ColourPair> pairs) {
  Objective o;
  o.kind = ObjectiveKind::Rabin;
  o.pairs = std::move(pairs);
  return o;
}

Objective Objective::muller(std::vector<ColourSet> family) {
  Objective o;
  o.kind = ObjectiveKind::Muller;
  o.family = std::move(family);
  return o;
}

void Objective::resize(std::size_t n) {
  set.resize(n);
  if (kind == ObjectiveKind::Parity)
    priority.resize(n, -1);
  for (auto& p : pairs) {
    p.first.resize(n);
    p.second.resize(n);
  }
  for (auto& f : family)
    f.resize(n);
}

bool Objective::operator==(const Objective& other) const {
  if (kind != other.kind)
    return false;
  switch (kind) {
    case ObjectiveKind::Reach:
    case ObjectiveKind::Buchi:
    case ObjectiveKind::CoBuchi:
      return set == other.set;
    case ObjectiveKind::Parity:
      return priority == other.priority;
    case ObjectiveKind::Streett:
    case ObjectiveKind::Rabin:
      if (pairs.size() != other.pairs.size())
        return false;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i].first != other.pairs[i].first || pairs[i].second != other.pairs[i].second)
          return false;
      return true;
    case ObjectiveKind::Muller: {
      auto a = family, b = other.family;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      return a == b;
    }
  }
  return false;
}

namespace {

ColourSet fit(const ColourSet& s, std::size_t n) {
  if (s.size() == n)
    return s;
  ColourSet t = s;
  t.resize(n);
  return t;
}

bool meets(const ColourSet& a, const ColourSet& b) {
  if (a.size() == b.size())
    return a.intersects(b);
  return fit(a, b.size()).intersects(b);
}

}  // namespace

bool wins_inf(const Objective& obj, const ColourSet& inf) {
  switch (obj.kind) {
    case ObjectiveKind::Reach:
    case ObjectiveKind::Buchi:
      return meets(obj.set, inf);
    case ObjectiveKind::CoBuchi:
      return inf.is_subset_of(fit(obj.set, inf.size()));
    case ObjectiveKind::Parity: {
      int best = -1;
      for (auto c = inf.find_first(); c != ColourSet::npos; c = inf.find_next(c)) {
        int k = c < obj.priority.size() ? obj.priority[c] : -1;
        if (k < 0)
          throw Error(ErrorCode::UnsupportedObjective, "colour without a priority");
        if (best < 0 || k < best)
          best = k;
      }
      return best >= 0 && best % 2 == 0;
    }
    case ObjectiveKind::Streett:
      for (const auto& p : obj.pairs)
        if (meets(p.first, inf) && !meets(p.second, inf))
          return false;
      return true;
    case ObjectiveKind::Rabin:
      for (const auto& p : obj.pairs)
        if (meets(p.first, inf) && !meets(p.second, inf))
          return true;
      return false;
    case ObjectiveKind::Muller:
      for (const auto& f : obj.family)
        if (fit(f, inf.size()) == inf)
          return true;
      return false;
  }
  return false;
}

std::vector<int> ec_payoff(const Game& g, const VertexSet& u) {
  if (!is_end_component(g, u))
    throw Error(ErrorCode::NotAnEndComponent, "vertex set is not an end component");
  ColourSet inf = g.colours_of(u);
  std::vector<int> z;
  for (const auto& o : g.objectives)
    z.push_back(wins_inf(o, inf) ? 1 : 0);
  return z;
}

std::vector<ColourSet> to_muller(const Objective& obj, const ColourSet& colours) {
  if (obj.kind == ObjectiveKind::Reach)
    throw Error(ErrorCode::UnsupportedObjective, "reach objectives are not prefix independent");
  if (obj.kind == ObjectiveKind::Muller)
    return obj.family;
  std::vector<std::size_t> ids;
  for (auto c = colours.find_first(); c != ColourSet::npos; c = colours.find_next(c))
    ids.push_back(c);
  if (ids.size() > 20)
    throw Error(ErrorCode::TooLarge, std::to_string(ids.size()) + " colours");
  std::vector<ColourSet> family;
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << ids.size()); ++mask) {
    ColourSet inf(colours.size());
    for (std::size_t k = 0; k < ids.size(); ++k)
      if (mask >> k & 1)
        inf.set(ids[k]);
    if (wins_inf(obj, inf))
      family.push_back(inf);
  }
  return family;
}

Objective complement(const Objective& obj, const ColourSet& used) {
  switch (obj.kind) {
    case ObjectiveKind::Reach:
    case ObjectiveKind::Buchi:
      return Objective::cobuchi(~obj.set);
    case ObjectiveKind::CoBuchi:
      return Objective::buchi(~obj.set);
    case ObjectiveKind::Parity: {
      auto prio = obj.priority;
      for (auto& k : prio)
        if (k >= 0)
          ++k;
      return Objective::parity(prio);
    }
    case ObjectiveKind::Streett:
      return Objective::rabin(obj.pairs);
    case ObjectiveKind::Rabin:
      return Objective::streett(obj.pairs);
    case ObjectiveKind::Muller: {
      if (used.count() > 16)
        throw Error(ErrorCode::TooLarge, "Muller complement over " + std::to_string(used.count()) + " colours");
      std::vector<ColourSet> rest;
      std::vector<std::size_t> ids;
      for (auto c = used.find_first(); c != ColourSet::npos; c = used.find_next(c))
        ids.push_back(c);
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << ids.size()); ++mask) {
        ColourSet inf(used.size());
        for (std::size_t k = 0; k < ids.size(); ++k)
          if (mask >> k & 1)
            inf.set(ids[k]);
        if (!wins_inf(obj, inf))
          rest.push_back(inf);
      }
      return Objective::muller(rest);
    }
  }
  return obj;
}

bool is_terminal_reach(const Game& g, const Objective& obj) {
  if (obj.kind != ObjectiveKind::Reach)
    return false;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (g.colour[v] < obj.set.size() && obj.set.test(g.colour[v]) && !g.is_terminal(v))
      return false;
  return true;
}

void require_prefix_independent(const Game& g) {
  for (std::size_t i = 0; i < g.objectives.size(); ++i)
    if (g.objectives[i].kind == ObjectiveKind::Reach && !is_terminal_reach(g, g.objectives[i]))
      throw Error(ErrorCode::UnsupportedObjective,
                  "player " + std::to_string(i) + " has a reach objective on non-terminal colours");
}

LarProduct muller_to_parity_game(const Game& g, std::size_t max_colours) {
  if (g.players != 2 || g.objectives.size() != 2)
    throw Error(ErrorCode::UnsupportedObjective, "LAR product expects a two-player game");
  ColourSet used = g.used_colours();
  std::vector<std::size_t> ids;
  std::vector<int> pos(g.num_colours(), -1);
  for (auto c = used.find_first(); c != ColourSet::npos; c = used.find_next(c)) {
    pos[c] = static_cast<int>(ids.size());
    ids.push_back(c);
  }
  const std::size_t n = ids.size();
  if (n > max_colours)
    throw Error(ErrorCode::TooLarge, "LAR over " + std::to_string(n) + " colours");

  // accepting[mask] over positions in `ids`
  std::vector<char> accepting(std::size_t(1) << n, 0);
  for (const auto& f : to_muller(g.objectives[0], used)) {
    std::uint32_t mask = 0;
    bool ok = true;
    for (auto c = f.find_first(); c != ColourSet::npos; c = f.find_next(c)) {
      if (c >= pos.size() || pos[c] < 0) {
        ok = false;
        break;
      }
      mask |= 1u << pos[c];
    }
    if (ok)
      accepting[mask] = 1;
  }

  LarProduct out;
  Game& p = out.game;
  p.name = g.name + "-lar";
  p.players = 2;
  std::vector<int> prio0;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    p.intern_colour("p" + std::to_string(k));
    prio0.push_back(static_cast<int>(k));
  }

  // A state is (vertex, record, hit); the record lists colour positions, most recent first.
  using Record = std::vector<std::uint8_t>;
  std::unordered_map<std::string, VertexId> index;
  std::deque<std::pair<VertexId, Record>> queue;
  std::vector<std::pair<VertexId, Record>> states;

  auto visit = [&](VertexId v, const Record& before) -> VertexId {
    std::uint8_t c = static_cast<std::uint8_t>(pos[g.colour[v]]);
    std::size_t h = std::find(before.begin(), before.end(), c) - before.begin();
    std::uint32_t mask = 0;
    for (std::size_t k = 0; k <= h; ++k)
      mask |= 1u << before[k];
    int priority = static_cast<int>(2 * (n - 1 - h) + (accepting[mask] ? 0 : 1));
    Record after;
    after.push_back(c);
    for (std::size_t k = 0; k < n; ++k)
      if (k != h)
        after.push_back(before[k]);
    std::string key = std::to_string(v) + ":" + std::string(after.begin(), after.end()) + ":" + std::to_string(h);
    auto it = index.find(key);
    if (it != index.end())
      return it->second;
    std::string name = g.vertex_names[v] + "|";
    for (auto x : after)
      name += std::to_string(x) + ".";
    name += std::to_string(h);
    VertexId id = p.add_vertex(name, g.owner[v], "p" + std::to_string(priority));
    index.emplace(key, id);
    out.base.push_back(v);
    states.emplace_back(v, after);
    queue.emplace_back(id, after);
    return id;
  };

  Record identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    out.entry.push_back(visit(v, identity));
  while (!queue.empty()) {
    auto [id, rec] = queue.front();
    queue.pop_front();
    VertexId v = out.base[id];
    for (const auto& e : g.succ[v]) {
      VertexId w = visit(e.to, rec);
      p.add_edge(id, w, e.prob);
    }
  }
  p.objectives.push_back(Objective::parity(prio0));
  auto prio1 = prio0;
  for (auto& k : prio1)
    ++k;
  p.objectives.push_back(Objective::parity(prio1));
  if (g.initial)
    p.initial = out.entry[*g.initial];
  p.seal();
  return out;
}

}  // namespace smg
