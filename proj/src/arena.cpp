#include "smg/arena.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace smg {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidVertex: return "InvalidVertex";
    case ErrorCode::InvalidPayoff: return "InvalidPayoff";
    case ErrorCode::UnsupportedObjective: return "UnsupportedObjective";
    case ErrorCode::NotAnEndComponent: return "NotAnEndComponent";
    case ErrorCode::NotASubarena: return "NotASubarena";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ProfileMismatch: return "ProfileMismatch";
    case ErrorCode::NotFavourable: return "NotFavourable";
    case ErrorCode::InvalidSupport: return "InvalidSupport";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::MalformedMachine: return "MalformedMachine";
    case ErrorCode::RosterMismatch: return "RosterMismatch";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
  }
  return "Error";
}

VertexId Game::add_vertex(const std::string& id, int owner_, const std::string& colour_name) {
  if (vertex_index_.count(id))
    throw Error(ErrorCode::InvalidVertex, "duplicate vertex '" + id + "'");
  VertexId v = static_cast<VertexId>(vertex_names.size());
  vertex_names.push_back(id);
  owner.push_back(owner_);
  colour.push_back(intern_colour(colour_name.empty() ? id : colour_name));
  succ.emplace_back();
  vertex_index_.emplace(id, v);
  return v;
}

void Game::add_edge(VertexId from, VertexId to, std::optional<Rational> p) {
  if (from >= num_vertices() || to >= num_vertices())
    throw Error(ErrorCode::InvalidVertex, "edge endpoint out of range");
  if (p)
    p->canonicalize();
  succ[from].push_back(Edge{to, std::move(p)});
}

VertexId Game::add_terminal(const std::string& id) {
  VertexId v = add_vertex(id, kStochastic);
  add_edge(v, v, Rational(1));
  return v;
}

ColourId Game::intern_colour(const std::string& c) {
  auto it = colour_index_.find(c);
  if (it != colour_index_.end())
    return it->second;
  ColourId id = static_cast<ColourId>(colour_names.size());
  colour_names.push_back(c);
  colour_index_.emplace(c, id);
  return id;
}

std::optional<VertexId> Game::find_vertex(const std::string& id) const {
  auto it = vertex_index_.find(id);
  if (it == vertex_index_.end())
    return std::nullopt;
  return it->second;
}

std::optional<ColourId> Game::find_colour(const std::string& c) const {
  auto it = colour_index_.find(c);
  if (it == colour_index_.end())
    return std::nullopt;
  return it->second;
}

VertexId Game::vertex(const std::string& id) const {
  auto v = find_vertex(id);
  if (!v)
    throw Error(ErrorCode::InvalidVertex, "unknown vertex '" + id + "'");
  return *v;
}

ColourId Game::colour_id(const std::string& c) const {
  auto id = find_colour(c);
  if (!id)
    throw Error(ErrorCode::InvalidVertex, "unknown colour '" + c + "'");
  return *id;
}

ColourSet Game::colours_of(const std::vector<std::string>& names) const {
  ColourSet s(num_colours());
  for (const auto& n : names)
    s.set(colour_id(n));
  return s;
}

ColourSet Game::colours_of(const VertexSet& u) const {
  ColourSet s(num_colours());
  for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v))
    s.set(colour[v]);
  return s;
}

ColourSet Game::used_colours() const {
  ColourSet s(num_colours());
  for (auto c : colour)
    s.set(c);
  return s;
}

void Game::seal() {
  for (auto& o : objectives)
    o.resize(num_colours());
}

Rational Game::prob(VertexId v, VertexId w) const {
  for (const auto& e : succ[v])
    if (e.to == w)
      return e.prob ? *e.prob : Rational(0);
  return Rational(0);
}

bool Game::has_edge(VertexId v, VertexId w) const {
  for (const auto& e : succ[v])
    if (e.to == w)
      return true;
  return false;
}

std::string to_string(const Violation& v) {
  std::string s = v.rule + "(" + v.where;
  if (!v.detail.empty())
    s += ", " + v.detail;
  return s + ")";
}

std::vector<Violation> validate(const Game& g) {
  std::vector<Violation> out;
  auto add = [&](std::string rule, std::string where, std::string detail = "") {
    out.push_back(Violation{std::move(rule), std::move(where), std::move(detail)});
  };
  if (g.players < 1)
    add("PlayerCount", g.name, std::to_string(g.players));
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto& name = g.vertex_names[v];
    int o = g.owner[v];
    if (o != kStochastic && (o < 0 || o >= g.players))
      add("InvalidOwner", name, std::to_string(o));
    if (g.succ[v].empty()) {
      add("DeadEnd", name);
      continue;
    }
    std::set<VertexId> seen;
    Rational sum = 0;
    for (const auto& e : g.succ[v]) {
      std::string where = name + "->" + g.vertex_names[e.to];
      if (!seen.insert(e.to).second)
        add("DuplicateEdge", where);
      if (o == kStochastic) {
        if (!e.prob) {
          add("MissingProbability", where);
          continue;
        }
        if (*e.prob <= 0 || *e.prob > 1)
          add("ProbabilityRange", where, to_string(*e.prob));
        sum += *e.prob;
      } else if (e.prob) {
        add("ControlledWithProbability", where, to_string(*e.prob));
      }
    }
    if (o == kStochastic && sum != 1)
      add("ProbabilitySum", name, to_string(sum));
  }
  if (static_cast<int>(g.objectives.size()) != g.players)
    add("ObjectiveCount", g.name,
        std::to_string(g.objectives.size()) + " objectives for " + std::to_string(g.players) + " players");
  ColourSet used = g.used_colours();
  for (std::size_t i = 0; i < g.objectives.size(); ++i) {
    const auto& obj = g.objectives[i];
    std::string who = "player " + std::to_string(i);
    if (obj.kind == ObjectiveKind::Reach) {
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (g.colour[v] < obj.set.size() && obj.set.test(g.colour[v]) && !g.is_terminal(v))
          add("ReachNonTerminal", who, g.vertex_names[v]);
    }
    if (obj.kind == ObjectiveKind::Parity) {
      for (auto c = used.find_first(); c != ColourSet::npos; c = used.find_next(c))
        if (c >= obj.priority.size() || obj.priority[c] < 0)
          add("MissingPriority", who, g.colour_names[c]);
    }
  }
  if (g.initial && *g.initial >= g.num_vertices())
    add("InvalidInitial", g.name);
  return out;
}

bool is_subarena(const Game& g, const VertexSet& u) {
  if (u.size() != g.num_vertices())
    throw Error(ErrorCode::InvalidVertex, "vertex set has the wrong size");
  if (u.none())
    return false;
  for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v)) {
    bool any = false, all = true;
    for (const auto& e : g.succ[v]) {
      if (u.test(e.to))
        any = true;
      else
        all = false;
    }
    if (!any)
      return false;
    if (g.is_stochastic(static_cast<VertexId>(v)) && !all)
      return false;
  }
  return true;
}

Game restrict(const Game& g, const VertexSet& u) {
  if (!is_subarena(g, u))
    throw Error(ErrorCode::NotASubarena, "cannot restrict to a set that is not a subarena");
  Game r;
  r.name = g.name;
  r.mode = g.mode;
  r.players = g.players;
  for (const auto& c : g.colour_names)
    r.intern_colour(c);
  std::vector<VertexId> index(g.num_vertices(), 0);
  for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v))
    index[v] = r.add_vertex(g.vertex_names[v], g.owner[v], g.colour_names[g.colour[v]]);
  for (auto v = u.find_first(); v != VertexSet::npos; v = u.find_next(v))
    for (const auto& e : g.succ[v])
      if (u.test(e.to))
        r.add_edge(index[v], index[e.to], e.prob);
  r.objectives = g.objectives;
  if (g.initial && u.test(*g.initial))
    r.initial = index[*g.initial];
  r.seal();
  return r;
}

Game realize_payoff_vector(const std::vector<Rational>& p, int players) {
  if (static_cast<int>(p.size()) != players)
    throw Error(ErrorCode::InvalidPayoff, "payoff vector has " + std::to_string(p.size()) +
                                              " components for " + std::to_string(players) + " players");
  for (const auto& x : p)
    if (x < 0 || x > 1)
      throw Error(ErrorCode::InvalidPayoff, "component " + to_string(x) + " outside [0,1]");

  // Player i wins iff a uniform U in [0,1) falls below p[i]; the cut points
  // are the distinct component values, so each interval is one 0/1 outcome.
  std::vector<Rational> cuts(p.begin(), p.end());
  cuts.push_back(0);
  cuts.push_back(1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Game f;
  f.name = "payoff";
  f.mode = Mode::Ssmg;
  f.players = players;
  std::vector<std::vector<std::string>> wins(players);
  if (cuts.size() == 2) {
    f.add_terminal("t");
    for (int i = 0; i < players; ++i)
      if (p[i] == 1)
        wins[i].push_back("t");
  } else {
    VertexId entry = f.add_vertex("t", kStochastic);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      std::string id = "t~" + std::to_string(k + 1);
      VertexId t = f.add_terminal(id);
      f.add_edge(entry, t, cuts[k + 1] - cuts[k]);
      for (int i = 0; i < players; ++i)
        if (p[i] > cuts[k])
          wins[i].push_back(id);
    }
  }
  for (int i = 0; i < players; ++i)
    f.objectives.push_back(Objective::reach(f.colours_of(wins[i])));
  f.initial = 0;
  f.seal();
  return f;
}

SsmgBuilder::SsmgBuilder(std::string name, int players) : wins_(players) {
  g_.name = std::move(name);
  g_.mode = Mode::Ssmg;
  g_.players = players;
}

VertexId SsmgBuilder::vertex(const std::string& id, int owner) { return g_.add_vertex(id, owner); }

VertexId SsmgBuilder::terminal(const std::string& id, const std::vector<Rational>& payoff) {
  Game f = realize_payoff_vector(payoff, g_.players);
  std::vector<VertexId> index;
  for (VertexId v = 0; v < f.num_vertices(); ++v)
    index.push_back(g_.add_vertex(id + f.vertex_names[v].substr(1), f.owner[v]));
  for (VertexId v = 0; v < f.num_vertices(); ++v)
    for (const auto& e : f.succ[v])
      g_.add_edge(index[v], index[e.to], e.prob);
  for (int i = 0; i < g_.players; ++i) {
    const auto& set = f.objectives[i].set;
    for (auto c = set.find_first(); c != ColourSet::npos; c = set.find_next(c))
      wins_[i].push_back(id + f.colour_names[c].substr(1));
  }
  return index[0];
}

VertexId SsmgBuilder::terminal_won_by(const std::string& id, const std::vector<int>& winners) {
  VertexId v = g_.add_terminal(id);
  for (int i : winners)
    wins_.at(i).push_back(id);
  return v;
}

void SsmgBuilder::edge(const std::string& from, const std::string& to) {
  g_.add_edge(g_.vertex(from), g_.vertex(to));
}

void SsmgBuilder::edge(const std::string& from, const std::string& to, const Rational& p) {
  g_.add_edge(g_.vertex(from), g_.vertex(to), p);
}

Game SsmgBuilder::finish() {
  Game g = g_;
  g.objectives.clear();
  for (int i = 0; i < g.players; ++i)
    g.objectives.push_back(Objective::reach(g.colours_of(wins_[i])));
  g.seal();
  return g;
}

}  // namespace smg
