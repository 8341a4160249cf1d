#include "smg/analysis.hpp"
#include "smg/equilibria.hpp"
#include "smg/gadgets.hpp"
#include "smg/graph.hpp"
#include "smg/objectives.hpp"

#include <set>
#include <sstream>

namespace smg {

std::vector<std::pair<VertexId, VertexId>> full_support(const Game& g) {
  std::vector<std::pair<VertexId, VertexId>> s;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    for (const auto& e : g.succ[v])
      s.emplace_back(v, e.to);
  return s;
}

namespace {

std::vector<std::vector<VertexId>> support_graph(const Game& g, const StatNeQuery& q) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<VertexId>> adj(n);
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& [v, w] : q.support) {
    if (v >= n || w >= n || !g.has_edge(v, w))
      throw Error(ErrorCode::InvalidSupport, "support pair is not an edge of the game");
    if (seen.insert({v, w}).second)
      adj[v].push_back(w);
  }
  for (VertexId v = 0; v < n; ++v) {
    if (g.is_stochastic(v)) {
      for (const auto& e : g.succ[v])
        if (!seen.count({v, e.to}))
          throw Error(ErrorCode::InvalidSupport, "stochastic edge " + g.vertex_names[v] + " -> " +
                                                     g.vertex_names[e.to] + " is missing from the support");
    } else if (adj[v].empty()) {
      throw Error(ErrorCode::InvalidSupport, "controlled vertex " + g.vertex_names[v] + " has an empty support");
    }
  }
  return adj;
}

}  // namespace

StatNeSets statne_sets(const Game& g, const StatNeQuery& q) {
  require_prefix_independent(g);
  const std::size_t n = g.num_vertices();
  auto adj = support_graph(g, q);

  std::vector<char> all(n, 1);
  auto comps = graph::tarjan(static_cast<std::uint32_t>(n), all, [&](std::uint32_t v, auto&& f) {
    for (auto w : adj[v])
      f(w);
  });
  std::vector<std::size_t> comp_of(n);
  for (std::size_t k = 0; k < comps.size(); ++k)
    for (auto v : comps[k])
      comp_of[v] = k;
  std::vector<std::vector<VertexId>> pred(n);
  for (VertexId v = 0; v < n; ++v)
    for (auto w : adj[v])
      pred[w].push_back(v);

  StatNeSets sets;
  for (int i = 0; i < g.players; ++i) {
    VertexSet f = g.empty_vertices();
    for (std::size_t k = 0; k < comps.size(); ++k) {
      bool bottom = true;
      ColourSet inf = g.empty_colours();
      for (auto v : comps[k]) {
        inf.set(g.colour[v]);
        for (auto w : adj[v])
          if (comp_of[w] != k)
            bottom = false;
      }
      if (bottom && wins_inf(g.objectives[i], inf))
        for (auto v : comps[k])
          f.set(v);
    }
    VertexSet r = f;
    std::vector<VertexId> stack;
    for (auto v = f.find_first(); v != VertexSet::npos; v = f.find_next(v))
      stack.push_back(static_cast<VertexId>(v));
    while (!stack.empty()) {
      VertexId w = stack.back();
      stack.pop_back();
      for (auto v : pred[w])
        if (!r.test(v)) {
          r.set(v);
          stack.push_back(v);
        }
    }
    // Player i keeps every move, everybody else is restricted to the support.
    Game m;
    m.name = g.name + "-support" + std::to_string(i);
    m.players = 1;
    for (const auto& c : g.colour_names)
      m.intern_colour(c);
    for (VertexId v = 0; v < n; ++v)
      m.add_vertex(g.vertex_names[v], g.owner[v] == i ? 0 : kStochastic, g.colour_names[g.colour[v]]);
    for (VertexId v = 0; v < n; ++v) {
      if (g.owner[v] == i) {
        for (const auto& e : g.succ[v])
          m.add_edge(v, e.to);
      } else {
        Rational share(1, static_cast<long>(adj[v].size()));
        for (auto w : adj[v])
          m.add_edge(v, w, share);
      }
    }
    m.objectives.push_back(g.objectives[i]);
    m.seal();
    sets.t.push_back(union_ecs_with_payoff(m, {1}, m.all_vertices()));
    sets.f.push_back(std::move(f));
    sets.r.push_back(std::move(r));
  }
  return sets;
}

namespace {

std::string real(const Rational& q) {
  std::string num = q.get_num().get_str(), den = q.get_den().get_str();
  auto lit = [](std::string s) {
    if (s[0] == '-')
      return "(- " + s.substr(1) + ".0)";
    return s + ".0";
  };
  if (den == "1")
    return lit(num);
  return "(/ " + lit(num) + " " + den + ".0)";
}

std::string alpha(VertexId v, VertexId w) { return "alpha_" + std::to_string(v) + "_" + std::to_string(w); }
std::string rvar(int i, VertexId v) { return "r_" + std::to_string(i) + "_" + std::to_string(v); }
std::string zvar(int i, VertexId v) { return "z_" + std::to_string(i) + "_" + std::to_string(v); }

std::string weighted_sum(const Game& g, VertexId v, std::string (*var)(int, VertexId), int i) {
  if (g.succ[v].size() == 1)
    return "(* " + alpha(v, g.succ[v][0].to) + " " + var(i, g.succ[v][0].to) + ")";
  std::string s = "(+";
  for (const auto& e : g.succ[v])
    s += " (* " + alpha(v, e.to) + " " + var(i, e.to) + ")";
  return s + ")";
}

}  // namespace

std::string emit_statne_formula(const Game& g, const StatNeQuery& q) {
  if (!g.initial)
    throw Error(ErrorCode::InvalidVertex, "game has no initial vertex");
  const std::size_t n = g.num_vertices();
  const auto k = static_cast<std::size_t>(g.players);
  if ((!q.x.empty() && q.x.size() != k) || (!q.y.empty() && q.y.size() != k))
    throw Error(ErrorCode::ProfileMismatch, "threshold vector length differs from the player count");
  StatNeSets sets = statne_sets(g, q);
  std::set<std::pair<VertexId, VertexId>> support(q.support.begin(), q.support.end());
  const VertexId v0 = *g.initial;

  std::ostringstream out;
  out << "; stationary equilibrium query for " << g.name << "\n";
  for (VertexId v = 0; v < n; ++v)
    out << "; vertex " << v << " = " << g.vertex_names[v] << "\n";
  out << "(set-logic QF_NRA)\n";
  for (VertexId v = 0; v < n; ++v)
    for (VertexId w = 0; w < n; ++w)
      out << "(declare-fun " << alpha(v, w) << " () Real)\n";
  for (int i = 0; i < g.players; ++i)
    for (VertexId v = 0; v < n; ++v)
      out << "(declare-fun " << rvar(i, v) << " () Real)\n";
  for (int i = 0; i < g.players; ++i)
    for (VertexId v = 0; v < n; ++v)
      out << "(declare-fun " << zvar(i, v) << " () Real)\n";
  auto assert_ = [&](const std::string& s) { out << "(assert " << s << ")\n"; };

  // The profile is a stationary profile with the given support.
  for (VertexId v = 0; v < n; ++v) {
    if (!g.is_stochastic(v)) {
      std::string sum = "(+";
      for (VertexId w = 0; w < n; ++w) {
        if (g.has_edge(v, w)) {
          assert_("(>= " + alpha(v, w) + " 0.0)");
          sum += " " + alpha(v, w);
        } else {
          assert_("(= " + alpha(v, w) + " 0.0)");
        }
      }
      if (g.succ[v].size() == 1)
        sum = alpha(v, g.succ[v][0].to);
      else
        sum += ")";
      assert_("(= " + sum + " 1.0)");
    } else {
      for (VertexId w = 0; w < n; ++w)
        assert_("(= " + alpha(v, w) + " " + real(g.prob(v, w)) + ")");
    }
  }
  for (VertexId v = 0; v < n; ++v)
    for (VertexId w = 0; w < n; ++w)
      assert_(support.count({v, w}) ? "(> " + alpha(v, w) + " 0.0)" : "(= " + alpha(v, w) + " 0.0)");

  for (int i = 0; i < g.players; ++i) {
    // z is the winning probability of player i under the profile.
    for (VertexId v = 0; v < n; ++v) {
      if (sets.f[i].test(v))
        assert_("(= " + zvar(i, v) + " 1.0)");
      if (!sets.r[i].test(v))
        assert_("(= " + zvar(i, v) + " 0.0)");
      if (!sets.f[i].test(v))
        assert_("(= " + zvar(i, v) + " " + weighted_sum(g, v, zvar, i) + ")");
    }
    // r bounds the value of every deviation of player i.
    for (VertexId v = 0; v < n; ++v) {
      assert_("(>= " + rvar(i, v) + " 0.0)");
      if (sets.t[i].test(v))
        assert_("(= " + rvar(i, v) + " 1.0)");
      if (g.owner[v] == i) {
        for (const auto& e : g.succ[v])
          assert_("(>= " + rvar(i, v) + " " + rvar(i, e.to) + ")");
      } else {
        assert_("(= " + rvar(i, v) + " " + weighted_sum(g, v, rvar, i) + ")");
      }
    }
    assert_("(<= " + rvar(i, v0) + " " + zvar(i, v0) + ")");
    if (!q.x.empty())
      assert_("(<= " + real(q.x[i]) + " " + zvar(i, v0) + ")");
    if (!q.y.empty())
      assert_("(<= " + zvar(i, v0) + " " + real(q.y[i]) + ")");
  }
  out << "(check-sat)\n";
  return out.str();
}

namespace {

// Upper bound on sqrt(p) within eps, by bisection.
Rational sqrt_upper(const Rational& p, const Rational& eps) {
  Rational lo = 0, hi = 1;
  while (hi - lo >= eps) {
    Rational mid = (lo + hi) / 2;
    if (mid * mid >= p)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

GpOptimum gp_optimal_profile(const Rational& p, const Rational& precision) {
  if (p <= 0 || p >= 1)
    throw Error(ErrorCode::DomainError, "p must lie strictly between 0 and 1");
  GpOptimum o;
  o.constraint = "(1 - p) x^2 - 2 x + 1 >= 0, 0 <= x <= 1, maximise p / (1 - (1 - p) x)";
  Rational s;
  if (auto r = exact_sqrt(p)) {
    o.exact = true;
    s = *r;
  } else {
    s = sqrt_upper(p, precision);
  }
  // (1 - s) / (1 - p) simplifies to 1 / (1 + s).
  o.x0 = 1 / (1 + s);
  Rational q = 1 - p;
  o.payoff3 = p / (1 - q * o.x0);

  Game g = gen_gp(p);
  o.profile.choice.assign(g.num_vertices(), {});
  auto at = [&](const char* v) { return g.vertex(v); };
  o.profile.choice[at("s1")] = {{at("r1"), Rational(1)}};
  o.profile.choice[at("s2")] = {{at("r2"), Rational(1)}};
  o.profile.choice[at("t1")] = {{at("s2"), o.x0}, {at("e1"), 1 - o.x0}};
  o.profile.choice[at("t2")] = {{at("s1"), o.x0}, {at("e2"), 1 - o.x0}};
  return o;
}

}  // namespace smg
