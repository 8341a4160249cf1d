#include "smg/gadgets.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace smg {

void check_formula(const CnfFormula& f) {
  if (f.variables < 1 || f.clauses.empty())
    throw Error(ErrorCode::DomainError, "formula needs at least one variable and one clause");
  for (const auto& c : f.clauses) {
    if (c.empty())
      throw Error(ErrorCode::DomainError, "empty clause");
    for (int l : c)
      if (l == 0 || std::abs(l) > f.variables)
        throw Error(ErrorCode::DomainError, "literal " + std::to_string(l) + " out of range");
  }
}

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CnfFormula f;
  bool header = false;
  std::vector<int> clause;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c")
      continue;
    // SATLIB files end the clause list with a '%' line.
    if (tok[0] == '%')
      break;
    if (tok == "p") {
      std::string kind;
      std::size_t m = 0;
      if (!(ls >> kind >> f.variables >> m) || kind != "cnf")
        throw Error(ErrorCode::DomainError, "bad DIMACS header: " + line);
      header = true;
      continue;
    }
    if (!header)
      throw Error(ErrorCode::DomainError, "DIMACS clause before the header");
    std::istringstream cs(line);
    std::string word;
    while (cs >> word) {
      int lit = 0;
      auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), lit);
      if (ec != std::errc() || end != word.data() + word.size())
        throw Error(ErrorCode::DomainError, "bad DIMACS literal '" + word + "'");
      if (lit == 0) {
        if (clause.empty())
          throw Error(ErrorCode::DomainError, "empty clause");
        f.clauses.push_back(clause);
        clause.clear();
      } else {
        clause.push_back(lit);
      }
    }
  }
  if (!clause.empty())
    f.clauses.push_back(clause);
  check_formula(f);
  return f;
}

CnfFormula load_dimacs(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::DomainError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dimacs(ss.str());
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.variables << " " << f.clauses.size() << "\n";
  for (const auto& c : f.clauses) {
    for (int l : c)
      out << l << " ";
    out << "0\n";
  }
  return out.str();
}

bool satisfiable(const CnfFormula& f) {
  check_formula(f);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << f.variables); ++a) {
    bool all = true;
    for (const auto& c : f.clauses) {
      bool sat = false;
      for (int l : c) {
        bool val = (a >> (std::abs(l) - 1)) & 1;
        if ((l > 0) == val)
          sat = true;
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all)
      return true;
  }
  return false;
}

std::string literal_name(int literal) {
  return (literal > 0 ? "X" : "nX") + std::to_string(std::abs(literal));
}

namespace {

std::vector<int> distinct_literals(const std::vector<int>& clause) {
  std::vector<int> out;
  for (int l : clause)
    if (std::find(out.begin(), out.end(), l) == out.end())
      out.push_back(l);
  return out;
}

Rational power_half(int k) {
  mpz_class den = 1;
  den <<= k;
  return Rational(mpz_class(1), den);
}

// The SAT game; payoffs are mapped through `pay` so that the qualitative
// variant can add the third player.
void build_sat_core(SsmgBuilder& b, const CnfFormula& f,
                    const std::function<std::vector<Rational>(int, int)>& pay) {
  const int n = f.variables;
  const auto m = static_cast<long>(f.clauses.size());
  VertexId v0 = b.stochastic("v0");
  VertexId phi = b.stochastic("phi");
  std::vector<VertexId> clause;
  for (std::size_t j = 0; j < f.clauses.size(); ++j)
    clause.push_back(b.vertex("C" + std::to_string(j + 1), 1));
  b.terminal("end", pay(1, 0));
  b.terminal("pay", pay(1, 1));
  for (int i = 1; i <= n; ++i) {
    for (int lit : {i, -i}) {
      std::string l = literal_name(lit);
      b.vertex(l, 0);
      b.vertex(l + ".top", 1);
      b.stochastic(l + ".b");
      b.stochastic(l + ".bot");
      b.terminal(l + ".t01", pay(0, 1));
      b.terminal(l + ".t11", pay(1, 1));
      b.terminal(l + ".t10", pay(1, 0));
      b.edge(l, l + ".top");
      b.edge(l, l + ".bot");
      b.edge(l + ".top", l + ".t01");
      b.edge(l + ".top", l + ".b");
      b.edge(l + ".b", l, Rational(1, 2));
      b.edge(l + ".b", l + ".t11", Rational(1, 2));
      b.edge(l + ".bot", l, Rational(1, 2));
      b.edge(l + ".bot", l + ".t10", Rational(1, 2));
      b.edge(v0, b.raw().vertex(l), power_half(i + 1));
    }
  }
  b.edge(v0, phi, power_half(n + 1));
  b.edge("v0", "end", power_half(n + 1));
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    b.edge(phi, clause[j], ratio(1, m + 1));
    for (int l : distinct_literals(f.clauses[j]))
      b.edge(clause[j], b.raw().vertex(literal_name(l)));
  }
  b.edge("phi", "pay", ratio(1, m + 1));
}

}  // namespace

Game gen_sat_posne(const CnfFormula& f) {
  check_formula(f);
  SsmgBuilder b("sat-posne", 2);
  build_sat_core(b, f, [](int a, int c) { return std::vector<Rational>{a, c}; });
  b.init("v0");
  return b.finish();
}

Game gen_sat_posne_qualitative(const CnfFormula& f) {
  check_formula(f);
  SsmgBuilder b("sat-posne-qualitative", 3);
  b.vertex("v1", 1);
  b.vertex("v2", 2);
  b.terminal("quit1", {0, Rational(1, 2), Rational(1, 2)});
  b.terminal("quit2", {0, Rational(1, 2), Rational(1, 2)});
  build_sat_core(b, f, [](int a, int c) { return std::vector<Rational>{a, c, 1 - c}; });
  b.edge("v1", "quit1");
  b.edge("v1", "v2");
  b.edge("v2", "quit2");
  b.edge("v2", "v0");
  b.init("v1");
  return b.finish();
}

namespace {

void build_gp(SsmgBuilder& b, const Rational& p, const std::string& pre) {
  const Rational half(1, 2);
  for (int k : {1, 2}) {
    std::string s = pre + "s" + std::to_string(k), r = pre + "r" + std::to_string(k),
                t = pre + "t" + std::to_string(k);
    b.vertex(s, k);
    b.stochastic(r);
    b.vertex(t, 0);
  }
  b.terminal(pre + "q1", {0, half, 0, 0});
  b.terminal(pre + "q2", {0, 0, half, 0});
  b.terminal(pre + "x1", {1, half, 0, 1});
  b.terminal(pre + "x2", {1, 0, half, 1});
  b.terminal(pre + "e1", {1, 1, 0, 0});
  b.terminal(pre + "e2", {1, 0, 1, 0});
  for (int k : {1, 2}) {
    std::string K = std::to_string(k), next = std::to_string(3 - k);
    b.edge(pre + "s" + K, pre + "r" + K);
    b.edge(pre + "s" + K, pre + "q" + K);
    if (p != 1)
      b.edge(pre + "r" + K, pre + "t" + K, 1 - p);
    if (p != 0)
      b.edge(pre + "r" + K, pre + "x" + K, p);
    b.edge(pre + "t" + K, pre + "s" + next);
    b.edge(pre + "t" + K, pre + "e" + K);
  }
}

}  // namespace

Game gen_gp(const Rational& p) {
  if (p < 0 || p > 1)
    throw Error(ErrorCode::DomainError, "p must lie in [0,1]");
  SsmgBuilder b("gp", 4);
  build_gp(b, p, "");
  b.init("s1");
  return b.finish();
}

Game gen_sqrtsum(const SqrtSumInstance& inst) {
  if (inst.d.empty() || inst.k < 1)
    throw Error(ErrorCode::DomainError, "instance needs n > 0 and k > 0");
  mpz_class d = 0;
  for (auto di : inst.d) {
    if (di <= 0)
      throw Error(ErrorCode::DomainError, "d_i must be positive");
    d += di;
  }
  const auto n = static_cast<long>(inst.d.size());
  Rational quit(mpz_class(inst.k), d * n);
  if (quit > 1)
    throw Error(ErrorCode::DomainError, "quit payoff k/(dn) exceeds 1");
  SsmgBuilder b("sqrtsum", 4);
  b.vertex("v0", 3);
  b.stochastic("v1");
  b.terminal("quit", {0, 0, 0, quit});
  b.edge("v0", "v1");
  b.edge("v0", "quit");
  for (long i = 0; i < n; ++i) {
    std::string pre = "g" + std::to_string(i + 1) + ".";
    build_gp(b, ratio(inst.d[i], d * d), pre);
    b.edge("v1", pre + "s1", ratio(1, n));
  }
  b.init("v0");
  return b.finish();
}

Game gen_sat_streett(const CnfFormula& f, SatVariant variant) {
  check_formula(f);
  Game g;
  g.name = variant == SatVariant::Streett ? "sat-streett" : "sat-rabin";
  g.players = 2;
  std::vector<int> lits;
  for (const auto& c : f.clauses)
    for (int l : c)
      if (std::find(lits.begin(), lits.end(), l) == lits.end())
        lits.push_back(l);
  std::sort(lits.begin(), lits.end(), [](int a, int b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a > b;
  });
  std::vector<VertexId> clause;
  for (std::size_t j = 0; j < f.clauses.size(); ++j)
    clause.push_back(g.add_vertex("C" + std::to_string(j + 1), 0));
  for (int l : lits)
    g.add_vertex(literal_name(l), 1);
  for (std::size_t j = 0; j < f.clauses.size(); ++j)
    for (int l : distinct_literals(f.clauses[j]))
      g.add_edge(clause[j], g.vertex(literal_name(l)));
  for (int l : lits)
    for (auto c : clause)
      g.add_edge(g.vertex(literal_name(l)), c);
  std::vector<ColourPair> pairs;
  for (int x = 1; x <= f.variables; ++x) {
    bool pos = std::count(lits.begin(), lits.end(), x), neg = std::count(lits.begin(), lits.end(), -x);
    if (!pos && !neg)
      continue;
    ColourId a = g.intern_colour(literal_name(x)), b = g.intern_colour(literal_name(-x));
    ColourSet sa(g.num_colours()), sb(g.num_colours());
    sa.set(a);
    sb.set(b);
    pairs.push_back({sa, sb});
    pairs.push_back({sb, sa});
  }
  for (auto& p : pairs) {
    p.first.resize(g.num_colours());
    p.second.resize(g.num_colours());
  }
  ColourSet everything = ~ColourSet(g.num_colours());
  if (variant == SatVariant::Streett)
    g.objectives = {Objective::streett({}), Objective::streett(pairs)};
  else
    g.objectives = {Objective::rabin(pairs), Objective::rabin({{everything, ColourSet(g.num_colours())}})};
  g.initial = clause[0];
  g.seal();
  return g;
}

Game gen_rabin_allwin(const CnfFormula& f) {
  check_formula(f);
  Game g;
  g.name = "rabin-allwin";
  g.players = f.variables + 1;
  const std::size_t m = f.clauses.size();
  std::vector<VertexId> clause;
  for (std::size_t j = 0; j < m; ++j)
    clause.push_back(g.add_vertex("C" + std::to_string(j + 1), 0));
  std::vector<std::vector<VertexId>> pos(f.variables + 1), neg(f.variables + 1);
  for (std::size_t j = 0; j < m; ++j)
    for (int l : distinct_literals(f.clauses[j])) {
      VertexId v = g.add_vertex("C" + std::to_string(j + 1) + "." + literal_name(l), 0);
      g.add_edge(clause[j], v);
      g.add_edge(v, clause[(j + 1) % m]);
      (l > 0 ? pos : neg)[std::abs(l)].push_back(v);
    }
  const std::size_t nc = g.num_colours();
  ColourSet everything = ~ColourSet(nc);
  g.objectives.push_back(Objective::rabin({{everything, ColourSet(nc)}}));
  for (int x = 1; x <= f.variables; ++x) {
    ColourSet sp(nc), sn(nc);
    for (auto v : pos[x])
      sp.set(g.colour[v]);
    for (auto v : neg[x])
      sn.set(g.colour[v]);
    g.objectives.push_back(Objective::rabin({{everything, sp}, {everything, sn}}));
  }
  g.initial = clause[0];
  g.seal();
  return g;
}

namespace {

// Copies g into out with every vertex and colour name prefixed.
std::vector<VertexId> embed(Game& out, const Game& g, const std::string& pre) {
  std::vector<VertexId> index;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    index.push_back(out.add_vertex(pre + g.vertex_names[v], g.owner[v], pre + g.colour_names[g.colour[v]]));
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    for (const auto& e : g.succ[v])
      out.add_edge(index[v], index[e.to], e.prob);
  for (const auto& c : g.colour_names)
    out.intern_colour(pre + c);
  return index;
}

ColourSet lift(const Game& out, const Game& g, const ColourSet& s, const std::string& pre) {
  ColourSet r(out.num_colours());
  for (auto c = s.find_first(); c != ColourSet::npos; c = s.find_next(c))
    r.set(out.colour_id(pre + g.colour_names[c]));
  return r;
}

Objective lift(const Game& out, const Game& g, const Objective& o, const std::string& pre) {
  Objective r = o;
  r.resize(0);
  r.set = lift(out, g, o.set.size() ? o.set : ColourSet(g.num_colours()), pre);
  r.priority.assign(out.num_colours(), -1);
  for (std::size_t c = 0; c < o.priority.size(); ++c)
    if (o.priority[c] >= 0)
      r.priority[out.colour_id(pre + g.colour_names[c])] = o.priority[c];
  r.pairs.clear();
  for (const auto& p : o.pairs)
    r.pairs.push_back({lift(out, g, p.first, pre), lift(out, g, p.second, pre)});
  r.family.clear();
  for (const auto& s : o.family)
    r.family.push_back(lift(out, g, s, pre));
  return r;
}

Objective merge(Objective a, const Objective& b) {
  a.set |= b.set;
  for (std::size_t c = 0; c < a.priority.size(); ++c)
    if (b.priority[c] >= 0)
      a.priority[c] = b.priority[c];
  a.pairs.insert(a.pairs.end(), b.pairs.begin(), b.pairs.end());
  a.family.insert(a.family.end(), b.family.begin(), b.family.end());
  return a;
}

Game compose(const Game& a, const Game& b, int root_owner, const std::string& name) {
  if (a.players != b.players)
    throw Error(ErrorCode::RosterMismatch, "games have different player counts");
  if (!a.initial || !b.initial)
    throw Error(ErrorCode::InvalidVertex, "both games need an initial vertex");
  if (root_owner != kStochastic && (root_owner < 0 || root_owner >= a.players))
    throw Error(ErrorCode::RosterMismatch, "chooser is not a player of the games");
  for (int i = 0; i < a.players; ++i)
    if (a.objectives[i].kind != b.objectives[i].kind)
      throw Error(ErrorCode::UnsupportedObjective,
                  "player " + std::to_string(i) + " has objectives of different kinds");
  Game g;
  g.name = name;
  g.mode = a.mode == Mode::Ssmg && b.mode == Mode::Ssmg ? Mode::Ssmg : Mode::Explicit;
  g.players = a.players;
  VertexId root = g.add_vertex("root", root_owner);
  auto ia = embed(g, a, "a.");
  auto ib = embed(g, b, "b.");
  if (root_owner == kStochastic) {
    g.add_edge(root, ia[*a.initial], Rational(1, 2));
    g.add_edge(root, ib[*b.initial], Rational(1, 2));
  } else {
    g.add_edge(root, ia[*a.initial]);
    g.add_edge(root, ib[*b.initial]);
  }
  for (int i = 0; i < a.players; ++i) {
    Objective o = merge(lift(g, a, a.objectives[i], "a."), lift(g, b, b.objectives[i], "b."));
    // The root is transient; any priority keeps parity objectives total.
    if (o.kind == ObjectiveKind::Parity)
      o.priority[g.colour[root]] = 0;
    g.objectives.push_back(std::move(o));
  }
  g.initial = root;
  g.seal();
  return g;
}

}  // namespace

Game compose_and(const Game& a, const Game& b) { return compose(a, b, kStochastic, "and"); }

Game compose_or(const Game& a, const Game& b, int chooser) { return compose(a, b, chooser, "or"); }

}  // namespace smg
