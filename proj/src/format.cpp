#include "smg/format.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace smg {

namespace {

struct Token {
  std::string text;
  int col;
  bool punct;
};

bool is_punct(char c) { return c == '(' || c == ')' || c == '{' || c == '}' || c == ';' || c == ':' || c == '=' || c == ','; }

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#')
      break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (is_punct(c)) {
      out.push_back(Token{std::string(1, c), static_cast<int>(i) + 1, true});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !is_punct(line[j]) && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' &&
           line[j] != '#')
      ++j;
    out.push_back(Token{line.substr(i, j - i), static_cast<int>(i) + 1, false});
    i = j;
  }
  return out;
}

struct Statement {
  int line;
  std::vector<Token> toks;
  int end_col;
};

class Cursor {
 public:
  explicit Cursor(const Statement& s) : s_(s) {}
  bool done() const { return pos_ >= s_.toks.size(); }
  const Token& peek() const {
    if (done())
      fail("unexpected end of line");
    return s_.toks[pos_];
  }
  bool peek_is(const char* p) const { return !done() && s_.toks[pos_].punct && s_.toks[pos_].text == p; }
  Token word(const char* what) {
    const Token& t = peek();
    if (t.punct)
      fail_at(t, std::string("expected ") + what + ", found '" + t.text + "'");
    ++pos_;
    return t;
  }
  void expect(const char* p) {
    const Token& t = peek();
    if (!t.punct || t.text != p)
      fail_at(t, std::string("expected '") + p + "', found '" + t.text + "'");
    ++pos_;
  }
  void end() const {
    if (!done())
      fail_at(s_.toks[pos_], "unexpected '" + s_.toks[pos_].text + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(s_.line, s_.end_col, msg); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(s_.line, t.col, msg); }

 private:
  const Statement& s_;
  std::size_t pos_ = 0;
};

int parse_int(const Cursor& cur, const Token& t) {
  try {
    std::size_t used = 0;
    int v = std::stoi(t.text, &used);
    if (used != t.text.size())
      throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    cur.fail_at(t, "expected an integer, found '" + t.text + "'");
  }
}

Rational parse_rat(const Cursor& cur, const Token& t) {
  try {
    return parse_rational(t.text);
  } catch (const std::exception&) {
    cur.fail_at(t, "expected a rational, found '" + t.text + "'");
  }
}

std::vector<std::string> colour_list(Cursor& cur, const char* stop) {
  std::vector<std::string> out;
  while (!cur.peek_is(stop))
    out.push_back(cur.word("colour").text);
  cur.expect(stop);
  return out;
}

}  // namespace

Game parse_game(const std::string& text) {
  std::vector<Statement> stmts;
  {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      auto toks = tokenize(line);
      if (!toks.empty())
        stmts.push_back(Statement{n, std::move(toks), static_cast<int>(line.size()) + 1});
    }
  }

  Game g;
  bool have_players = false;
  for (const auto& s : stmts) {
    Cursor cur(s);
    const std::string& kw = s.toks[0].text;
    if (kw == "game") {
      cur.word("keyword");
      g.name = cur.word("game name").text;
      cur.end();
    } else if (kw == "mode") {
      cur.word("keyword");
      Token m = cur.word("mode");
      if (m.text == "ssmg") {
        g.mode = Mode::Ssmg;
      } else if (m.text == "explicit") {
        g.mode = Mode::Explicit;
      } else {
        cur.fail_at(m, "mode must be 'ssmg' or 'explicit'");
      }
      cur.end();
    } else if (kw == "players") {
      cur.word("keyword");
      Token t = cur.word("player count");
      g.players = parse_int(cur, t);
      if (g.players < 1)
        cur.fail_at(t, "player count must be positive");
      have_players = true;
      cur.end();
    }
  }
  if (!have_players)
    throw ParseError(stmts.empty() ? 1 : stmts.front().line, 1, "missing 'players' line");

  std::vector<std::vector<std::string>> wins(g.players);
  // Vertices and terminals first, in file order.
  for (const auto& s : stmts) {
    Cursor cur(s);
    const std::string& kw = s.toks[0].text;
    if (kw == "vertex") {
      cur.word("keyword");
      Token id = cur.word("vertex id");
      if (g.find_vertex(id.text))
        cur.fail_at(id, "duplicate vertex '" + id.text + "'");
      Token kind = cur.word("'player=' or 'stochastic'");
      int owner = kStochastic;
      if (kind.text == "player") {
        cur.expect("=");
        owner = parse_int(cur, cur.word("player index"));
      } else if (kind.text != "stochastic") {
        cur.fail_at(kind, "expected 'player=' or 'stochastic'");
      }
      std::string colour;
      if (!cur.done()) {
        Token c = cur.word("'color='");
        if (c.text != "color" && c.text != "colour")
          cur.fail_at(c, "expected 'color='");
        cur.expect("=");
        colour = cur.word("colour").text;
      }
      cur.end();
      g.add_vertex(id.text, owner, colour);
    } else if (kw == "terminal") {
      if (g.mode != Mode::Ssmg)
        cur.fail_at(s.toks[0], "'terminal' is only allowed in ssmg mode");
      cur.word("keyword");
      Token id = cur.word("vertex id");
      if (g.find_vertex(id.text))
        cur.fail_at(id, "duplicate vertex '" + id.text + "'");
      Token p = cur.word("'payoff='");
      if (p.text != "payoff")
        cur.fail_at(p, "expected 'payoff='");
      cur.expect("=");
      std::vector<Rational> payoff;
      Token first = cur.peek();
      payoff.push_back(parse_rat(cur, cur.word("rational")));
      while (cur.peek_is(",")) {
        cur.expect(",");
        payoff.push_back(parse_rat(cur, cur.word("rational")));
      }
      cur.end();
      Game f;
      try {
        f = realize_payoff_vector(payoff, g.players);
      } catch (const Error& e) {
        cur.fail_at(first, e.what());
      }
      std::vector<VertexId> index;
      for (VertexId v = 0; v < f.num_vertices(); ++v) {
        std::string name = id.text + f.vertex_names[v].substr(1);
        if (g.find_vertex(name))
          cur.fail_at(id, "vertex '" + name + "' clashes with an expanded payoff terminal");
        index.push_back(g.add_vertex(name, f.owner[v]));
      }
      for (VertexId v = 0; v < f.num_vertices(); ++v)
        for (const auto& e : f.succ[v])
          g.add_edge(index[v], index[e.to], e.prob);
      for (int i = 0; i < g.players; ++i) {
        const auto& set = f.objectives[i].set;
        for (auto c = set.find_first(); c != ColourSet::npos; c = set.find_next(c))
          wins[i].push_back(id.text + f.colour_names[c].substr(1));
      }
    }
  }

  std::vector<bool> have_objective(g.players, false);
  std::vector<Objective> objectives(g.players);
  for (const auto& s : stmts) {
    Cursor cur(s);
    const std::string& kw = s.toks[0].text;
    if (kw == "game" || kw == "mode" || kw == "players" || kw == "vertex" || kw == "terminal")
      continue;
    if (kw == "edge") {
      cur.word("keyword");
      Token a = cur.word("vertex id"), b = cur.word("vertex id");
      auto va = g.find_vertex(a.text), vb = g.find_vertex(b.text);
      if (!va)
        cur.fail_at(a, "unknown vertex '" + a.text + "'");
      if (!vb)
        cur.fail_at(b, "unknown vertex '" + b.text + "'");
      std::optional<Rational> p;
      if (!cur.done()) {
        Token k = cur.word("'p='");
        if (k.text != "p")
          cur.fail_at(k, "expected 'p='");
        cur.expect("=");
        p = parse_rat(cur, cur.word("probability"));
      }
      cur.end();
      g.add_edge(*va, *vb, p);
    } else if (kw == "init") {
      cur.word("keyword");
      Token a = cur.word("vertex id");
      auto va = g.find_vertex(a.text);
      if (!va)
        cur.fail_at(a, "unknown vertex '" + a.text + "'");
      cur.end();
      g.initial = *va;
    } else if (kw == "objective") {
      if (g.mode == Mode::Ssmg)
        cur.fail_at(s.toks[0], "objectives are derived from terminal payoffs in ssmg mode");
      cur.word("keyword");
      Token pt = cur.word("player index");
      int i = parse_int(cur, pt);
      if (i < 0 || i >= g.players)
        cur.fail_at(pt, "player index out of range");
      if (have_objective[i])
        cur.fail_at(pt, "second objective for player " + std::to_string(i));
      have_objective[i] = true;
      Token kind = cur.word("objective kind");
      Objective o;
      auto ids = [&](const std::vector<std::string>& names) {
        ColourSet set;
        std::vector<ColourId> v;
        for (const auto& n : names)
          v.push_back(g.intern_colour(n));
        for (auto c : v) {
          if (set.size() <= c)
            set.resize(c + 1);
          set.set(c);
        }
        return set;
      };
      if (kind.text == "reach" || kind.text == "buchi" || kind.text == "cobuchi") {
        std::vector<std::string> names;
        while (!cur.done())
          names.push_back(cur.word("colour").text);
        ColourSet set = ids(names);
        o = kind.text == "reach" ? Objective::reach(set)
                                 : kind.text == "buchi" ? Objective::buchi(set) : Objective::cobuchi(set);
      } else if (kind.text == "parity") {
        std::vector<int> prio;
        while (!cur.done()) {
          Token c = cur.word("colour");
          cur.expect(":");
          Token pr = cur.word("priority");
          int k = parse_int(cur, pr);
          if (k < 0)
            cur.fail_at(pr, "priorities are non-negative");
          ColourId id = g.intern_colour(c.text);
          if (prio.size() <= id)
            prio.resize(id + 1, -1);
          if (prio[id] >= 0)
            cur.fail_at(c, "second priority for colour '" + c.text + "'");
          prio[id] = k;
        }
        o = Objective::parity(prio);
      } else if (kind.text == "streett" || kind.text == "rabin") {
        std::vector<ColourPair> pairs;
        while (!cur.done()) {
          cur.expect("(");
          std::vector<std::string> f, h;
          while (!cur.peek_is(";"))
            f.push_back(cur.word("colour").text);
          cur.expect(";");
          h = colour_list(cur, ")");
          pairs.push_back(ColourPair{ids(f), ids(h)});
        }
        o = kind.text == "streett" ? Objective::streett(pairs) : Objective::rabin(pairs);
      } else if (kind.text == "muller") {
        std::vector<ColourSet> family;
        while (!cur.done()) {
          cur.expect("{");
          family.push_back(ids(colour_list(cur, "}")));
        }
        o = Objective::muller(family);
      } else {
        cur.fail_at(kind, "unknown objective kind '" + kind.text + "'");
      }
      objectives[i] = std::move(o);
    } else {
      cur.fail_at(s.toks[0], "unknown statement '" + kw + "'");
    }
  }

  if (g.mode == Mode::Ssmg) {
    objectives.clear();
    for (int i = 0; i < g.players; ++i)
      objectives.push_back(Objective::reach(g.colours_of(wins[i])));
  } else {
    for (int i = 0; i < g.players; ++i)
      if (!have_objective[i])
        throw ParseError(stmts.back().line, 1, "no objective for player " + std::to_string(i));
  }
  g.objectives = std::move(objectives);
  g.seal();
  return g;
}

Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_game(ss.str());
}

namespace {

std::vector<std::string> sorted_names(const Game& g, const ColourSet& s) {
  std::vector<std::string> out;
  for (auto c = s.find_first(); c != ColourSet::npos; c = s.find_next(c))
    out.push_back(g.colour_names[c]);
  std::sort(out.begin(), out.end());
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? " " : "") + v[i];
  return s;
}

bool is_payoff_terminal(const Game& g, VertexId v) {
  return g.is_stochastic(v) && g.is_terminal(v) && g.succ[v][0].prob && *g.succ[v][0].prob == 1 &&
         g.colour_names[g.colour[v]] == g.vertex_names[v];
}

std::string objective_text(const Game& g, const Objective& o) {
  std::string s = objective_kind_name(o.kind);
  switch (o.kind) {
    case ObjectiveKind::Reach:
    case ObjectiveKind::Buchi:
    case ObjectiveKind::CoBuchi:
      for (const auto& n : sorted_names(g, o.set))
        s += " " + n;
      break;
    case ObjectiveKind::Parity: {
      std::vector<std::pair<std::string, int>> items;
      for (std::size_t c = 0; c < o.priority.size(); ++c)
        if (o.priority[c] >= 0)
          items.emplace_back(g.colour_names[c], o.priority[c]);
      std::sort(items.begin(), items.end());
      for (const auto& [n, k] : items)
        s += " " + n + ":" + std::to_string(k);
      break;
    }
    case ObjectiveKind::Streett:
    case ObjectiveKind::Rabin:
      for (const auto& p : o.pairs)
        s += " (" + join(sorted_names(g, p.first)) + ";" + join(sorted_names(g, p.second)) + ")";
      break;
    case ObjectiveKind::Muller: {
      std::vector<std::vector<std::string>> sets;
      for (const auto& f : o.family)
        sets.push_back(sorted_names(g, f));
      std::sort(sets.begin(), sets.end());
      for (const auto& f : sets)
        s += " {" + join(f) + "}";
      break;
    }
  }
  return s;
}

}  // namespace

std::string serialize_game(const Game& g) {
  std::ostringstream out;
  bool ssmg = g.mode == Mode::Ssmg;
  out << "game " << g.name << "\n";
  out << "mode " << (ssmg ? "ssmg" : "explicit") << "\n";
  out << "players " << g.players << "\n";
  std::vector<bool> sugar(g.num_vertices(), false);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (ssmg && is_payoff_terminal(g, v)) {
      sugar[v] = true;
      out << "terminal " << g.vertex_names[v] << " payoff=";
      for (int i = 0; i < g.players; ++i) {
        const auto& set = g.objectives.at(i).set;
        bool win = g.colour[v] < set.size() && set.test(g.colour[v]);
        out << (i ? "," : "") << (win ? 1 : 0);
      }
      out << "\n";
      continue;
    }
    out << "vertex " << g.vertex_names[v] << " ";
    if (g.is_stochastic(v))
      out << "stochastic";
    else
      out << "player=" << g.owner[v];
    if (g.colour_names[g.colour[v]] != g.vertex_names[v])
      out << " color=" << g.colour_names[g.colour[v]];
    out << "\n";
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (sugar[v])
      continue;
    for (const auto& e : g.succ[v]) {
      out << "edge " << g.vertex_names[v] << " " << g.vertex_names[e.to];
      if (e.prob)
        out << " p=" << to_string(*e.prob);
      out << "\n";
    }
  }
  if (!ssmg)
    for (std::size_t i = 0; i < g.objectives.size(); ++i)
      out << "objective " << i << " " << objective_text(g, g.objectives[i]) << "\n";
  if (g.initial)
    out << "init " << g.vertex_names[*g.initial] << "\n";
  return out.str();
}

}  // namespace smg

namespace smg {

namespace {

struct ProfileReader {
  const Game& g;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, 1, msg); }

  VertexId vertex(const std::string& id) const {
    auto v = g.find_vertex(id);
    if (!v)
      fail("unknown vertex '" + id + "'");
    return *v;
  }

  std::size_t number(const std::string& s) const {
    try {
      std::size_t pos = 0;
      unsigned long n = std::stoul(s, &pos);
      if (pos != s.size())
        fail("expected a number, got '" + s + "'");
      return n;
    } catch (const std::logic_error&) {
      fail("expected a number, got '" + s + "'");
    }
  }

  Distribution distribution(const std::vector<std::string>& words, std::size_t from) const {
    Distribution d;
    for (std::size_t k = from; k < words.size(); ++k) {
      auto colon = words[k].find(':');
      if (colon == std::string::npos) {
        d.emplace_back(vertex(words[k]), Rational(1));
        continue;
      }
      try {
        d.emplace_back(vertex(words[k].substr(0, colon)), parse_rational(words[k].substr(colon + 1)));
      } catch (const std::invalid_argument&) {
        fail("bad probability in '" + words[k] + "'");
      }
    }
    if (d.empty())
      fail("choose needs at least one successor");
    return d;
  }
};

}  // namespace

StrategyProfile parse_profile(const Game& g, const std::string& text) {
  ProfileReader rd{g};
  std::istringstream in(text);
  std::string raw;
  std::string kind;
  Positional pos;
  Stationary stat;
  FiniteState fin;
  pos.choice.assign(g.num_vertices(), std::nullopt);
  stat.choice.assign(g.num_vertices(), {});
  bool have_memory = false;
  while (std::getline(in, raw)) {
    ++rd.line;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> w;
    for (std::string t; ls >> t;)
      w.push_back(t);
    if (w.empty())
      continue;
    if (kind.empty()) {
      if (w[0] != "profile" || w.size() != 2 || (w[1] != "positional" && w[1] != "stationary" && w[1] != "finite"))
        rd.fail("expected 'profile positional|stationary|finite'");
      kind = w[1];
      continue;
    }
    if (w[0] == "memory") {
      if (kind != "finite" || w.size() != 3 || have_memory)
        rd.fail("'memory <size> <initial>' is only allowed once in finite profiles");
      fin.memory.size = rd.number(w[1]);
      fin.memory.initial = static_cast<MemoryState>(rd.number(w[2]));
      if (fin.memory.size == 0 || fin.memory.initial >= fin.memory.size)
        rd.fail("bad memory size or initial state");
      fin.memory.update.assign(fin.memory.size, std::vector<MemoryState>(g.num_vertices()));
      for (MemoryState m = 0; m < fin.memory.size; ++m)
        std::fill(fin.memory.update[m].begin(), fin.memory.update[m].end(), m);
      fin.choice.assign(fin.memory.size, std::vector<Distribution>(g.num_vertices()));
      have_memory = true;
    } else if (w[0] == "update") {
      if (!have_memory || w.size() != 4)
        rd.fail("expected 'update <m> <v> <m'>' after the memory line");
      std::size_t m = rd.number(w[1]), m2 = rd.number(w[3]);
      if (m >= fin.memory.size || m2 >= fin.memory.size)
        rd.fail("memory state out of range");
      fin.memory.update[m][rd.vertex(w[2])] = static_cast<MemoryState>(m2);
    } else if (w[0] == "choose") {
      if (kind == "positional") {
        if (w.size() != 3)
          rd.fail("expected 'choose <v> <w>'");
        pos.choice[rd.vertex(w[1])] = rd.vertex(w[2]);
      } else if (kind == "stationary") {
        if (w.size() < 3)
          rd.fail("expected 'choose <v> <w>:<p> ...'");
        stat.choice[rd.vertex(w[1])] = rd.distribution(w, 2);
      } else {
        if (!have_memory || w.size() < 4)
          rd.fail("expected 'choose <m> <v> <w>:<p> ...' after the memory line");
        std::size_t m = rd.number(w[1]);
        if (m >= fin.memory.size)
          rd.fail("memory state out of range");
        fin.choice[m][rd.vertex(w[2])] = rd.distribution(w, 3);
      }
    } else {
      rd.fail("unknown keyword '" + w[0] + "'");
    }
  }
  if (kind.empty())
    rd.fail("missing profile header");
  if (kind == "positional")
    return pos;
  if (kind == "stationary")
    return stat;
  if (!have_memory)
    rd.fail("finite profile without a memory line");
  return fin;
}

StrategyProfile load_profile(const Game& g, const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError(0, 0, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_profile(g, ss.str());
}

namespace {

std::string dist_text(const Game& g, const Distribution& d) {
  std::string out;
  for (const auto& [w, p] : d)
    out += " " + g.vertex_names[w] + ":" + to_string(p);
  return out;
}

}  // namespace

std::string serialize_profile(const Game& g, const StrategyProfile& p) {
  std::ostringstream out;
  if (const auto* pos = std::get_if<Positional>(&p)) {
    out << "profile positional\n";
    for (VertexId v = 0; v < pos->choice.size(); ++v)
      if (pos->choice[v])
        out << "choose " << g.vertex_names[v] << " " << g.vertex_names[*pos->choice[v]] << "\n";
  } else if (const auto* st = std::get_if<Stationary>(&p)) {
    out << "profile stationary\n";
    for (VertexId v = 0; v < st->choice.size(); ++v)
      if (!st->choice[v].empty())
        out << "choose " << g.vertex_names[v] << dist_text(g, st->choice[v]) << "\n";
  } else {
    const auto& fs = std::get<FiniteState>(p);
    out << "profile finite\nmemory " << fs.memory.size << " " << fs.memory.initial << "\n";
    for (MemoryState m = 0; m < fs.memory.size; ++m)
      for (VertexId v = 0; v < fs.memory.update[m].size(); ++v)
        if (fs.memory.update[m][v] != m)
          out << "update " << m << " " << g.vertex_names[v] << " " << fs.memory.update[m][v] << "\n";
    for (MemoryState m = 0; m < fs.memory.size; ++m)
      for (VertexId v = 0; v < fs.choice[m].size(); ++v)
        if (!fs.choice[m][v].empty())
          out << "choose " << m << " " << g.vertex_names[v] << dist_text(g, fs.choice[m][v]) << "\n";
  }
  return out.str();
}

}  // namespace smg
