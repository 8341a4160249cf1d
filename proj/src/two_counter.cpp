#include "smg/two_counter.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace smg {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedMachine, what); }

const char* op_name(Instruction op) {
  switch (op) {
    case Instruction::Inc: return "inc";
    case Instruction::Dec: return "dec";
    case Instruction::Zero: return "zero";
  }
  return "?";
}

std::vector<const MachineTransition*> outgoing(const TwoCounterMachine& m, const std::string& q) {
  std::vector<const MachineTransition*> out;
  for (const auto& t : m.transitions)
    if (t.from == q)
      out.push_back(&t);
  return out;
}

bool is_test(const std::vector<const MachineTransition*>& out) { return out.size() == 2; }

}  // namespace

TwoCounterMachine parse_machine(const std::string& text) {
  TwoCounterMachine m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw))
      continue;
    std::string where = "line " + std::to_string(lineno) + ": ";
    if (kw == "state") {
      std::string q;
      if (!(ls >> q))
        malformed(where + "missing state name");
      m.states.push_back(q);
    } else if (kw == "init") {
      if (!(ls >> m.initial))
        malformed(where + "missing initial state");
    } else if (kw == "trans") {
      MachineTransition t;
      std::string op;
      if (!(ls >> t.from >> op >> t.counter >> t.to))
        malformed(where + "expected trans <q> inc|dec|zero <1|2> <q'>");
      if (op == "inc")
        t.op = Instruction::Inc;
      else if (op == "dec")
        t.op = Instruction::Dec;
      else if (op == "zero")
        t.op = Instruction::Zero;
      else
        malformed(where + "unknown instruction " + op);
      m.transitions.push_back(t);
    } else {
      malformed(where + "unknown keyword " + kw);
    }
    std::string extra;
    if (ls >> extra)
      malformed(where + "trailing token " + extra);
  }
  check_machine(m);
  return m;
}

TwoCounterMachine load_machine(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    malformed("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_machine(ss.str());
}

std::string to_string(const TwoCounterMachine& m) {
  std::ostringstream out;
  for (const auto& q : m.states)
    out << "state " << q << "\n";
  out << "init " << m.initial << "\n";
  for (const auto& t : m.transitions)
    out << "trans " << t.from << " " << op_name(t.op) << " " << t.counter << " " << t.to << "\n";
  return out.str();
}

void check_machine(const TwoCounterMachine& m) {
  std::set<std::string> states;
  for (const auto& q : m.states)
    if (!states.insert(q).second)
      malformed("duplicate state " + q);
  if (states.empty())
    malformed("machine has no states");
  if (!states.count(m.initial))
    malformed("initial state '" + m.initial + "' is not declared");
  for (const auto& t : m.transitions) {
    if (!states.count(t.from) || !states.count(t.to))
      malformed("transition " + t.from + " -> " + t.to + " uses an undeclared state");
    if (t.counter != 1 && t.counter != 2)
      malformed("counter must be 1 or 2");
  }
  for (const auto& q : m.states) {
    auto out = outgoing(m, q);
    if (out.empty())
      continue;
    if (out.size() == 1 && out[0]->op == Instruction::Inc)
      continue;
    if (out.size() == 2 && out[0]->counter == out[1]->counter && out[0]->op != out[1]->op &&
        out[0]->op != Instruction::Inc && out[1]->op != Instruction::Inc)
      continue;
    malformed("state " + q + " must have no transition, one increment, or a zero test and a decrement");
  }
}

TwoCounterMachine normalize_machine(const TwoCounterMachine& m, std::vector<std::string>* report) {
  check_machine(m);
  TwoCounterMachine out = m;
  std::set<std::string> used(m.states.begin(), m.states.end());
  auto fresh = [&](const std::string& base) {
    std::string name = base;
    while (used.count(name))
      name += "'";
    used.insert(name);
    out.states.push_back(name);
    return name;
  };
  std::vector<MachineTransition> rewritten;
  int k = 0;
  for (const auto& t : m.transitions) {
    if (t.op != Instruction::Zero || !is_test(outgoing(m, t.to))) {
      rewritten.push_back(t);
      continue;
    }
    ++k;
    std::string a = fresh("nz" + std::to_string(k) + "a"), b = fresh("nz" + std::to_string(k) + "b"),
                dead = fresh("nz" + std::to_string(k) + "dead");
    rewritten.push_back({t.from, Instruction::Zero, t.counter, a});
    rewritten.push_back({a, Instruction::Inc, 1, b});
    rewritten.push_back({b, Instruction::Zero, 1, dead});
    rewritten.push_back({b, Instruction::Dec, 1, t.to});
    if (report)
      report->push_back("zero test " + t.from + " -> " + t.to + " routed through " + a + ", " + b);
  }
  out.transitions = rewritten;
  check_machine(out);
  return out;
}

namespace {

struct Gamma {
  std::string kind;  // init, inc, dec, zero, halt
  int counter = 0;
  std::string name() const { return counter ? kind + std::to_string(counter) : kind; }
};

class CounterGameBuilder {
 public:
  CounterGameBuilder(const TwoCounterMachine& m, int counters, bool halting, bool gated)
      : m_(m), k_(counters), halting_(halting), gated_(gated), b_(name(halting, gated), players()) {}

  Game build() {
    VertexId v0 = s_gadget({"init", 0}, m_.initial, 0);
    if (gated_) {
      int gate = 2 + 4 * k_;
      VertexId g = b_.vertex("gate", gate);
      VertexId quit = b_.terminal_won_by("gate.quit", {gate});
      b_.edge(g, v0);
      b_.edge(g, quit);
      b_.init(g);
    } else {
      b_.init(v0);
    }
    return b_.finish();
  }

 private:
  static std::string name(bool halting, bool gated) {
    return halting ? "halting-variant" : gated ? "two-counter-gated" : "two-counter";
  }
  int players() const { return 2 + 4 * k_ + (gated_ ? 1 : 0); }
  int a(int j, int t) const { return 2 + 4 * (j - 1) + t; }
  int bp(int j, int t) const { return 2 + 4 * (j - 1) + 2 + t; }

  VertexId terminal(const std::string& id, std::vector<int> winners) {
    if (gated_ && std::find(winners.begin(), winners.end(), 0) != winners.end())
      winners.push_back(2 + 4 * k_);
    std::sort(winners.begin(), winners.end());
    return b_.terminal_won_by(id, winners);
  }

  std::optional<VertexId> find(const std::string& id) { return b_.raw().find_vertex(id); }

  VertexId s_gadget(const Gamma& g, const std::string& q, int t) {
    const std::string id = "S." + g.name() + "." + q + "." + std::to_string(t);
    if (auto v = find(id))
      return *v;
    std::vector<VertexId> chain;
    std::vector<int> all_a, all_b;
    for (int j = 1; j <= k_; ++j) {
      all_a.push_back(a(j, t));
      all_b.push_back(bp(j, t));
    }
    for (int j = 1; j <= k_; ++j)
      chain.push_back(b_.vertex(j == 1 ? id : id + ".A" + std::to_string(j), a(j, t)));
    for (int j = 1; j <= k_; ++j)
      chain.push_back(b_.vertex(id + ".B" + std::to_string(j), bp(j, t)));
    VertexId qa = b_.stochastic(id + ".qa"), qb = b_.stochastic(id + ".qb");
    VertexId split = b_.stochastic(id + ".split");
    const Rational pa = ratio(2, 3 * k_), pb = ratio(1, 3 * k_);
    b_.edge(qa, terminal(id + ".qa.win", all_a), pa);
    b_.edge(qa, terminal(id + ".qa.lose", {}), 1 - pa);
    b_.edge(qb, terminal(id + ".qb.win", all_b), pb);
    b_.edge(qb, terminal(id + ".qb.lose", {}), 1 - pb);
    for (std::size_t i = 0; i < chain.size(); ++i) {
      b_.edge(chain[i], i + 1 < chain.size() ? chain[i + 1] : split);
      b_.edge(chain[i], i < static_cast<std::size_t>(k_) ? qa : qb);
    }
    b_.edge(split, i_gadget(q, t), Rational(1, 2));
    for (int j = 1; j <= k_; ++j)
      b_.edge(split, c_gadget(counter_type(g, j), j, t), ratio(1, 2 * k_));
    return chain[0];
  }

  // Instruction seen by counter j's gadget; the step counter of the halting
  // variant is incremented on every step after the first.
  Gamma counter_type(const Gamma& g, int j) const {
    if (halting_ && j == 3 && g.kind != "init")
      return {"inc", 3};
    return g;
  }

  VertexId i_gadget(const std::string& q, int t) {
    const std::string id = "I." + q + "." + std::to_string(t);
    if (auto v = find(id))
      return *v;
    auto out = outgoing(m_, q);
    const int nt = 1 - t;
    if (out.empty()) {
      if (!halting_)
        return terminal(id, {});
      VertexId h0 = b_.stochastic(id), h1 = b_.stochastic(id + ".h1"), h2 = b_.stochastic(id + ".h2");
      std::vector<int> w1{0}, w2a{0}, w2b{0};
      for (int j = 1; j <= k_; ++j) {
        w1.push_back(a(j, nt));
        w2a.push_back(a(j, t));
        w2a.push_back(bp(j, nt));
        w2b.push_back(bp(j, t));
        w2b.push_back(a(j, nt));
      }
      b_.edge(h0, h1, Rational(1, 2));
      for (int j = 1; j <= k_; ++j)
        b_.edge(h0, halt_gadget(j, nt), ratio(1, 2 * k_));
      b_.edge(h1, terminal(id + ".h1.t", w1), Rational(1, 2));
      b_.edge(h1, h2, Rational(1, 2));
      b_.edge(h2, terminal(id + ".h2.a", w2a), Rational(2, 3));
      b_.edge(h2, terminal(id + ".h2.b", w2b), Rational(1, 3));
      return h0;
    }
    VertexId v = b_.vertex(id, 1);
    for (const auto* tr : out)
      b_.edge(v, s_gadget({op_name(tr->op), tr->counter}, tr->to, nt));
    return v;
  }

  VertexId c_gadget(const Gamma& g, int j, int t) {
    const std::string id = "C." + g.name() + "." + std::to_string(j) + "." + std::to_string(t);
    if (auto v = find(id))
      return *v;
    const int nt = 1 - t;
    const int A = a(j, t), An = a(j, nt), B = bp(j, t), Bn = bp(j, nt);
    const Rational half(1, 2);
    const bool reset = g.kind == "init" || (g.kind == "zero" && g.counter == j);
    const bool inc = g.kind == "inc" && g.counter == j;
    const bool dec = g.kind == "dec" && g.counter == j;
    std::vector<int> grey_w, c2a, c2b;
    if (reset) {
      grey_w = {0, 1, A, An};
      c2a = {0, 1, A, Bn};
      c2b = {0, 1, B, Bn};
    } else if (inc) {
      grey_w = {0, A, An};
      c2a = {0, A, An};
      c2b = {0, B, An};
    } else if (dec) {
      grey_w = {0, A, Bn};
      c2a = {0, A, An};
      c2b = {0, B, Bn};
    } else {
      grey_w = {0, A, An};
      c2a = {0, A, Bn};
      c2b = {0, B, Bn};
    }
    VertexId entry = reset ? b_.stochastic(id) : b_.vertex(id, 0);
    VertexId grey = reset ? entry : b_.stochastic(id + ".grey");
    VertexId c2 = b_.stochastic(id + ".c2");
    b_.edge(grey, terminal(id + ".t1", grey_w), half);
    b_.edge(grey, c2, half);
    b_.edge(c2, terminal(id + ".t2a", c2a), half);
    b_.edge(c2, terminal(id + ".t2b", c2b), half);
    if (!reset) {
      VertexId c3 = b_.stochastic(id + ".c3");
      b_.edge(entry, grey);
      b_.edge(entry, c3);
      b_.edge(c3, entry, half);
      b_.edge(c3, terminal(id + ".t3", {0, A, Bn}), half);
    }
    return entry;
  }

  // Counter gadget entered after the machine halts, with players of step s.
  VertexId halt_gadget(int j, int s) {
    const std::string id = "C.halt." + std::to_string(j) + "." + std::to_string(s);
    if (auto v = find(id))
      return *v;
    const int An = a(j, 1 - s), Bn = bp(j, 1 - s);
    const Rational half(1, 2);
    VertexId entry = b_.vertex(id, 0);
    VertexId grey = b_.stochastic(id + ".grey"), c3 = b_.stochastic(id + ".c3");
    b_.edge(entry, grey);
    b_.edge(entry, c3);
    b_.edge(grey, terminal(id + ".t1", {0, An}), half);
    b_.edge(grey, terminal(id + ".t2", {0, Bn}), half);
    b_.edge(c3, entry, half);
    b_.edge(c3, terminal(id + ".t3", {0, Bn}), half);
    return entry;
  }

  const TwoCounterMachine& m_;
  int k_;
  bool halting_;
  bool gated_;
  SsmgBuilder b_;
};

}  // namespace

Game gen_two_counter(const TwoCounterMachine& m) {
  return CounterGameBuilder(normalize_machine(m), 2, false, false).build();
}

Game gen_halting_variant(const TwoCounterMachine& m) {
  return CounterGameBuilder(normalize_machine(m), 3, true, false).build();
}

Game gen_two_counter_gated(const TwoCounterMachine& m) {
  return CounterGameBuilder(normalize_machine(m), 2, false, true).build();
}

}  // namespace smg
