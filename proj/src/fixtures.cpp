#include "smg/gadgets.hpp"
#include "smg/two_counter.hpp"

namespace smg {

std::vector<std::string> fixture_names() {
  return {"optimal-no-nash", "no-pure-nash", "no-stationary-nash", "inf-mem"};
}

Game fixture(const std::string& name) {
  if (name == "optimal-no-nash") {
    SsmgBuilder b(name, 2);
    b.vertex("v0", 0);
    b.vertex("v1", 1);
    b.terminal_won_by("t00", {});
    b.terminal_won_by("t10", {0});
    b.terminal_won_by("t11", {0, 1});
    b.edge("v0", "t00");
    b.edge("v0", "v1");
    b.edge("v1", "t10");
    b.edge("v1", "t11");
    b.init("v0");
    return b.finish();
  }
  if (name == "no-pure-nash") {
    SsmgBuilder b(name, 3);
    b.vertex("v0", 1);
    b.vertex("v1", 2);
    b.vertex("v2", 0);
    b.terminal("q1", {0, Rational(1, 2), 0});
    b.terminal("q2", {0, 0, Rational(1, 2)});
    b.terminal_won_by("w1", {0, 1});
    b.terminal_won_by("w2", {0, 2});
    b.edge("v0", "v1");
    b.edge("v0", "q1");
    b.edge("v1", "v2");
    b.edge("v1", "q2");
    b.edge("v2", "w1");
    b.edge("v2", "w2");
    b.init("v0");
    return b.finish();
  }
  if (name == "no-stationary-nash") {
    SsmgBuilder b(name, 3);
    b.vertex("v0", 1);
    b.vertex("v1", 2);
    b.vertex("v2", 0);
    b.terminal_won_by("t100", {0});
    b.terminal_won_by("t010", {1});
    b.terminal_won_by("t001", {2});
    b.edge("v0", "v1");
    b.edge("v0", "v2");
    b.edge("v1", "t100");
    b.edge("v1", "v2");
    b.edge("v2", "t010");
    b.edge("v2", "t001");
    b.init("v0");
    return b.finish();
  }
  if (name == "inf-mem") {
    TwoCounterMachine m;
    m.states = {"q0"};
    m.initial = "q0";
    m.transitions = {{"q0", Instruction::Inc, 1, "q0"}};
    Game g = gen_two_counter_gated(m);
    g.name = name;
    return g;
  }
  throw Error(ErrorCode::UnknownFixture, "unknown fixture " + name);
}

Stationary no_pure_nash_profile(const Game& g) {
  Stationary s;
  s.choice.assign(g.num_vertices(), {});
  s.choice[g.vertex("v0")] = {{g.vertex("v1"), Rational(1)}};
  s.choice[g.vertex("v1")] = {{g.vertex("v2"), Rational(1)}};
  s.choice[g.vertex("v2")] = {{g.vertex("w1"), Rational(1, 2)}, {g.vertex("w2"), Rational(1, 2)}};
  return s;
}

FiniteState no_stationary_nash_profile(const Game& g) {
  const std::size_t n = g.num_vertices();
  const VertexId v0 = g.vertex("v0"), v1 = g.vertex("v1"), v2 = g.vertex("v2");
  // Memory 1 records that v1 has been visited, i.e. player 2 is the one who
  // moved into v2.
  FiniteState fs;
  fs.memory.size = 2;
  fs.memory.initial = 0;
  fs.memory.update.assign(2, std::vector<MemoryState>(n));
  for (VertexId v = 0; v < n; ++v) {
    fs.memory.update[0][v] = v == v1 ? 1 : 0;
    fs.memory.update[1][v] = 1;
  }
  fs.choice.assign(2, std::vector<Distribution>(n));
  for (MemoryState m = 0; m < 2; ++m) {
    fs.choice[m][v0] = {{v1, Rational(1)}};
    fs.choice[m][v1] = {{g.vertex("t100"), Rational(1)}};
  }
  fs.choice[0][v2] = {{g.vertex("t001"), Rational(1)}};
  fs.choice[1][v2] = {{g.vertex("t010"), Rational(1)}};
  return fs;
}

}  // namespace smg
