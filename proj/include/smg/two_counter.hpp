#pragma once

#include "smg/arena.hpp"

#include <string>
#include <vector>

namespace smg {

enum class Instruction { Inc, Dec, Zero };

struct MachineTransition {
  std::string from;
  Instruction op;
  int counter;  // 1 or 2
  std::string to;
};

struct TwoCounterMachine {
  std::vector<std::string> states;
  std::string initial;
  std::vector<MachineTransition> transitions;
};

/// Lines `state <q>`, `init <q>`, `trans <q> inc|dec|zero <1|2> <q'>`.
TwoCounterMachine parse_machine(const std::string& text);
TwoCounterMachine load_machine(const std::string& path);
std::string to_string(const TwoCounterMachine& m);

/// Throws MalformedMachine unless every state has no transition, a single
/// increment, or a zero test and a decrement of the same counter.
void check_machine(const TwoCounterMachine& m);

/// Removes zero tests that lead straight into another zero test by routing
/// them through an increment/decrement detour. Appends one line per rewrite
/// to `report` if given.
TwoCounterMachine normalize_machine(const TwoCounterMachine& m, std::vector<std::string>* report = nullptr);

/// Ten-player SSMG simulating m (normalised first).
Game gen_two_counter(const TwoCounterMachine& m);
/// Fourteen-player variant with a step counter and halt gadgets.
Game gen_halting_variant(const TwoCounterMachine& m);
/// gen_two_counter plus a gate vertex owned by an extra player (index 10).
Game gen_two_counter_gated(const TwoCounterMachine& m);

}  // namespace smg
