#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <vector>

namespace smg {

using ColourId = std::uint32_t;
using ColourSet = boost::dynamic_bitset<>;

enum class ObjectiveKind { Reach, Buchi, CoBuchi, Parity, Streett, Rabin, Muller };

const char* objective_kind_name(ObjectiveKind kind);

struct ColourPair {
  ColourSet first;   // F
  ColourSet second;  // G
};

// A win condition over colours. Which fields are meaningful depends on kind:
// `set` for Reach/Buchi/CoBuchi, `priority` for Parity (-1 = none given),
// `pairs` for Streett/Rabin and `family` for Muller.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::Buchi;
  ColourSet set;
  std::vector<int> priority;
  std::vector<ColourPair> pairs;
  std::vector<ColourSet> family;

  static Objective reach(ColourSet f);
  static Objective buchi(ColourSet f);
  static Objective cobuchi(ColourSet f);
  static Objective parity(std::vector<int> priority);
  static Objective streett(std::vector<ColourPair> pairs);
  static Objective rabin(std::vector<ColourPair> pairs);
  static Objective muller(std::vector<ColourSet> family);

  /// Grows every colour set to n colours (new colours are absent / have no priority).
  void resize(std::size_t n);

  bool operator==(const Objective& other) const;
};

}  // namespace smg
