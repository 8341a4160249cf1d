#pragma once

#include "smg/arena.hpp"
#include "smg/probabilistic.hpp"

#include <stdexcept>
#include <string>

namespace smg {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

Game parse_game(const std::string& text);
Game load_game(const std::string& path);
std::string serialize_game(const Game& g);

// Profile files: a `profile positional|stationary|finite` header, then
//   choose [<m>] <v> <w>                  (positional)
//   choose [<m>] <v> <w>:<p> <w>:<p>...   (stationary, finite)
//   memory <size> <initial>               (finite)
//   update <m> <v> <m'>                   (finite; unlisted pairs keep m)
StrategyProfile parse_profile(const Game& g, const std::string& text);
StrategyProfile load_profile(const Game& g, const std::string& path);
std::string serialize_profile(const Game& g, const StrategyProfile& p);

}  // namespace smg
