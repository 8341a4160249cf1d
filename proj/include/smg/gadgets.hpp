#pragma once

#include "smg/arena.hpp"
#include "smg/probabilistic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace smg {

// Literals are non-zero integers: k stands for X_k and -k for its negation.
struct CnfFormula {
  int variables = 0;
  std::vector<std::vector<int>> clauses;
};

CnfFormula parse_dimacs(const std::string& text);
CnfFormula load_dimacs(const std::string& path);
std::string to_dimacs(const CnfFormula& f);
/// Throws DomainError on an empty formula, an empty clause or an out-of-range literal.
void check_formula(const CnfFormula& f);
bool satisfiable(const CnfFormula& f);
/// "X3" or "nX3".
std::string literal_name(int literal);

/// Two-player SSMG with a positional equilibrium of payoff (1,1/2) iff f is satisfiable.
Game gen_sat_posne(const CnfFormula& f);
/// Three-player variant with gate vertices v1, v2 in front of v0.
Game gen_sat_posne_qualitative(const CnfFormula& f);

/// The four-player game G(p), started at s1.
Game gen_gp(const Rational& p);

struct SqrtSumInstance {
  std::vector<std::int64_t> d;
  std::int64_t k = 1;
};
Game gen_sqrtsum(const SqrtSumInstance& inst);

enum class SatVariant { Streett, Rabin };
/// Deterministic two-player clause/literal arena.
Game gen_sat_streett(const CnfFormula& f, SatVariant variant);
/// Deterministic (n+1)-player game with a play won by everybody iff f is satisfiable.
Game gen_rabin_allwin(const CnfFormula& f);

/// New stochastic root moving to either initial vertex with probability 1/2.
Game compose_and(const Game& a, const Game& b);
/// New root owned by `chooser` moving to either initial vertex.
Game compose_or(const Game& a, const Game& b, int chooser);

std::vector<std::string> fixture_names();
Game fixture(const std::string& name);

/// The profile of the no-pure-nash fixture that mixes 1/2-1/2 at v2.
Stationary no_pure_nash_profile(const Game& g);
/// The two-state memory profile of the no-stationary-nash fixture.
FiniteState no_stationary_nash_profile(const Game& g);

}  // namespace smg
