#include "smg/analysis.hpp"
#include "smg/arena.hpp"
#include "smg/equilibria.hpp"
#include "smg/format.hpp"
#include "smg/gadgets.hpp"
#include "smg/objectives.hpp"
#include "smg/probabilistic.hpp"
#include "smg/two_counter.hpp"
#include "smg/zero_sum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using nlohmann::json;
using namespace smg;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kGuard = 3 };

struct Options {
  bool json = false;
  std::size_t guard = kDefaultBruteGuard;
  std::uint64_t strategy_guard = kDefaultStrategyGuard;
  std::uint64_t seed = 1;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// FNV-1a over the input text; enough to tell inputs apart in reports.
std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

json names(const Game& g, const VertexSet& s) {
  json a = json::array();
  for (auto v = s.find_first(); v != VertexSet::npos; v = s.find_next(v))
    a.push_back(g.vertex_names[v]);
  return a;
}

json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v)
    a.push_back(to_string(q));
  return a;
}

std::vector<int> parse_bits(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item != "0" && item != "1")
      throw std::invalid_argument("payoff bits must be 0 or 1, got '" + item + "'");
    out.push_back(item == "1");
  }
  return out;
}

void check_length(const Game& g, std::size_t n, const char* what) {
  if (n != static_cast<std::size_t>(g.players))
    throw std::invalid_argument(std::string(what) + " needs one entry per player (" + std::to_string(g.players) + ")");
}

json verdict_json(const EquilibriumVerdict& v) {
  json j{{"payoff", rationals(v.payoff)},
         {"best_response", rationals(v.best_response)},
         {"is_nash", v.is_nash},
         {"within_bounds", v.within_bounds}};
  j["violating_player"] = v.violating_player ? json(*v.violating_player) : json(nullptr);
  return j;
}

json choice_json(const Game& g, const PositionalChoice& c) {
  json j = json::object();
  for (VertexId v = 0; v < c.size(); ++v)
    if (c[v])
      j[g.vertex_names[v]] = g.vertex_names[*c[v]];
  return j;
}

// Writes text to --out, or returns it for the report when no path is given.
void emit(const Options& o, json& report, const std::string& key, const std::string& text) {
  if (o.out.empty()) {
    report[key] = text;
    return;
  }
  std::ofstream f(o.out);
  if (!f)
    throw std::invalid_argument("cannot write " + o.out);
  f << text;
  report["written"] = o.out;
}

void print_human(const json& j, int indent = 0) {
  std::string pad(indent, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_string()) {
      std::string s = it->get<std::string>();
      if (s.find('\n') != std::string::npos) {
        std::cout << pad << it.key() << ":\n" << s;
        if (s.back() != '\n')
          std::cout << "\n";
      } else {
        std::cout << pad << it.key() << ": " << s << "\n";
      }
    } else if (it->is_object() && !it->empty()) {
      std::cout << pad << it.key() << ":\n";
      print_human(*it, indent + 2);
    } else {
      std::cout << pad << it.key() << ": " << it->dump() << "\n";
    }
  }
}

// Draws a small random parity game for the selftest.
Game random_parity_game(std::mt19937_64& rng, int players, int n, int priorities) {
  Game g;
  g.players = players;
  std::uniform_int_distribution<int> owner(-1, players - 1), deg(1, 3), pick(0, n - 1), pri(0, priorities - 1),
      weight(1, 4);
  for (int v = 0; v < n; ++v)
    g.add_vertex("v" + std::to_string(v), owner(rng));
  for (int v = 0; v < n; ++v) {
    std::vector<int> succ;
    for (int k = deg(rng); k > 0; --k) {
      int w = pick(rng);
      if (std::find(succ.begin(), succ.end(), w) == succ.end())
        succ.push_back(w);
    }
    if (g.owner[v] == kStochastic) {
      std::vector<int> wt;
      int total = 0;
      for (std::size_t k = 0; k < succ.size(); ++k)
        total += wt.emplace_back(weight(rng));
      for (std::size_t k = 0; k < succ.size(); ++k)
        g.add_edge(v, succ[k], ratio(wt[k], total));
    } else {
      for (int w : succ)
        g.add_edge(v, w);
    }
  }
  for (int i = 0; i < players; ++i) {
    std::vector<int> p(g.num_colours());
    for (auto& x : p)
      x = pri(rng);
    g.objectives.push_back(Objective::parity(p));
  }
  g.initial = 0;
  g.seal();
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic multiplayer games: equilibria, values and reduction gadgets"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Print the report as JSON");
  app.add_option("--guard", o.guard, "Vertex bound for brute-force end-component enumeration");
  app.add_option("--strategy-guard", o.strategy_guard, "Bound on enumerated positional strategies or profiles");
  app.add_option("--seed", o.seed, "Seed for selftest");
  app.add_option("--out", o.out, "Output path for generators and statne-smt");

  json report;
  int code = kOk;
  std::string input_text;
  std::function<void()> action;

  auto game_arg = [](CLI::App* c, std::string& path) { c->add_option("game", path, "Game file")->required(); };
  auto load = [&](const std::string& path) {
    input_text += read_file(path);
    return load_game(path);
  };

  std::string game_path, profile_path, payoff_text, min_text, max_text, p_text;

  auto* validate_cmd = app.add_subcommand("validate", "Check a game against the well-formedness rules");
  game_arg(validate_cmd, game_path);
  validate_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      json v = json::array();
      for (const auto& x : validate(g))
        v.push_back({{"rule", x.rule}, {"where", x.where}, {"detail", x.detail}});
      report["violations"] = v;
      report["vertices"] = g.num_vertices();
      report["players"] = g.players;
      if (!v.empty())
        code = kNegative;
    };
  });

  auto* mec_cmd = app.add_subcommand("mec", "Maximal end components");
  game_arg(mec_cmd, game_path);
  mec_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      json a = json::array();
      for (const auto& m : maximal_end_components(g, g.all_vertices()).members)
        a.push_back(names(g, m));
      report["mecs"] = a;
    };
  });

  bool brute = false;
  auto* find_ec_cmd = app.add_subcommand("find-ec", "Union of the end components with a given payoff");
  game_arg(find_ec_cmd, game_path);
  find_ec_cmd->add_option("--payoff", payoff_text, "Payoff bits, e.g. 1,0")->required();
  find_ec_cmd->add_flag("--brute", brute, "Use subset enumeration");
  find_ec_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      auto x = parse_bits(payoff_text);
      check_length(g, x.size(), "--payoff");
      VertexSet u = brute ? union_ecs_with_payoff_brute(g, x, g.all_vertices(), o.guard)
                          : union_ecs_with_payoff(g, x, g.all_vertices(), o.guard);
      report["vertices"] = names(g, u);
    };
  });

  int player = 0;
  auto* values_cmd = app.add_subcommand("values", "Values of a player against the coalition of the others");
  game_arg(values_cmd, game_path);
  values_cmd->add_option("--player", player, "Player index");
  values_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      if (player < 0 || player >= g.players)
        throw std::invalid_argument("--player out of range");
      Game c = coalition_game(g, player);
      ValueTable t = s2g_values(c, o.strategy_guard);
      json vals = json::object();
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        vals[g.vertex_names[v]] = to_string(t.value[v]);
      report["values"] = vals;
      VertexSet positive = g.empty_vertices();
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (t.value[v] > 0)
          positive.set(v);
      report["positive"] = names(g, positive);
      if (t.sigma)
        report["sigma"] = choice_json(g, *t.sigma);
      if (t.tau)
        report["tau"] = choice_json(g, *t.tau);
    };
  });

  auto* payoff_cmd = app.add_subcommand("payoff", "Payoff of a strategy profile");
  game_arg(payoff_cmd, game_path);
  payoff_cmd->add_option("profile", profile_path, "Profile file")->required();
  payoff_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      input_text += read_file(profile_path);
      auto p = load_profile(g, profile_path);
      MarkovChain c = induced_chain(g, p);
      report["payoff"] = rationals(chain_payoffs(c, g.objectives));
      report["chain_states"] = c.size();
    };
  });

  auto* verify_cmd = app.add_subcommand("verify", "Check whether a profile is a Nash equilibrium");
  game_arg(verify_cmd, game_path);
  verify_cmd->add_option("profile", profile_path, "Profile file")->required();
  verify_cmd->add_option("--min", min_text, "Lower payoff bound");
  verify_cmd->add_option("--max", max_text, "Upper payoff bound");
  verify_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      input_text += read_file(profile_path);
      auto p = load_profile(g, profile_path);
      std::vector<Rational> x, y;
      if (!min_text.empty())
        check_length(g, (x = parse_rational_list(min_text)).size(), "--min");
      if (!max_text.empty())
        check_length(g, (y = parse_rational_list(max_text)).size(), "--max");
      const auto* st = std::get_if<Stationary>(&p);
      auto v = st ? verify_stationary_nash(g, *st, x, y) : verify_nash(g, p, x, y);
      report["verdict"] = verdict_json(v);
      if (!v.is_nash || !v.within_bounds)
        code = kNegative;
    };
  });

  auto* threat_cmd = app.add_subcommand("threat", "Turn a favourable positional profile into a Nash equilibrium");
  game_arg(threat_cmd, game_path);
  threat_cmd->add_option("profile", profile_path, "Positional profile file")->required();
  threat_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      input_text += read_file(profile_path);
      auto p = load_profile(g, profile_path);
      const auto* base = std::get_if<Positional>(&p);
      if (!base)
        throw std::invalid_argument("threat needs a positional profile");
      bool favourable = check_favourable(g, *base, o.strategy_guard);
      report["favourable"] = favourable;
      if (!favourable) {
        code = kNegative;
        return;
      }
      FiniteState eq = construct_threat_equilibrium(g, *base, o.strategy_guard);
      report["memory_states"] = eq.memory.size;
      report["verdict"] = verdict_json(verify_nash(g, eq));
      emit(o, report, "profile", serialize_profile(g, eq));
    };
  });

  auto* posne_cmd = app.add_subcommand("posne", "Search for a positional Nash equilibrium within bounds");
  game_arg(posne_cmd, game_path);
  posne_cmd->add_option("--min", min_text, "Lower payoff bound")->required();
  posne_cmd->add_option("--max", max_text, "Upper payoff bound")->required();
  posne_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      auto x = parse_rational_list(min_text), y = parse_rational_list(max_text);
      check_length(g, x.size(), "--min");
      check_length(g, y.size(), "--max");
      auto r = decide_posne(g, x, y, o.strategy_guard);
      report["found"] = r.profile.has_value();
      report["candidates"] = r.candidates;
      if (r.profile) {
        report["profile"] = serialize_profile(g, *r.profile);
        report["verdict"] = verdict_json(*r.verdict);
      } else {
        code = kNegative;
      }
    };
  });

  auto* strqual_cmd = app.add_subcommand("strqualne", "Decide a strictly qualitative Nash equilibrium");
  game_arg(strqual_cmd, game_path);
  strqual_cmd->add_option("--payoff", payoff_text, "Payoff bits, e.g. 1,0")->required();
  strqual_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      auto x = parse_bits(payoff_text);
      check_length(g, x.size(), "--payoff");
      auto r = decide_strqualne(g, x, o.strategy_guard);
      report["answer"] = r.answer;
      report["z"] = names(g, r.instance.z);
      report["t"] = names(g, r.instance.t);
      if (r.answer)
        report["witness"] = choice_json(g, r.witness);
      else
        code = kNegative;
    };
  });

  std::string support_text;
  auto* statne_cmd = app.add_subcommand("statne-smt", "Emit the stationary-equilibrium formula in SMT-LIB");
  game_arg(statne_cmd, game_path);
  statne_cmd->add_option("--min", min_text, "Lower payoff bound")->required();
  statne_cmd->add_option("--max", max_text, "Upper payoff bound")->required();
  statne_cmd->add_option("--support", support_text, "Edges v>w separated by commas (default: all edges)");
  statne_cmd->callback([&] {
    action = [&] {
      Game g = load(game_path);
      StatNeQuery q;
      q.x = parse_rational_list(min_text);
      q.y = parse_rational_list(max_text);
      check_length(g, q.x.size(), "--min");
      check_length(g, q.y.size(), "--max");
      if (support_text.empty()) {
        q.support = full_support(g);
      } else {
        std::stringstream ss(support_text);
        for (std::string e; std::getline(ss, e, ',');) {
          auto gt = e.find('>');
          if (gt == std::string::npos)
            throw std::invalid_argument("support edge '" + e + "' is not of the form v>w");
          q.support.emplace_back(g.vertex(e.substr(0, gt)), g.vertex(e.substr(gt + 1)));
        }
      }
      emit(o, report, "formula", emit_statne_formula(g, q));
    };
  });

  auto* gp_cmd = app.add_subcommand("gp-optimum", "Optimal stationary profile of the game G(p)");
  gp_cmd->add_option("p", p_text, "Probability p")->required();
  gp_cmd->callback([&] {
    action = [&] {
      Rational p = parse_rational(p_text);
      GpOptimum r = gp_optimal_profile(p);
      report["exact"] = r.exact;
      report["x0"] = to_string(r.x0);
      report["payoff3"] = to_string(r.payoff3);
      report["constraint"] = r.constraint;
      report["profile"] = serialize_profile(gen_gp(p), r.profile);
    };
  });

  std::string kind, arg1, arg2, d_text;
  std::int64_t k_value = 1;
  int chooser = 0;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a reduction game");
  gen_cmd
      ->add_option("kind", kind,
                   "sat-posne | sat-posne-qualitative | gp | sqrtsum | sat-streett | sat-rabin | rabin-allwin | "
                   "and | or | two-counter | halting | two-counter-gated")
      ->required();
  gen_cmd->add_option("input", arg1, "CNF file, machine file, p, or first game");
  gen_cmd->add_option("second", arg2, "Second game for and/or");
  gen_cmd->add_option("--d", d_text, "sqrtsum: comma separated d_i");
  gen_cmd->add_option("--k", k_value, "sqrtsum: k");
  gen_cmd->add_option("--chooser", chooser, "or: owner of the root");
  gen_cmd->callback([&] {
    action = [&] {
      auto need = [&](const std::string& a, const char* what) {
        if (a.empty())
          throw std::invalid_argument(std::string("gen ") + kind + " needs " + what);
      };
      auto cnf = [&] {
        need(arg1, "a DIMACS file");
        input_text += read_file(arg1);
        return load_dimacs(arg1);
      };
      auto machine = [&] {
        need(arg1, "a machine file");
        input_text += read_file(arg1);
        auto m = load_machine(arg1);
        std::vector<std::string> notes;
        normalize_machine(m, &notes);
        report["normalization"] = notes;
        return m;
      };
      Game g;
      if (kind == "sat-posne")
        g = gen_sat_posne(cnf());
      else if (kind == "sat-posne-qualitative")
        g = gen_sat_posne_qualitative(cnf());
      else if (kind == "gp") {
        need(arg1, "p");
        g = gen_gp(parse_rational(arg1));
      } else if (kind == "sqrtsum") {
        SqrtSumInstance inst;
        std::stringstream ss(d_text);
        for (std::string item; std::getline(ss, item, ',');)
          inst.d.push_back(std::stoll(item));
        inst.k = k_value;
        g = gen_sqrtsum(inst);
      } else if (kind == "sat-streett")
        g = gen_sat_streett(cnf(), SatVariant::Streett);
      else if (kind == "sat-rabin")
        g = gen_sat_streett(cnf(), SatVariant::Rabin);
      else if (kind == "rabin-allwin")
        g = gen_rabin_allwin(cnf());
      else if (kind == "and" || kind == "or") {
        need(arg1, "two games");
        need(arg2, "two games");
        Game a = load(arg1), b = load(arg2);
        g = kind == "and" ? compose_and(a, b) : compose_or(a, b, chooser);
      } else if (kind == "two-counter")
        g = gen_two_counter(machine());
      else if (kind == "halting")
        g = gen_halting_variant(machine());
      else if (kind == "two-counter-gated")
        g = gen_two_counter_gated(machine());
      else
        throw std::invalid_argument("unknown generator '" + kind + "'");
      report["vertices"] = g.num_vertices();
      report["players"] = g.players;
      emit(o, report, "game", serialize_game(g));
    };
  });

  std::string fixture_name;
  auto* fixture_cmd = app.add_subcommand("fixture", "Print one of the built-in example games");
  fixture_cmd->add_option("name", fixture_name, "optimal-no-nash | no-pure-nash | no-stationary-nash | inf-mem")
      ->required();
  fixture_cmd->callback([&] {
    action = [&] {
      Game g = fixture(fixture_name);
      report["vertices"] = g.num_vertices();
      report["players"] = g.players;
      emit(o, report, "game", serialize_game(g));
    };
  });

  int rounds = 20;
  auto* selftest_cmd = app.add_subcommand("selftest", "Cross-check the end-component search on random games");
  selftest_cmd->add_option("--rounds", rounds, "Number of random games");
  selftest_cmd->callback([&] {
    action = [&] {
      std::mt19937_64 rng(o.seed);
      int failures = 0;
      for (int r = 0; r < rounds; ++r) {
        Game g = random_parity_game(rng, 2, 6, 3);
        for (int bits = 0; bits < 4; ++bits) {
          std::vector<int> x{bits & 1, (bits >> 1) & 1};
          if (find_ec_parity(g, x) != union_ecs_with_payoff_brute(g, x, g.all_vertices(), o.guard))
            ++failures;
        }
      }
      report["seed"] = o.seed;
      report["rounds"] = rounds;
      report["failures"] = failures;
      if (failures)
        code = kNegative;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  std::string command;
  for (int i = 1; i < argc; ++i)
    command += (i > 1 ? " " : "") + std::string(argv[i]);
  auto start = std::chrono::steady_clock::now();
  // Errors go to stderr, and also to stdout as a report under --json.
  auto fail = [&](int rc, const std::string& kind, const std::string& message) {
    std::cerr << message << "\n";
    if (o.json)
      std::cout << json{{"command", command}, {"exit", rc}, {"error", {{"kind", kind}, {"message", message}}}}.dump(2)
                << "\n";
    return rc;
  };
  try {
    action();
  } catch (const ParseError& e) {
    return fail(kUsage, "ParseError", "parse error: " + std::string(e.what()));
  } catch (const Error& e) {
    return fail(e.code() == ErrorCode::TooLarge ? kGuard : kUsage, error_code_name(e.code()), e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kUsage, "UsageError", "usage error: " + std::string(e.what()));
  } catch (const std::out_of_range& e) {
    return fail(kUsage, "UsageError", "usage error: " + std::string(e.what()));
  } catch (const std::exception& e) {
    return fail(kUsage, "Error", "error: " + std::string(e.what()));
  }
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json full{{"command", command}, {"exit", code}};
  if (!input_text.empty())
    full["input_digest"] = digest(input_text);
  full["result"] = report;
  full["seconds"] = std::round(elapsed * 1000) / 1000;
  if (o.json)
    std::cout << full.dump(2) << "\n";
  else
    print_human(report);
  return code;
}
