// Copyright 2026 The chq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chq/corpus.hpp"
#include "chq/extended_game.hpp"
#include "chq/game.hpp"
#include "chq/solver.hpp"
#include "chq/type_space.hpp"

namespace chq::cli {

// Exit codes: 0 ok; 1 parse or configuration error; 2 size cap;
// 3 property or cross-route consistency failure (must never happen on valid
// inputs); 10 survivor sets emptied under a non-additivity restriction (a
// legitimate outcome, flagged as informational).
enum ExitCode : int {
  kOk = 0,
  kParse = 1,
  kSizeCap = 2,
  kInconsistent = 3,
  kEmptyUnderNa = 10,
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string action_list(const StrategicGame& game, std::size_t i, Mask set) {
  if (set == 0) return "-";
  std::string out;
  for (int a : bits_of(set)) {
    if (!out.empty()) out += " ";
    out += game.action_label(i, a);
  }
  return out;
}

inline std::size_t print_depth(std::size_t levels, const std::string& level_flag) {
  if (level_flag == "inf" || level_flag.empty()) return levels;
  const std::size_t k = static_cast<std::size_t>(std::stoul(level_flag));
  return std::min(levels, std::max<std::size_t>(k, 1));
}

/// Human-readable survivor table; the structured mode mirrors it record for
/// record via the report/trace exporters.
inline void print_direct_table(std::ostream& out, const StrategicGame& game,
                               const SolveReport& report, std::size_t depth) {
  out << "restriction: " << report.restriction.to_string() << "\n";
  out << "route: direct\n";
  std::size_t width = 8;
  for (std::size_t i = 0; i < game.player_count(); ++i)
    width = std::max(width, game.player_name(i).size() + 2);
  out << std::left << std::setw(7) << "level";
  for (std::size_t i = 0; i < game.player_count(); ++i)
    out << std::setw(static_cast<int>(width + 8)) << game.player_name(i);
  out << "\n";
  for (std::size_t k = 0; k < depth; ++k) {
    out << std::left << std::setw(7) << (k + 1);
    for (std::size_t i = 0; i < game.player_count(); ++i)
      out << std::setw(static_cast<int>(width + 8))
          << action_list(game, i, report.levels[k][i].survivors);
    out << "\n";
  }
  out << "fixed point: level " << report.fixed_point_level << "\n";
  for (std::size_t i = 0; i < game.player_count(); ++i)
    out << "limit " << game.player_name(i) << ": " << action_list(game, i, report.limit(i))
        << "\n";
  for (std::size_t k = 0; k < depth; ++k) {
    for (std::size_t i = 0; i < game.player_count(); ++i) {
      for (const auto& [a, witness] : report.levels[k][i].witnesses) {
        out << "witness level " << (k + 1) << " " << game.player_name(i) << " "
            << game.action_label(i, a) << ":";
        for (Mask m = 0; m < witness.space().subset_count(); ++m)
          out << " " << witness.space().subset_label(m) << "="
              << format_rational(witness.value(m));
        out << "\n";
      }
    }
  }
}

struct LoadedGame {
  StrategicGame game;
  std::string path;
};

}  // namespace detail

struct SolveArgs {
  std::string game_path;
  std::string restriction = "none";
  std::string route = "direct";
  std::string levels = "inf";
  std::string format = "table";
  std::string out_path;
};

inline int cmd_solve(const SolveArgs& args, std::ostream& console) {
  const StrategicGame game = parse_game(detail::read_file(args.game_path));
  const AttitudeRestriction restriction =
      AttitudeRestriction::parse(args.restriction, game.player_count());

  if (args.route != "direct" && args.route != "extended" && args.route != "both")
    throw ParseError("route must be direct, extended, or both");
  const bool wants_extended = args.route != "direct";
  if (wants_extended && args.route == "extended" && !restriction.unrestricted())
    throw ParseError("the extended route only covers unrestricted capacities");

  std::ostringstream body;
  std::optional<SolveReport> direct;
  std::optional<std::vector<Mask>> second_route;
  std::string second_name;

  if (args.route != "extended") {
    direct = choquet_rationalizable(game, restriction);
    const std::size_t depth = detail::print_depth(direct->levels.size(), args.levels);
    if (args.format == "structured") {
      body << format_report(game, *direct);
    } else {
      detail::print_direct_table(body, game, *direct, depth);
    }
  }

  if (wants_extended) {
    if (restriction.unrestricted()) {
      const ExtendedGame ext(game);
      const EliminationTrace trace = iesda(ext);
      if (args.format == "structured") {
        body << format_trace(ext, trace);
      } else if (args.route == "extended") {
        body << "route: extended\n";
        for (std::size_t k = 0; k < trace.levels.size(); ++k) {
          const ActionProjection proj = project_to_actions(ext, trace, k);
          body << "level " << k << ":";
          for (std::size_t i = 0; i < game.player_count(); ++i)
            body << "  " << game.player_name(i) << ": "
                 << detail::action_list(game, i, proj.actions[i]);
          body << "\n";
        }
        for (std::size_t k = 0; k < trace.eliminations.size(); ++k)
          for (const auto& rec : trace.eliminations[k])
            body << "certificate level " << (k + 1) << ": " << game.player_name(rec.player)
                 << " " << ext.own_subset_label(rec.player, rec.subset) << " beaten via "
                 << game.action_label(rec.player, rec.certificate.member) << " (slack "
                 << format_rational(rec.certificate.slack) << ")\n";
      }
      const ActionProjection limit = project_to_actions(ext, trace, kLimitLevel);
      second_route = limit.actions;
      second_name = "extended elimination";
      if (args.route == "extended") {
        for (std::size_t i = 0; i < game.player_count(); ++i)
          body << "limit " << game.player_name(i) << ": "
               << detail::action_list(game, i, limit.actions[i]) << "\n";
      }
    } else {
      // The elimination route has no shaped counterpart; the additive
      // restriction has the classical expected-utility route instead.
      bool all_additive = true;
      for (std::size_t i = 0; i < game.player_count(); ++i)
        all_additive = all_additive &&
                       restriction.shapes[i] == Shape::Additive && !restriction.non_additive[i];
      if (!all_additive)
        throw ParseError(
            "route=both needs an independent second route: unrestricted (extended elimination) "
            "or add (classical expected utility)");
      const ClassicalReport classical = classical_rationalizable(game);
      second_route = classical.levels.back();
      second_name = "classical expected utility";
    }
  }

  int code = kOk;
  if (args.route == "both") {
    bool agree = true;
    for (std::size_t i = 0; i < game.player_count(); ++i)
      agree = agree && direct->limit(i) == (*second_route)[i];
    body << "verdict: " << (agree ? "CONSISTENT" : "INCONSISTENT") << " (direct vs "
         << second_name << ")\n";
    if (!agree) code = kInconsistent;
  }
  if (code == kOk && direct && direct->any_empty()) {
    body << "note: survivor sets empty under the non-additivity requirement\n";
    code = kEmptyUnderNa;
  }

  if (!args.out_path.empty()) {
    std::ofstream file(args.out_path);
    if (!file) throw ParseError("cannot write '" + args.out_path + "'");
    file << body.str();
  } else {
    console << body.str();
  }
  return code;
}

struct TypeSpaceArgs {
  std::string game_path;
  std::string space_path;  // empty: build the witness space
  std::string format = "table";
  std::string out_path;
};

inline int cmd_typespace(const TypeSpaceArgs& args, std::ostream& console) {
  const StrategicGame game = parse_game(detail::read_file(args.game_path));
  const SolveReport direct = choquet_rationalizable(
      game, AttitudeRestriction::uniform(Shape::Unrestricted, false, game.player_count()));

  std::optional<CapacityTypeSpace> space;
  std::string source;
  if (args.space_path.empty()) {
    space.emplace(build_witness_space(game, direct));
    source = "constructed witness space";
  } else {
    space.emplace(parse_type_space(detail::read_file(args.space_path), game));
    source = "file " + args.space_path;
  }

  const EpistemicReport epi = bkcr_fixpoint(*space);

  std::ostringstream body;
  body << "route: typespace\n";
  body << "source: " << source << "\n";
  if (args.format == "structured") body << serialize_type_space(*space);
  for (std::size_t k = 0; k < epi.levels.size(); ++k) {
    body << "level " << (k + 1) << ":";
    for (std::size_t i = 0; i < game.player_count(); ++i) {
      body << "  " << game.player_name(i) << ":";
      if (epi.levels[k][i] == 0) body << " -";
      for (int t : bits_of(epi.levels[k][i])) body << " " << space->type_label(i, t);
    }
    body << "\n";
  }
  bool sound = true;
  bool equal = true;
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    body << "common " << game.player_name(i) << ":";
    if (epi.common[i] == 0) body << " -";
    for (int t : bits_of(epi.common[i])) body << " " << space->type_label(i, t);
    body << "\n";
  }
  for (std::size_t k = 0; k < epi.levels.size(); ++k) {
    const auto& row = direct.levels[std::min(k, direct.levels.size() - 1)];
    for (std::size_t i = 0; i < game.player_count(); ++i)
      sound = sound && subset_of(epi.projected_actions[k][i], row[i].survivors);
  }
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    const Mask played = epi.projected_actions.back()[i];
    body << "projection " << game.player_name(i) << ": " << detail::action_list(game, i, played)
         << "\n";
    body << "survivors " << game.player_name(i) << ": "
         << detail::action_list(game, i, direct.limit(i)) << "\n";
    equal = equal && played == direct.limit(i);
  }
  body << "verdict: " << (!sound ? "VIOLATION" : equal ? "EQUAL" : "SUBSET") << "\n";

  if (!args.out_path.empty()) {
    std::ofstream file(args.out_path);
    if (!file) throw ParseError("cannot write '" + args.out_path + "'");
    file << body.str();
  } else {
    console << body.str();
  }
  return sound ? kOk : kInconsistent;
}

struct CorpusArgs {
  long count = 200;
  std::uint64_t seed = 42;
  int min_actions = 2;
  int max_actions = 3;
  long payoff_lo = -5;
  long payoff_hi = 5;
  long capacities = 200;
  int denominator = 16;
  bool skip_fixed_point = false;
  std::string out_path;
};

inline int cmd_corpus(const CorpusArgs& args, std::ostream& console) {
  CorpusOptions options;
  options.games = args.count;
  options.seed = args.seed;
  options.game_params.min_actions = args.min_actions;
  options.game_params.max_actions = args.max_actions;
  options.game_params.payoff_lo = args.payoff_lo;
  options.game_params.payoff_hi = args.payoff_hi;
  options.capacities = args.capacities;
  options.oracle_denominator = args.denominator;
  options.check_fixed_point = !args.skip_fixed_point;

  std::ostringstream body;
  body << "corpus: " << args.count << " games, seed " << args.seed << ", actions "
       << args.min_actions << ".." << args.max_actions << ", payoffs " << args.payoff_lo << ".."
       << args.payoff_hi << "\n";
  const PropertyLedger games = run_game_corpus(options);
  body << format_ledger(games);
  body << "capacities: " << options.capacities << ", states up to "
       << options.capacity_max_states << "\n";
  const PropertyLedger caps = run_capacity_corpus(options);
  body << format_ledger(caps);
  const bool ok = games.all_passed() && caps.all_passed();
  body << (ok ? "corpus: all properties passed\n" : "corpus: PROPERTY FAILURES\n");

  if (!args.out_path.empty()) {
    std::ofstream file(args.out_path);
    if (!file) throw ParseError("cannot write '" + args.out_path + "'");
    file << body.str();
  } else {
    console << body.str();
  }
  return ok ? kOk : kInconsistent;
}

/// Parses arguments and dispatches; exceptions become documented exit codes.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Choquet rationalizability solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "iterate survivor sets for a game file");
  solve->add_option("game", solve_args.game_path, "game file")->required();
  solve->add_option("--r", solve_args.restriction,
                    "capacity restriction: none|conv|conc|add, optional +na, per-player commas");
  solve->add_option("--route", solve_args.route, "direct|extended|both");
  solve->add_option("--levels", solve_args.levels, "levels to print (number or 'inf')");
  solve->add_option("--format", solve_args.format, "table|structured");
  solve->add_option("--out", solve_args.out_path, "write the report to a file");

  TypeSpaceArgs ts_args;
  CLI::App* ts = app.add_subcommand("typespace", "belief-in-rationality levels of a type space");
  ts->add_option("game", ts_args.game_path, "game file")->required();
  ts->add_option("--space", ts_args.space_path, "type-space file (default: witness space)");
  ts->add_option("--format", ts_args.format, "table|structured");
  ts->add_option("--out", ts_args.out_path, "write the report to a file");

  CorpusArgs corpus_args;
  CLI::App* corpus = app.add_subcommand("corpus", "property suite over seeded random games");
  corpus->add_option("--count", corpus_args.count, "number of games");
  corpus->add_option("--seed", corpus_args.seed, "generator seed");
  corpus->add_option("--min-actions", corpus_args.min_actions, "actions per player, lower bound");
  corpus->add_option("--max-actions", corpus_args.max_actions, "actions per player, upper bound");
  corpus->add_option("--payoff-lo", corpus_args.payoff_lo, "payoff range, lower bound");
  corpus->add_option("--payoff-hi", corpus_args.payoff_hi, "payoff range, upper bound");
  corpus->add_option("--caps", corpus_args.capacities, "random capacities for the belief suite");
  corpus->add_option("--denbound", corpus_args.denominator, "oracle grid denominator");
  corpus->add_flag("--skip-fixed-point", corpus_args.skip_fixed_point,
                   "skip the exhaustive maximality search");
  corpus->add_option("--out", corpus_args.out_path, "write the report to a file");

  try {
    std::vector<const char*> argv;
    argv.push_back("chq");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_args, out);
    if (ts->parsed()) return cmd_typespace(ts_args, out);
    if (corpus->parsed()) return cmd_corpus(corpus_args, out);
    err << "error: no subcommand\n";
    return kParse;
  } catch (const SizeCap& e) {
    err << "size cap: " << e.what() << "\n";
    return kSizeCap;
  } catch (const InternalError& e) {
    err << "internal inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
}

}  // namespace chq::cli
