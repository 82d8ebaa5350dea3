#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "bisimlab/game/session.hpp"
#include "bisimlab/strategy/agents.hpp"

namespace bisimlab::strategy {

struct SimulateOptions {
  int max_rounds = 200;
  /// Count left == right as a Defender win.
  bool stop_on_equality = true;
};

struct PlayTrace {
  enum class Result { attacker_win, defender_win, round_cap };
  Result result = Result::round_cap;
  /// Round in which the play ended, or max_rounds at the cap.
  int rounds = 0;
  /// "defender-stuck", "attacker-stuck", "equality", "attacker-defect", "defender-defect" or "round-cap".
  std::string reason;
  std::string detail;  // defect message, if any
  std::string attacker;
  std::string defender;
  Position start;
  std::vector<game::HistoryEntry> history;
};

std::string to_string(PlayTrace::Result r);

/// Plays `attacker` against `defender` through the session machine. An agent that throws or
/// proposes an illegal move loses.
PlayTrace simulate(std::shared_ptr<const pds::Lts> lts, const Position& start, Agent& attacker, Agent& defender,
                   const SimulateOptions& opts = {});

nlohmann::ordered_json trace_json(const PlayTrace& t);
std::string transcript(const PlayTrace& t);

}  // namespace bisimlab::strategy
