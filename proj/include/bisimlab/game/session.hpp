#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bisimlab/game/position.hpp"
#include "bisimlab/pds/semantics.hpp"

namespace bisimlab::game {

enum class Role { attacker, defender };
std::string to_string(Role r);

enum class Turn { attacker, defender, finished };

struct Outcome {
  enum class Winner { attacker, defender };
  Winner winner;
  /// "defender-stuck", "attacker-stuck" or "equality".
  std::string reason;
  /// 1-based round in which the game ended.
  int round;
};

struct HistoryEntry {
  Position before;
  Move attack;
  std::optional<Move> response;  // absent when Defender was stuck
};

struct SessionOptions {
  /// End the game as a Defender win as soon as left == right.
  bool stop_on_equality = false;
};

/// Turn-based bisimulation game over an LTS. Value type: step() returns the successor session.
class Session {
 public:
  Session(std::shared_ptr<const pds::Lts> lts, Position start, SessionOptions opts = {});

  const Position& start() const { return start_; }
  const Position& position() const { return position_; }
  Turn turn() const { return turn_; }
  /// Completed rounds.
  int round() const { return round_; }
  const std::optional<Move>& pending_attack() const { return pending_; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  const std::optional<Outcome>& outcome() const { return outcome_; }
  const pds::Lts& lts() const { return *lts_; }
  const std::shared_ptr<const pds::Lts>& lts_ptr() const { return lts_; }
  const SessionOptions& options() const { return opts_; }

  /// Moves available to the player whose turn it is (empty once finished).
  std::vector<Move> legal_moves() const;

  /// Throws IllegalMove naming the violated constraint.
  Session step(const Move& m) const;
  void apply(const Move& m);

 private:
  void settle();

  std::shared_ptr<const pds::Lts> lts_;
  SessionOptions opts_;
  Position start_;
  Position position_;
  Turn turn_ = Turn::attacker;
  int round_ = 0;
  std::optional<Move> pending_;
  std::vector<HistoryEntry> history_;
  std::optional<Outcome> outcome_;
};

/// Replays `moves` (alternating attack/response) from `start`.
Session replay(std::shared_ptr<const pds::Lts> lts, const Position& start, const std::vector<Move>& moves,
               SessionOptions opts = {});

}  // namespace bisimlab::game
