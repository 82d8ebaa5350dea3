#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "bisimlab/game/session.hpp"
#include "bisimlab/pcp/reduction.hpp"
#include "bisimlab/strategy/agents.hpp"

namespace bisimlab::service {

using Json = nlohmann::ordered_json;

/// What a game is played on.
struct Arena {
  std::shared_ptr<const pds::Lts> lts;
  game::Position start;
  std::optional<pcp::ReductionOutput> reduction;
};

/// E1 = {(A,AA)}, E2 = {(A,AB),(B,BA)}, E3 = {(A,ABA),(BA,BAB)}.
const std::map<std::string, std::vector<pcp::WordPair>>& builtin_instances();

Arena arena_from_reduction(const pcp::ReductionOutput& r);
/// {"instance": "E1"} or {"pairs": [["A","AA"]]}, plus optional "order", "style", "normed".
/// Throws MalformedInput / ValidationError.
Arena arena_from_request(const Json& body);

struct PlayOptions {
  game::Role human = game::Role::attacker;
  /// Empty: "forcing" against a human Attacker, "switch" against a human Defender.
  std::string opponent;
  std::string oracle = "1";
  std::uint64_t seed = 0;
  int max_rounds = 200;
  bool stop_on_equality = true;
};

/// Reads "role", "opponent", "oracle", "seed", "maxRounds", "stopOnEquality".
PlayOptions play_options_from_json(const Json& body);

/// A human playing one role against an agent playing the other.
class PlayController {
 public:
  PlayController(Arena arena, PlayOptions opts);

  /// {position, round, turn, humanRole, opponent, pendingAttack, legalMoves, history, result}
  Json state() const;
  /// Applies the human's move, then lets the opponent move until the human is on turn again or
  /// the game is over. Throws IllegalMove.
  void submit(const game::Move& m);
  /// A Move object or {"index": k} into the current legal moves. Throws MalformedInput.
  game::Move resolve(const Json& body) const;
  bool finished() const { return result_.has_value(); }
  std::vector<game::Move> legal_moves() const;
  bool human_turn() const;

 private:
  void advance_opponent();
  void settle();

  Arena arena_;
  PlayOptions opts_;
  game::Session session_;
  std::unique_ptr<strategy::Agent> opponent_;
  std::optional<Json> result_;
};

/// Thread-safe id -> controller map. Ids are "s1", "s2", ...
class SessionRegistry {
 public:
  /// Throws MalformedInput / ValidationError for bad bodies.
  std::string create(const Json& body);
  /// Runs `f` with the session locked; false when the id is unknown.
  bool with(const std::string& id, const std::function<void(PlayController&)>& f);
  bool erase(const std::string& id);
  std::size_t size() const;

 private:
  struct Slot {
    std::mutex mutex;
    std::unique_ptr<PlayController> controller;
  };
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t next_ = 1;
};

/// Newline-delimited JSON loop: emits state / moves / your-turn / result / error messages and
/// reads one move per line. Returns when the game ends or input is exhausted.
void run_stdio(PlayController& play, std::istream& in, std::ostream& out);

}  // namespace bisimlab::service
