#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "bisimlab/game/position.hpp"
#include "bisimlab/pds/semantics.hpp"

namespace bisimlab::game {

using pds::Lts;
using pds::Transition;

struct SolveOptions {
  /// Positions with left == right are Defender wins (the identity is a bisimulation).
  bool equality_shortcircuit = true;
  /// Fan out the root's Defender responses to OpenMP workers.
  bool parallel = false;
  std::size_t memo_capacity = 8'000'000;
};

/// Attacker strategy tree: Attacker's move plus one subtree per legal Defender response.
/// A node without responses is a leaf where Defender is stuck.
struct CertificateNode {
  Move attack;
  std::vector<std::pair<Move, std::shared_ptr<const CertificateNode>>> responses;
};

using Certificate = std::shared_ptr<const CertificateNode>;

/// Rounds needed by the certificate (1 for a leaf).
int certificate_depth(const CertificateNode& node);
std::size_t certificate_size(const CertificateNode& node);

struct Verdict {
  enum class Kind { attacker_wins, defender_survives };
  Kind kind = Kind::defender_survives;
  /// AttackerWins: minimal number of rounds. DefenderSurvives: the round budget searched.
  int depth = 0;
  Certificate certificate;

  bool attacker_wins() const { return kind == Kind::attacker_wins; }
};

std::string to_string(const Verdict& v);

/// Attacker moves of `p` in canonical order: left transitions, then right transitions.
std::vector<Move> attacker_moves(const Lts& lts, const Position& p);
/// Defender's answers to `attack` at `p`: same action on the opposite side, in transition order.
std::vector<Move> defender_responses(const Lts& lts, const Position& p, const Move& attack);

/// Bounded bisimulation-game solver. Memoizes, per position, the largest budget Defender is known
/// to survive and the smallest budget Attacker is known to win in, so entries are reused across
/// budgets and branches. Results are exact, so verdicts and certificates do not depend on
/// scheduling. Safe to call from one thread at a time; internal workers share the tables.
class GameSolver {
 public:
  explicit GameSolver(std::shared_ptr<const Lts> lts, SolveOptions opts = {});
  ~GameSolver();
  GameSolver(const GameSolver&) = delete;
  GameSolver& operator=(const GameSolver&) = delete;

  /// Exact decision of "Attacker wins within `rounds` rounds". Throws BudgetExceeded.
  Verdict decide(const Position& pos, int rounds);

  std::size_t memo_size() const;
  const Lts& lts() const { return *lts_; }
  const SolveOptions& options() const { return opts_; }

  std::shared_ptr<const std::vector<Transition>> moves(const Configuration& c);

 private:
  struct Tables;
  struct Entry {
    int survive = 0;
    int win = 1 << 30;
    int move = -1;
  };

  bool solve(const Position& p, int budget);
  bool solve_root_parallel(const Position& p, int budget);
  int first_winning_move(const Position& p, int budget);
  Certificate extract(const Position& p, std::unordered_map<Position, Certificate>& done);

  std::shared_ptr<const Lts> lts_;
  SolveOptions opts_;
  std::unique_ptr<Tables> tables_;
};

/// Convenience wrapper building a fresh solver.
Verdict decide_game(std::shared_ptr<const Lts> lts, const Position& pos, int rounds, const SolveOptions& opts = {});

/// Serial reference: plain recursion memoized on (position, remaining rounds), minimal depth found
/// by increasing the budget one round at a time. Kept as a differential oracle for GameSolver.
Verdict decide_game_reference(const Lts& lts, const Position& pos, int rounds, bool equality_shortcircuit = true);

struct CertificateCheck {
  bool ok = false;
  std::string diagnostic;
};

/// Replays `cert` from `pos`: every attack legal, every Defender response covered, leaves stuck.
CertificateCheck verify_certificate(const Lts& lts, const Position& pos, const CertificateNode& cert);

}  // namespace bisimlab::game
