#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "bisimlab/game/session.hpp"
#include "bisimlab/game/solver.hpp"
#include "bisimlab/pcp/reduction.hpp"
#include "bisimlab/strategy/oracle.hpp"

namespace bisimlab::strategy {

using game::Move;
using game::Position;
using game::Role;

/// A player. choose() is called only when it is this agent's turn in `s`; Defenders answer
/// s.pending_attack(). Agents keep private state and are not shared between sessions.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual Role role() const = 0;
  virtual std::string name() const = 0;
  virtual Move choose(const game::Session& s) = 0;
};

/// Defender's forcing strategy for a reduction, driven by a solution oracle.
class ForcingDefender final : public Agent {
 public:
  ForcingDefender(pcp::ReductionOutput reduction, SolutionOracle oracle);

  Role role() const override { return Role::defender; }
  std::string name() const override { return "forcing"; }
  Move choose(const game::Session& s) override;

 private:
  std::optional<Move> generation_reply(const Position& pos, const Move& attack, const std::vector<Move>& legal) const;
  std::optional<Move> switch_reply(const Position& pos, const Move& attack, const std::vector<Move>& legal) const;

  pcp::ReductionOutput red_;
  SolutionOracle oracle_;
};

/// Attacker that generates while the index sequence is a partial solution, then switches and
/// plays out the verification. Never plays a framed move.
class SwitchAttacker final : public Agent {
 public:
  explicit SwitchAttacker(pcp::ReductionOutput reduction);

  Role role() const override { return Role::attacker; }
  std::string name() const override { return "switch"; }
  Move choose(const game::Session& s) override;

 private:
  std::optional<Move> protocol_move(const game::Session& s, const std::vector<Move>& legal) const;
  Move verification_move(const game::Session& s, const std::vector<Move>& legal) const;

  pcp::ReductionOutput red_;
};

/// Uniformly random legal moves from a seeded generator.
class RandomAgent final : public Agent {
 public:
  RandomAgent(Role role, std::uint64_t seed) : role_(role), rng_(seed) {}

  Role role() const override { return role_; }
  std::string name() const override { return "random"; }
  Move choose(const game::Session& s) override;

 private:
  Role role_;
  std::mt19937_64 rng_;
};

enum class TieBreak { first, random };

/// Bounded-search Attacker: plays a certificate move when it wins within `depth` rounds;
/// otherwise a move Defender cannot immediately answer into an equal pair or an Attacker-stuck
/// position (first such move, or a random one).
class SearchAttacker final : public Agent {
 public:
  SearchAttacker(std::shared_ptr<const pds::Lts> lts, int depth, TieBreak tie = TieBreak::first, std::uint64_t seed = 0);

  Role role() const override { return Role::attacker; }
  std::string name() const override { return "search:" + std::to_string(depth_); }
  Move choose(const game::Session& s) override;

 private:
  bool doomed(const Position& pos, const Move& attack);

  std::shared_ptr<const pds::Lts> lts_;
  game::GameSolver solver_;
  int depth_;
  TieBreak tie_;
  std::mt19937_64 rng_;
};

/// Bounded-search Defender: prefers an equal pair, then a response surviving depth - 1 rounds.
class SearchDefender final : public Agent {
 public:
  SearchDefender(std::shared_ptr<const pds::Lts> lts, int depth);

  Role role() const override { return Role::defender; }
  std::string name() const override { return "search:" + std::to_string(depth_); }
  Move choose(const game::Session& s) override;

 private:
  game::GameSolver solver_;
  int depth_;
};

struct AgentContext {
  std::shared_ptr<const pds::Lts> lts;
  std::optional<pcp::ReductionOutput> reduction;  // needed by forcing / switch
  std::optional<SolutionOracle> oracle;           // needed by forcing
  std::uint64_t seed = 0;
};

/// Builds an agent from "forcing", "switch", "random", "search:K" or "search-random:K".
/// Throws ValidationError when the kind is unknown or does not fit the role/context.
std::unique_ptr<Agent> make_agent(const std::string& kind, Role role, const AgentContext& ctx);

}  // namespace bisimlab::strategy
