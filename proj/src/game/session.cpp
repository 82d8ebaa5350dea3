#include "bisimlab/game/session.hpp"

#include <algorithm>

#include "bisimlab/error.hpp"
#include "bisimlab/game/solver.hpp"

namespace bisimlab::game {

std::string to_string(Role r) { return r == Role::attacker ? "attacker" : "defender"; }

Session::Session(std::shared_ptr<const pds::Lts> lts, Position start, SessionOptions opts)
    : lts_(std::move(lts)), opts_(opts), start_(start), position_(std::move(start)) {
  lts_->system().check_configuration(position_.left);
  lts_->system().check_configuration(position_.right);
  settle();
}

void Session::settle() {
  if (opts_.stop_on_equality && position_.is_equal_pair()) {
    outcome_ = Outcome{Outcome::Winner::defender, "equality", round_ + 1};
    turn_ = Turn::finished;
    return;
  }
  if (attacker_moves(*lts_, position_).empty()) {
    outcome_ = Outcome{Outcome::Winner::defender, "attacker-stuck", round_ + 1};
    turn_ = Turn::finished;
    return;
  }
  turn_ = Turn::attacker;
}

std::vector<Move> Session::legal_moves() const {
  switch (turn_) {
    case Turn::attacker: return attacker_moves(*lts_, position_);
    case Turn::defender: return defender_responses(*lts_, position_, *pending_);
    case Turn::finished: return {};
  }
  return {};
}

void Session::apply(const Move& m) {
  if (turn_ == Turn::finished) throw IllegalMove("game is over");
  if (turn_ == Turn::attacker) {
    const auto moves = attacker_moves(*lts_, position_);
    const bool action_exists = std::any_of(moves.begin(), moves.end(), [&](const Move& x) {
      return x.side == m.side && x.action == m.action;
    });
    if (!action_exists) {
      throw IllegalMove("wrong action: no " + std::string(m.action.str()) + "-transition on the " + to_string(m.side) + " side");
    }
    auto it = std::find(moves.begin(), moves.end(), m);
    if (it == moves.end()) throw IllegalMove("target not a successor: " + to_string(m));
    pending_ = *it;
    const auto answers = defender_responses(*lts_, position_, *pending_);
    if (answers.empty()) {
      history_.push_back({position_, *pending_, std::nullopt});
      outcome_ = Outcome{Outcome::Winner::attacker, "defender-stuck", round_ + 1};
      turn_ = Turn::finished;
      return;
    }
    turn_ = Turn::defender;
    return;
  }
  // Defender's response
  if (m.side == pending_->side) throw IllegalMove("wrong side: Defender must answer on the " + to_string(opposite(pending_->side)) + " side");
  if (m.action != pending_->action) {
    throw IllegalMove("wrong action: Defender must answer with " + std::string(pending_->action.str()));
  }
  const auto answers = defender_responses(*lts_, position_, *pending_);
  auto it = std::find(answers.begin(), answers.end(), m);
  if (it == answers.end()) throw IllegalMove("target not a successor: " + to_string(m));
  history_.push_back({position_, *pending_, *it});
  position_ = advance(position_, *pending_, *it);
  pending_.reset();
  ++round_;
  settle();
}

Session Session::step(const Move& m) const {
  Session next = *this;
  next.apply(m);
  return next;
}

Session replay(std::shared_ptr<const pds::Lts> lts, const Position& start, const std::vector<Move>& moves,
               SessionOptions opts) {
  Session s(std::move(lts), start, opts);
  for (const auto& m : moves) s.apply(m);
  return s;
}

}  // namespace bisimlab::game
