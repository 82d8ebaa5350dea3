#include "bisimlab/strategy/simulate.hpp"

#include "bisimlab/error.hpp"
#include "bisimlab/game/json.hpp"

namespace bisimlab::strategy {

std::string to_string(PlayTrace::Result r) {
  switch (r) {
    case PlayTrace::Result::attacker_win: return "AttackerWin";
    case PlayTrace::Result::defender_win: return "DefenderWin";
    case PlayTrace::Result::round_cap: return "RoundCapReached";
  }
  return "?";
}

PlayTrace simulate(std::shared_ptr<const pds::Lts> lts, const Position& start, Agent& attacker, Agent& defender,
                   const SimulateOptions& opts) {
  if (opts.max_rounds < 1) throw ValidationError("max_rounds must be at least 1");
  PlayTrace trace;
  trace.attacker = attacker.name();
  trace.defender = defender.name();
  trace.start = start;

  game::Session session(std::move(lts), start, {opts.stop_on_equality});
  while (!session.outcome() && session.round() < opts.max_rounds) {
    const bool attackers_turn = session.turn() == game::Turn::attacker;
    Agent& agent = attackers_turn ? attacker : defender;
    try {
      session.apply(agent.choose(session));
    } catch (const std::exception& e) {
      trace.result = attackers_turn ? PlayTrace::Result::defender_win : PlayTrace::Result::attacker_win;
      trace.reason = attackers_turn ? "attacker-defect" : "defender-defect";
      trace.detail = e.what();
      trace.rounds = session.round() + 1;
      trace.history = session.history();
      return trace;
    }
  }
  trace.history = session.history();
  if (const auto& out = session.outcome()) {
    trace.result = out->winner == game::Outcome::Winner::attacker ? PlayTrace::Result::attacker_win
                                                                  : PlayTrace::Result::defender_win;
    trace.reason = out->reason;
    trace.rounds = out->round;
  } else {
    trace.result = PlayTrace::Result::round_cap;
    trace.reason = "round-cap";
    trace.rounds = opts.max_rounds;
  }
  return trace;
}

nlohmann::ordered_json trace_json(const PlayTrace& t) {
  nlohmann::ordered_json j;
  j["result"] = to_string(t.result);
  j["rounds"] = t.rounds;
  j["reason"] = t.reason;
  if (!t.detail.empty()) j["detail"] = t.detail;
  j["attacker"] = t.attacker;
  j["defender"] = t.defender;
  j["start"] = game::position_json(t.start);
  auto& rounds = j["history"] = nlohmann::ordered_json::array();
  for (const auto& h : t.history) {
    nlohmann::ordered_json r;
    r["attack"] = game::move_json(h.attack);
    r["response"] = h.response ? game::move_json(*h.response) : nlohmann::ordered_json(nullptr);
    rounds.push_back(std::move(r));
  }
  return j;
}

std::string transcript(const PlayTrace& t) {
  std::string out = "attacker " + t.attacker + " vs defender " + t.defender + "\n";
  out += "start " + to_string(t.start) + "\n";
  int round = 0;
  for (const auto& h : t.history) {
    out += "round " + std::to_string(++round) + ": A " + to_string(h.attack);
    out += h.response ? "  D " + to_string(*h.response) : "  D stuck";
    out += "\n";
  }
  out += to_string(t.result) + " (" + t.reason + ") at round " + std::to_string(t.rounds) + "\n";
  if (!t.detail.empty()) out += "detail: " + t.detail + "\n";
  return out;
}

}  // namespace bisimlab::strategy
