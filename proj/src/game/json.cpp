#include "bisimlab/game/json.hpp"

#include <cstdio>

#include "bisimlab/error.hpp"

namespace bisimlab::game {

Json configuration_json(const pds::Configuration& c) {
  Json stacks = Json::array();
  for (const auto& s : c.stacks()) {
    Json syms = Json::array();
    s.for_each([&](pds::StackSymbol x) { syms.push_back(std::string(x.str())); });
    stacks.push_back(std::move(syms));
  }
  return Json{{"control", std::string(c.control().str())}, {"stacks", std::move(stacks)}};
}

pds::Configuration configuration_from_json(const Json& j) {
  try {
    std::vector<pds::Stack> stacks;
    for (const auto& s : j.at("stacks")) {
      std::vector<pds::StackSymbol> syms;
      for (const auto& x : s) syms.push_back(pds::StackSymbol::of(x.get<std::string>()));
      stacks.push_back(pds::Stack::of(syms));
    }
    return pds::Configuration(pds::ControlState::of(j.at("control").get<std::string>()), std::move(stacks));
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("bad configuration JSON: ") + e.what());
  }
}

Json position_json(const Position& p) {
  return Json{{"left", configuration_json(p.left)}, {"right", configuration_json(p.right)}};
}

Position position_from_json(const Json& j) {
  try {
    return Position{configuration_from_json(j.at("left")), configuration_from_json(j.at("right"))};
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("bad position JSON: ") + e.what());
  }
}

Json move_json(const Move& m) {
  return Json{{"side", to_string(m.side)},
              {"action", std::string(m.action.str())},
              {"target", configuration_json(m.target)},
              {"framed", m.framed}};
}

Move move_from_json(const Json& j) {
  try {
    Move m;
    const auto side = j.at("side").get<std::string>();
    if (side != "left" && side != "right") throw MalformedInput("side must be 'left' or 'right'");
    m.side = side == "left" ? Side::left : Side::right;
    const auto action = j.at("action").get<std::string>();
    m.action = action == pds::kEpsilonKeyword ? Action::epsilon() : Action::named(action);
    m.target = configuration_from_json(j.at("target"));
    m.framed = j.value("framed", false);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("bad move JSON: ") + e.what());
  }
}

Json certificate_json(const CertificateNode& node) {
  Json responses = Json::array();
  for (const auto& [move, child] : node.responses) {
    responses.push_back(Json{{"move", move_json(move)}, {"next", certificate_json(*child)}});
  }
  return Json{{"move", move_json(node.attack)}, {"responses", std::move(responses)}};
}

std::string certificate_hash(const CertificateNode& node) {
  const std::string text = certificate_json(node).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json verdict_json(const Verdict& v) {
  Json j{{"verdict", v.attacker_wins() ? "AttackerWins" : "DefenderSurvives"}, {"depth", v.depth}};
  if (v.certificate) {
    j["certificate_hash"] = certificate_hash(*v.certificate);
    j["certificate_nodes"] = certificate_size(*v.certificate);
  }
  return j;
}

Json outcome_json(const Outcome& o) {
  return Json{{"winner", o.winner == Outcome::Winner::attacker ? "attacker" : "defender"},
              {"reason", o.reason},
              {"round", o.round}};
}

}  // namespace bisimlab::game
