#include "bisimlab/game/position.hpp"

namespace bisimlab::game {

std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

Position advance(const Position& /*p*/, const Move& attack, const Move& response) {
  if (attack.side == Side::left) return {attack.target, response.target};
  return {response.target, attack.target};
}

std::string to_string(const Position& p) {
  return "(" + pds::to_string(p.left) + ", " + pds::to_string(p.right) + ")";
}

std::string to_string(const Move& m) {
  return to_string(m.side) + " -" + std::string(m.action.str()) + "-> " + pds::to_string(m.target) +
         (m.framed ? " [framed]" : "");
}

}  // namespace bisimlab::game
