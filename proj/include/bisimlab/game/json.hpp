#pragma once

#include <string>

#include <json.hpp>

#include "bisimlab/game/position.hpp"
#include "bisimlab/game/session.hpp"
#include "bisimlab/game/solver.hpp"

namespace bisimlab::game {

using Json = nlohmann::ordered_json;

// {"control": "q0", "stacks": [["I1", "⊥"]]}
Json configuration_json(const pds::Configuration& c);
pds::Configuration configuration_from_json(const Json& j);

// {"left": ..., "right": ...}
Json position_json(const Position& p);
Position position_from_json(const Json& j);

// {"side": "left", "action": "g", "target": ..., "framed": false}
Json move_json(const Move& m);
/// Throws MalformedInput when fields are missing or of the wrong type.
Move move_from_json(const Json& j);

// {"move": Move, "responses": [{"move": Move, "next": node}, ...]}
Json certificate_json(const CertificateNode& node);
/// FNV-1a 64 of the compact certificate JSON, as 16 hex digits.
std::string certificate_hash(const CertificateNode& node);

// {"verdict": "AttackerWins"|"DefenderSurvives", "depth": D, "certificate_hash": ...}
Json verdict_json(const Verdict& v);

Json outcome_json(const Outcome& o);

}  // namespace bisimlab::game
