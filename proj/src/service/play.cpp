#include "bisimlab/service/play.hpp"

#include <istream>
#include <ostream>

#include "bisimlab/error.hpp"
#include "bisimlab/game/json.hpp"

namespace bisimlab::service {

using game::Role;

const std::map<std::string, std::vector<pcp::WordPair>>& builtin_instances() {
  static const std::map<std::string, std::vector<pcp::WordPair>> table{
      {"E1", {{"A", "AA"}}},
      {"E2", {{"A", "AB"}, {"B", "BA"}}},
      {"E3", {{"A", "ABA"}, {"BA", "BAB"}}},
  };
  return table;
}

Arena arena_from_reduction(const pcp::ReductionOutput& r) { return {r.lts, r.start, r}; }

Arena arena_from_request(const Json& body) {
  if (!body.is_object()) throw MalformedInput("request body must be a JSON object");
  std::vector<pcp::WordPair> pairs;
  pcp::ReductionOptions opts;
  try {
    if (body.contains("pairs")) {
      for (const auto& p : body.at("pairs")) pairs.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
    } else {
      const auto name = body.value("instance", std::string("E1"));
      auto it = builtin_instances().find(name);
      if (it == builtin_instances().end()) throw ValidationError("unknown instance '" + name + "'");
      pairs = it->second;
    }
    opts.order = body.value("order", 1);
    opts.style = pcp::parse_style(body.value("style", std::string("eps")));
    opts.normed = body.value("normed", false);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(e.what());
  }
  return arena_from_reduction(pcp::build_reduction(pcp::PcpInstance::validate(std::move(pairs)), opts));
}

PlayOptions play_options_from_json(const Json& body) {
  PlayOptions o;
  try {
    const auto role = body.value("role", std::string("attacker"));
    if (role != "attacker" && role != "defender") throw ValidationError("role must be attacker or defender");
    o.human = role == "attacker" ? Role::attacker : Role::defender;
    o.opponent = body.value("opponent", std::string());
    o.oracle = body.value("oracle", o.oracle);
    o.seed = body.value("seed", std::uint64_t{0});
    o.max_rounds = body.value("maxRounds", o.max_rounds);
    o.stop_on_equality = body.value("stopOnEquality", o.stop_on_equality);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(e.what());
  }
  if (o.max_rounds < 1) throw ValidationError("maxRounds must be positive");
  return o;
}

PlayController::PlayController(Arena arena, PlayOptions opts)
    : arena_(std::move(arena)), opts_(std::move(opts)), session_(arena_.lts, arena_.start, {opts_.stop_on_equality}) {
  const Role agent_role = opts_.human == Role::attacker ? Role::defender : Role::attacker;
  if (opts_.opponent.empty()) opts_.opponent = agent_role == Role::defender ? "forcing" : "switch";
  strategy::AgentContext ctx{arena_.lts, arena_.reduction, std::nullopt, opts_.seed};
  if (opts_.opponent == "forcing" && arena_.reduction) ctx.oracle = strategy::parse_oracle(arena_.reduction->instance, opts_.oracle);
  opponent_ = strategy::make_agent(opts_.opponent, agent_role, ctx);
  advance_opponent();
}

bool PlayController::human_turn() const {
  if (result_) return false;
  return (session_.turn() == game::Turn::attacker) == (opts_.human == Role::attacker);
}

std::vector<game::Move> PlayController::legal_moves() const {
  return human_turn() ? session_.legal_moves() : std::vector<game::Move>{};
}

void PlayController::settle() {
  if (result_) return;
  if (const auto& out = session_.outcome()) {
    result_ = game::outcome_json(*out);
  } else if (session_.round() >= opts_.max_rounds && session_.turn() == game::Turn::attacker) {
    result_ = Json{{"winner", "defender"}, {"reason", "round-cap"}, {"round", session_.round()}};
  }
}

void PlayController::advance_opponent() {
  settle();
  while (!result_ && !human_turn()) {
    try {
      session_.apply(opponent_->choose(session_));
    } catch (const std::exception& e) {
      result_ = Json{{"winner", to_string(opts_.human)},
                     {"reason", "opponent-defect"},
                     {"round", session_.round() + 1},
                     {"detail", e.what()}};
      return;
    }
    settle();
  }
}

void PlayController::submit(const game::Move& m) {
  if (result_) throw IllegalMove("game is over");
  session_.apply(m);
  advance_opponent();
}

game::Move PlayController::resolve(const Json& body) const {
  if (!body.is_object()) throw MalformedInput("move must be a JSON object");
  if (body.contains("index")) {
    if (!body["index"].is_number_integer()) throw MalformedInput("index must be an integer");
    const auto moves = legal_moves();
    const auto k = body["index"].get<long long>();
    if (k < 0 || static_cast<std::size_t>(k) >= moves.size()) {
      throw IllegalMove("move index " + std::to_string(k) + " out of range (" + std::to_string(moves.size()) + " legal moves)");
    }
    return moves[static_cast<std::size_t>(k)];
  }
  return game::move_from_json(body);
}

Json PlayController::state() const {
  Json j;
  j["position"] = game::position_json(session_.position());
  j["round"] = session_.round();
  j["turn"] = result_ ? "finished" : session_.turn() == game::Turn::attacker ? "attacker" : "defender";
  j["humanRole"] = to_string(opts_.human);
  j["opponent"] = opponent_->name();
  j["pendingAttack"] = session_.pending_attack() ? game::move_json(*session_.pending_attack()) : Json(nullptr);
  auto& legal = j["legalMoves"] = Json::array();
  int index = 0;
  for (const auto& m : legal_moves()) {
    Json mj = game::move_json(m);
    mj["index"] = index++;
    legal.push_back(std::move(mj));
  }
  auto& hist = j["history"] = Json::array();
  for (const auto& h : session_.history()) {
    hist.push_back({{"attack", game::move_json(h.attack)},
                    {"response", h.response ? game::move_json(*h.response) : Json(nullptr)}});
  }
  j["result"] = result_ ? *result_ : Json(nullptr);
  return j;
}

std::string SessionRegistry::create(const Json& body) {
  auto controller = std::make_unique<PlayController>(arena_from_request(body), play_options_from_json(body));
  auto slot = std::make_shared<Slot>();
  slot->controller = std::move(controller);
  std::lock_guard lock(mutex_);
  std::string id = "s" + std::to_string(next_++);
  sessions_.emplace(id, std::move(slot));
  return id;
}

bool SessionRegistry::with(const std::string& id, const std::function<void(PlayController&)>& f) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    slot = it->second;
  }
  std::lock_guard lock(slot->mutex);
  f(*slot->controller);
  return true;
}

bool SessionRegistry::erase(const std::string& id) {
  std::lock_guard lock(mutex_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionRegistry::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

namespace {

void emit(std::ostream& out, const Json& j) { out << j.dump() << '\n' << std::flush; }

}  // namespace

void run_stdio(PlayController& play, std::istream& in, std::ostream& out) {
  std::string line;
  while (true) {
    Json state = play.state();
    emit(out, {{"type", "state"}, {"state", state}});
    if (play.finished()) {
      emit(out, {{"type", "result"}, {"result", state["result"]}});
      return;
    }
    emit(out, {{"type", "moves"}, {"moves", state["legalMoves"]}});
    emit(out, {{"type", "your-turn"}, {"role", state["humanRole"]}});
    while (true) {
      if (!std::getline(in, line)) return;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        play.submit(play.resolve(Json::parse(line)));
        break;
      } catch (const nlohmann::json::exception& e) {
        emit(out, {{"type", "error"}, {"status", 400}, {"error", e.what()}});
      } catch (const MalformedInput& e) {
        emit(out, {{"type", "error"}, {"status", 400}, {"error", e.what()}});
      } catch (const IllegalMove& e) {
        emit(out, {{"type", "error"}, {"status", 409}, {"error", e.what()}});
      }
    }
  }
}

}  // namespace bisimlab::service
