#include "bisimlab/strategy/agents.hpp"

#include <algorithm>

#include "bisimlab/error.hpp"

namespace bisimlab::strategy {

using game::Side;
using pds::Action;
using pds::Configuration;
using pds::ControlState;

namespace {

std::optional<Move> find_move(const std::vector<Move>& legal, Side side, Action a, ControlState to) {
  for (const auto& m : legal) {
    if (m.side == side && m.action == a && m.target.control() == to) return m;
  }
  return std::nullopt;
}

std::optional<Move> find_target(const std::vector<Move>& legal, const Configuration& target) {
  for (const auto& m : legal) {
    if (m.target == target) return m;
  }
  return std::nullopt;
}

std::optional<IndexSequence> try_sequence(const pcp::ReductionNames& nm, const pds::Stack& s) {
  try {
    return pcp::index_sequence(nm, s);
  } catch (const MalformedInput&) {
    return std::nullopt;
  }
}

std::optional<SwitchChoice> try_choice(const pcp::PcpInstance& inst, const IndexSequence& seq) {
  try {
    return compute_switch_choice(inst, seq);
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

const Move& pending(const game::Session& s) {
  if (!s.pending_attack()) throw StrategyDefect("defender asked to move without a pending attack");
  return *s.pending_attack();
}

}  // namespace

ForcingDefender::ForcingDefender(pcp::ReductionOutput reduction, SolutionOracle oracle)
    : red_(std::move(reduction)), oracle_(std::move(oracle)) {
  if (!(oracle_.instance() == red_.instance)) throw ValidationError("oracle and reduction use different instances");
}

Move ForcingDefender::choose(const game::Session& s) {
  const Move& attack = pending(s);
  const auto legal = s.legal_moves();
  if (legal.empty()) throw StrategyDefect("no response to " + to_string(attack));
  const Position& pos = s.position();
  for (const auto& r : legal) {
    if (game::advance(pos, attack, r).is_equal_pair()) return r;
  }
  if (auto r = generation_reply(pos, attack, legal)) return *r;
  if (auto r = switch_reply(pos, attack, legal)) return *r;
  return legal.front();
}

std::optional<Move> ForcingDefender::generation_reply(const Position& pos, const Move& attack,
                                                      const std::vector<Move>& legal) const {
  const auto& nm = red_.names;
  if (pos.left.control() != nm.q0 || pos.right.control() != nm.q0p) return std::nullopt;
  if (attack.side != Side::left || attack.action != nm.g || attack.target.control() != nm.t) return std::nullopt;
  const auto seq = try_sequence(nm, pos.left.top_stack());
  if (!seq) return std::nullopt;
  const int k = oracle_.index(seq->size() + 1);
  return find_move(legal, Side::right, nm.g, nm.p_i[static_cast<std::size_t>(k - 1)]);
}

std::optional<Move> ForcingDefender::switch_reply(const Position& pos, const Move& attack,
                                                  const std::vector<Move>& legal) const {
  const auto& nm = red_.names;
  if (attack.side != Side::left) return std::nullopt;
  const ControlState lc = pos.left.control();
  const ControlState rc = pos.right.control();

  if (red_.options.order == 1) {
    if (lc != nm.q0 || rc != nm.q0p || attack.action != nm.s || attack.target.control() != nm.q_u) return std::nullopt;
    const auto seq = try_sequence(nm, pos.left.top_stack());
    if (!seq) return std::nullopt;
    const auto choice = try_choice(red_.instance, *seq);
    if (!choice) return std::nullopt;
    const IndexSequence kept(seq->begin(), seq->begin() + static_cast<std::ptrdiff_t>(choice->m));
    const auto w = nm.letters(choice->w);
    return find_target(legal, Configuration(nm.q_v, pcp::index_stack(nm, kept).push_all(w)));
  }

  if (pos.left.stack_count() < 2) return std::nullopt;
  const auto seq = try_sequence(nm, pos.left.stacks()[1]);
  if (!seq) return std::nullopt;
  const auto choice = try_choice(red_.instance, *seq);
  if (!choice) return std::nullopt;

  if (lc == nm.r && rc == nm.rp && attack.action == nm.c && attack.target.control() == nm.q) {
    const auto top = try_sequence(nm, pos.left.top_stack());
    if (!top) return std::nullopt;
    return find_move(legal, Side::right, nm.c, top->size() > choice->m + 1 ? nm.qp : nm.qpp);
  }
  if (lc == nm.p && rc == nm.pp && attack.action == nm.d && attack.target.control() == nm.q_u) {
    std::vector<pds::Stack> stacks = pos.right.stacks();
    stacks.front() = stacks.front().pop().push_all(nm.letters(choice->w));
    return find_target(legal, Configuration(nm.q_v, std::move(stacks)));
  }
  return std::nullopt;
}

SwitchAttacker::SwitchAttacker(pcp::ReductionOutput reduction) : red_(std::move(reduction)) {}

Move SwitchAttacker::choose(const game::Session& s) {
  const auto legal = s.legal_moves();
  if (legal.empty()) throw StrategyDefect("attacker has no move");
  auto proto = protocol_move(s, legal);
  Move m = proto ? *proto : verification_move(s, legal);
  if (m.framed) throw StrategyDefect("switch attacker would play framed move " + to_string(m));
  return m;
}

std::optional<Move> SwitchAttacker::protocol_move(const game::Session& s, const std::vector<Move>& legal) const {
  const auto& nm = red_.names;
  const Position& pos = s.position();
  const ControlState lc = pos.left.control();
  const ControlState rc = pos.right.control();
  if (pos.left.has_no_stacks()) return std::nullopt;

  if (lc == nm.q0 && rc == nm.q0p) {
    const auto seq = try_sequence(nm, pos.left.top_stack());
    if (!seq) return std::nullopt;
    if (red_.instance.is_partial_solution(*seq)) return find_move(legal, Side::left, nm.g, nm.t);
    return find_move(legal, Side::left, nm.s, red_.options.order == 1 ? nm.q_u : nm.r);
  }
  if (lc == nm.t) {
    if (const int k = nm.generator_index(rc); k > 0) {
      return find_move(legal, Side::left, nm.a_i[static_cast<std::size_t>(k - 1)], nm.q0);
    }
  }
  if (red_.options.order != 2) return std::nullopt;
  if (lc == nm.r && rc == nm.rp) return find_move(legal, Side::left, nm.c, nm.q);
  if (lc == nm.q && rc == nm.qp) {
    const auto& top = pos.left.top_stack();
    if (top.size() == 1 && top.top() == nm.bottom) return find_move(legal, Side::left, nm.h, nm.q);
    return find_move(legal, Side::left, nm.c1, nm.r);
  }
  if (lc == nm.q && rc == nm.qpp) return find_move(legal, Side::left, nm.c2, nm.p);
  if (lc == nm.p && rc == nm.pp) return find_move(legal, Side::left, nm.d, nm.q_u);
  return std::nullopt;
}

Move SwitchAttacker::verification_move(const game::Session& s, const std::vector<Move>& legal) const {
  const auto& nm = red_.names;
  std::vector<Move> open;
  for (const auto& m : legal) {
    if (!m.framed) open.push_back(m);
  }
  if (open.empty()) throw StrategyDefect("only framed moves available at " + to_string(s.position()));
  for (const auto& m : open) {
    if (game::defender_responses(s.lts(), s.position(), m).empty()) return m;
  }
  for (const auto& m : open) {
    if (m.action != nm.e && m.action != nm.f) return m;
  }
  return open.front();
}

Move RandomAgent::choose(const game::Session& s) {
  const auto legal = s.legal_moves();
  if (legal.empty()) throw StrategyDefect("no legal move");
  std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
  return legal[pick(rng_)];
}

SearchAttacker::SearchAttacker(std::shared_ptr<const pds::Lts> lts, int depth, TieBreak tie, std::uint64_t seed)
    : lts_(lts), solver_(lts), depth_(depth), tie_(tie), rng_(seed) {
  if (depth < 1) throw ValidationError("search depth must be positive");
}

bool SearchAttacker::doomed(const Position& pos, const Move& attack) {
  const auto answers = solver_.moves(pos.at(game::opposite(attack.side)));
  std::vector<Position> next;
  for (const auto& t : *answers) {
    if (t.action != attack.action) continue;
    Move r{game::opposite(attack.side), t.action, t.target, t.framed};
    next.push_back(game::advance(pos, attack, r));
    if (next.back().is_equal_pair()) return true;
  }
  for (const auto& n : next) {
    if (solver_.moves(n.left)->empty() && solver_.moves(n.right)->empty()) return true;
  }
  return false;
}

Move SearchAttacker::choose(const game::Session& s) {
  const auto legal = s.legal_moves();
  if (legal.empty()) throw StrategyDefect("attacker has no move");
  const Position& pos = s.position();
  const auto verdict = solver_.decide(pos, depth_);
  if (verdict.attacker_wins() && verdict.certificate) {
    for (const auto& m : legal) {
      if (m == verdict.certificate->attack) return m;
    }
  }
  std::vector<Move> safe;
  for (const auto& m : legal) {
    if (!doomed(pos, m)) safe.push_back(m);
  }
  if (safe.empty()) return legal.front();
  if (tie_ == TieBreak::first) return safe.front();
  std::uniform_int_distribution<std::size_t> pick(0, safe.size() - 1);
  return safe[pick(rng_)];
}

SearchDefender::SearchDefender(std::shared_ptr<const pds::Lts> lts, int depth) : solver_(std::move(lts)), depth_(depth) {
  if (depth < 1) throw ValidationError("search depth must be positive");
}

Move SearchDefender::choose(const game::Session& s) {
  const Move& attack = pending(s);
  const auto legal = s.legal_moves();
  if (legal.empty()) throw StrategyDefect("no response to " + to_string(attack));
  const Position& pos = s.position();
  for (const auto& r : legal) {
    if (game::advance(pos, attack, r).is_equal_pair()) return r;
  }
  if (depth_ > 1) {
    for (const auto& r : legal) {
      if (!solver_.decide(game::advance(pos, attack, r), depth_ - 1).attacker_wins()) return r;
    }
  }
  return legal.front();
}

std::unique_ptr<Agent> make_agent(const std::string& kind, Role role, const AgentContext& ctx) {
  auto need_reduction = [&]() -> const pcp::ReductionOutput& {
    if (!ctx.reduction) throw ValidationError("agent '" + kind + "' needs a reduction manifest");
    return *ctx.reduction;
  };
  auto parse_depth = [&](std::size_t colon) {
    try {
      return std::stoi(kind.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw ValidationError("bad search depth in '" + kind + "'");
    }
  };
  const bool attacker = role == Role::attacker;
  if (kind == "random") return std::make_unique<RandomAgent>(role, ctx.seed);
  if (kind == "forcing") {
    if (attacker) throw ValidationError("forcing is a Defender strategy");
    const auto& red = need_reduction();
    return std::make_unique<ForcingDefender>(red, ctx.oracle ? *ctx.oracle : SolutionOracle(red.instance, {}, {1}));
  }
  if (kind == "switch") {
    if (!attacker) throw ValidationError("switch is an Attacker strategy");
    return std::make_unique<SwitchAttacker>(need_reduction());
  }
  if (kind.rfind("search:", 0) == 0 || kind.rfind("search-random:", 0) == 0) {
    const int depth = parse_depth(kind.find(':'));
    if (attacker) {
      const TieBreak tie = kind.rfind("search-random:", 0) == 0 ? TieBreak::random : TieBreak::first;
      return std::make_unique<SearchAttacker>(ctx.lts, depth, tie, ctx.seed);
    }
    return std::make_unique<SearchDefender>(ctx.lts, depth);
  }
  throw ValidationError("unknown agent '" + kind + "' (expected forcing, switch, random, search:K)");
}

}  // namespace bisimlab::strategy
