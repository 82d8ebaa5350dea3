#include <doctest.h>

#include <random>

#include "bisimlab/error.hpp"
#include "bisimlab/game/json.hpp"
#include "bisimlab/game/session.hpp"
#include "bisimlab/game/solver.hpp"
#include "bisimlab/pcp/reduction.hpp"
#include "bisimlab/pds/codec.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace bisimlab;
using namespace bisimlab::game;
using pds::parse_configuration;

namespace {

std::shared_ptr<const pds::Lts> lts_of(pds::PushdownSystem sys, std::size_t closure_budget = pds::kDefaultClosureBudget) {
  return std::make_shared<pds::CollapsedLts>(std::make_shared<const pds::PushdownSystem>(std::move(sys)),
                                             std::vector<std::size_t>{}, closure_budget);
}

std::shared_ptr<const pds::Lts> lts_of(std::string_view text) { return lts_of(pds::parse_pds(text).system); }

// Random epsilon systems can have unbounded closures; such draws are skipped.
bool closure_finite(const pds::Lts& lts, const Position& p, int k) {
  try {
    decide_game_reference(lts, p, k, false);
    return true;
  } catch (const BudgetExceeded&) {
    return false;
  }
}

Position pos(const char* l, const char* r) { return {parse_configuration(l), parse_configuration(r)}; }

pcp::ReductionOutput reduce(const oracle::Pairs& pairs, int order, bool normed = false,
                            pcp::FirstOrderStyle style = pcp::FirstOrderStyle::epsilon_family) {
  return pcp::build_reduction(oracle::to_instance(pairs), {order, style, normed});
}

const oracle::Pairs kE1{{"A", "AA"}};
const oracle::Pairs kE2{{"A", "AB"}, {"B", "BA"}};
const oracle::Pairs kE3{{"A", "ABA"}, {"BA", "BAB"}};

Move find_move(const std::vector<Move>& moves, Side side, const char* action, const char* target) {
  for (const auto& m : moves) {
    if (m.side == side && m.action.str() == action && pds::to_string(m.target) == target) return m;
  }
  FAIL("no such move: " << action << " " << target);
  return {};
}

}  // namespace

TEST_SUITE("solver examples") {
  TEST_CASE("equal pair survives any budget") {
    const auto lts = lts_of("order 1\nrule p X a p X\nrule p X b q -\n");
    for (int k : {0, 1, 5, 20}) {
      const auto v = decide_game(lts, pos("p X ⊥", "p X ⊥"), k);
      CHECK_FALSE(v.attacker_wins());
      CHECK(v.depth == k);
    }
  }

  TEST_CASE("unmatched action is won in one round") {
    const auto lts = lts_of("order 1\nrule p X a p X\nrule q X b q X\n");
    const auto v = decide_game(lts, pos("p X ⊥", "q X ⊥"), 3);
    REQUIRE(v.attacker_wins());
    CHECK(v.depth == 1);
    REQUIRE(v.certificate);
    CHECK(v.certificate->responses.empty());
    CHECK(verify_certificate(*lts, pos("p X ⊥", "q X ⊥"), *v.certificate).ok);
  }

  TEST_CASE("zero rounds is a Defender survival") {
    const auto lts = lts_of("order 1\nrule p X a p X\nrule q X b q X\n");
    const auto v = decide_game(lts, pos("p X ⊥", "q X ⊥"), 0);
    CHECK_FALSE(v.attacker_wins());
    CHECK(v.depth == 0);
  }

  TEST_CASE("counting: a^n then b against a^(n+1) then b") {
    // p pops X on a and does b at ⊥; the right side has one more X.
    const auto lts = lts_of("order 1\nrule p X a p -\nrule p ⊥ b p ⊥\n");
    const auto start = pos("p X X ⊥", "p X X X ⊥");
    const auto v = decide_game(lts, start, 10);
    REQUIRE(v.attacker_wins());
    CHECK(v.depth == 3);
    CHECK(oracle::min_win_depth(*lts, start, 6, true) == 3);
    CHECK_FALSE(decide_game(lts, start, 2).attacker_wins());
  }

  TEST_CASE("negative budget is rejected") {
    const auto lts = lts_of("order 1\nrule p X a p X\n");
    CHECK_THROWS(decide_game(lts, pos("p X ⊥", "p X ⊥"), -1));
  }

  TEST_CASE("tiny memo capacity raises BudgetExceeded") {
    const auto r = reduce(kE2, 1);
    SolveOptions o;
    o.memo_capacity = 16;
    CHECK_THROWS_AS(decide_game(r.lts, r.start, 12, o), BudgetExceeded);
  }
}

TEST_SUITE("solver properties") {
  TEST_CASE("monotone in the budget and symmetric in the pair") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 150; ++i) {
      const int order = 1 + i % 2;
      const auto lts = lts_of(gen::random_system(rng, order, i % 3 == 0), 2000);
      const Position p{gen::random_configuration(rng, order), gen::random_configuration(rng, order)};
      if (!closure_finite(*lts, p, 5)) continue;
      GameSolver solver(lts);
      bool won = false;
      for (int k = 0; k <= 5; ++k) {
        const auto v = solver.decide(p, k);
        if (won) CHECK(v.attacker_wins());
        won = v.attacker_wins();
        const auto s = decide_game(lts, p.swapped(), k);
        CHECK(s.attacker_wins() == v.attacker_wins());
        if (v.attacker_wins()) CHECK(s.depth == v.depth);
      }
    }
  }

  TEST_CASE("differential: solver, parallel solver, reference and plain minimax") {
    std::mt19937_64 rng(11);
    int wins = 0;
    for (int i = 0; i < 200; ++i) {
      const int order = 1 + i % 2;
      const auto lts = lts_of(gen::random_system(rng, order, i % 2 == 0), 2000);
      const Position p{gen::random_configuration(rng, order), gen::random_configuration(rng, order)};
      const int k = 4;
      const bool eq = i % 4 != 3;
      if (!closure_finite(*lts, p, k)) continue;
      SolveOptions serial;
      serial.equality_shortcircuit = eq;
      SolveOptions par = serial;
      par.parallel = true;
      const auto a = decide_game(lts, p, k, serial);
      const auto b = decide_game(lts, p, k, par);
      const auto c = decide_game_reference(*lts, p, k, eq);
      const int d = oracle::min_win_depth(*lts, p, k, eq);
      CAPTURE(to_string(p));
      CHECK(a.attacker_wins() == (d >= 0));
      CHECK(b.attacker_wins() == a.attacker_wins());
      CHECK(c.attacker_wins() == a.attacker_wins());
      if (a.attacker_wins()) {
        ++wins;
        CHECK(a.depth == d);
        CHECK(b.depth == d);
        CHECK(c.depth == d);
        CHECK(certificate_depth(*a.certificate) == d);
        CHECK(certificate_hash(*a.certificate) == certificate_hash(*b.certificate));
        CHECK(verify_certificate(*lts, p, *a.certificate).ok);
        CHECK(verify_certificate(*lts, p, *c.certificate).ok);
      }
    }
    CHECK(wins > 20);
  }

  TEST_CASE("differential on reductions at small depth") {
    for (const auto& pairs : {kE1, kE2, kE3}) {
      for (int order : {1, 2}) {
        const auto r = reduce(pairs, order);
        const int k = order == 1 ? 5 : 4;
        const auto a = decide_game(r.lts, r.start, k);
        const int d = oracle::min_win_depth(*r.lts, r.start, k, true);
        CHECK(a.attacker_wins() == (d >= 0));
        const auto c = decide_game_reference(*r.lts, r.start, k);
        CHECK(c.attacker_wins() == a.attacker_wins());
      }
    }
  }

  TEST_CASE("equality shortcut does not change verdicts") {
    for (const auto& pairs : {kE1, kE2}) {
      const auto r = reduce(pairs, 1);
      SolveOptions off;
      off.equality_shortcircuit = false;
      for (int k = 0; k <= 12; ++k) {
        CHECK(decide_game(r.lts, r.start, k).attacker_wins() == decide_game(r.lts, r.start, k, off).attacker_wins());
      }
    }
  }

  TEST_CASE("memo reuse across budgets matches fresh solves") {
    const auto r = reduce(kE3, 1);
    GameSolver shared(r.lts);
    for (int k : {13, 4, 12, 20, 1}) {
      const auto a = shared.decide(r.start, k);
      const auto b = decide_game(r.lts, r.start, k);
      CHECK(a.attacker_wins() == b.attacker_wins());
      CHECK(a.depth == b.depth);
      if (a.attacker_wins()) CHECK(certificate_hash(*a.certificate) == certificate_hash(*b.certificate));
    }
  }
}

TEST_SUITE("reductions") {
  TEST_CASE("E1 survives at order 1 and order 2") {
    const auto r1 = reduce(kE1, 1);
    CHECK_FALSE(decide_game(r1.lts, r1.start, 24).attacker_wins());
    const auto r2 = reduce(kE1, 2);
    CHECK_FALSE(decide_game(r2.lts, r2.start, 30).attacker_wins());
  }

  TEST_CASE("E3 regression depths and certificates") {
    for (auto style : {pcp::FirstOrderStyle::epsilon_family, pcp::FirstOrderStyle::direct_schema}) {
      const auto r = reduce(kE3, 1, false, style);
      const auto v = decide_game(r.lts, r.start, 20, {.parallel = true});
      REQUIRE(v.attacker_wins());
      CHECK(v.depth == 13);
      CHECK(verify_certificate(*r.lts, r.start, *v.certificate).ok);
    }
    const auto r2 = reduce(kE3, 2);
    const auto v2 = decide_game(r2.lts, r2.start, 24, {.parallel = true});
    REQUIRE(v2.attacker_wins());
    CHECK(v2.depth == 20);
    CHECK(verify_certificate(*r2.lts, r2.start, *v2.certificate).ok);
  }

  TEST_CASE("E2 has an infinite solution, so Defender survives") {
    const auto r = reduce(kE2, 1);
    CHECK_FALSE(decide_game(r.lts, r.start, 40, {.parallel = true}).attacker_wins());
  }
}

TEST_SUITE("certificates") {
  TEST_CASE("a missing Defender response is reported with its path") {
    const auto r = reduce(kE3, 1);
    const auto v = decide_game(r.lts, r.start, 20);
    REQUIRE(v.attacker_wins());
    auto root = *v.certificate;
    REQUIRE_FALSE(root.responses.empty());
    const auto dropped = root.responses.front().first;
    root.responses.erase(root.responses.begin());
    const auto check = verify_certificate(*r.lts, r.start, root);
    CHECK_FALSE(check.ok);
    CHECK(check.diagnostic.find("missing Defender response") != std::string::npos);
    CHECK(check.diagnostic.find(to_string(dropped)) != std::string::npos);
  }

  TEST_CASE("an illegal attack is rejected") {
    const auto lts = lts_of("order 1\nrule p X a p X\nrule q X b q X\n");
    CertificateNode bogus{Move{Side::left, pds::Action::named("b"), parse_configuration("p X ⊥")}, {}};
    const auto check = verify_certificate(*lts, pos("p X ⊥", "q X ⊥"), bogus);
    CHECK_FALSE(check.ok);
    CHECK(check.diagnostic.find("illegal attacker move") != std::string::npos);
  }

  TEST_CASE("a leaf where Defender can still answer is rejected") {
    const auto lts = lts_of("order 1\nrule p X a p X\n");
    CertificateNode leaf{Move{Side::left, pds::Action::named("a"), parse_configuration("p X ⊥")}, {}};
    CHECK_FALSE(verify_certificate(*lts, pos("p X ⊥", "p X ⊥"), leaf).ok);
  }

  TEST_CASE("size and depth of a single leaf") {
    CertificateNode leaf{Move{Side::left, pds::Action::named("a"), parse_configuration("p X ⊥")}, {}};
    CHECK(certificate_depth(leaf) == 1);
    CHECK(certificate_size(leaf) == 1);
  }
}

TEST_SUITE("sessions") {
  TEST_CASE("a forced round on E1") {
    const auto r = reduce(kE1, 1);
    Session s(r.lts, r.start);
    CHECK(s.turn() == Turn::attacker);
    const auto g = find_move(s.legal_moves(), Side::left, "g", "t[I1 ⊥]");
    s.apply(g);
    CHECK(s.turn() == Turn::defender);
    REQUIRE(s.pending_attack());
    const auto answers = s.legal_moves();
    for (const auto& m : answers) {
      CHECK(m.side == Side::right);
      CHECK(m.action.str() == "g");
    }
    s.apply(find_move(answers, Side::right, "g", "p1[I1 ⊥]"));
    CHECK(s.round() == 1);
    CHECK(s.turn() == Turn::attacker);
    CHECK(to_string(s.position()) == to_string(pos("t I1 ⊥", "p1 I1 ⊥")));
    REQUIRE(s.history().size() == 1);
    CHECK(s.history()[0].attack == g);
  }

  TEST_CASE("illegal moves name the violated constraint") {
    const auto r = reduce(kE1, 1);
    const Session s(r.lts, r.start);
    auto message = [&](const Session& at, const Move& m) {
      try {
        at.step(m);
      } catch (const IllegalMove& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    const auto bad_action = Move{Side::left, pds::Action::named("a1"), parse_configuration("q0 I1 I1 ⊥")};
    CHECK(message(s, bad_action).find("wrong action") != std::string::npos);
    const auto bad_target = Move{Side::left, pds::Action::named("g"), parse_configuration("t I1 I1 ⊥")};
    CHECK(message(s, bad_target).find("target not a successor") != std::string::npos);
    const auto after = s.step(find_move(s.legal_moves(), Side::left, "g", "t[I1 ⊥]"));
    const auto wrong_side = Move{Side::left, pds::Action::named("g"), parse_configuration("t I1 ⊥")};
    CHECK(message(after, wrong_side).find("wrong side") != std::string::npos);
    const auto wrong_act = Move{Side::right, pds::Action::named("a1"), parse_configuration("q0 I1 I1 ⊥")};
    CHECK(message(after, wrong_act).find("wrong action") != std::string::npos);
    // step() leaves the original untouched
    CHECK(s.turn() == Turn::attacker);
    CHECK(s.round() == 0);
  }

  TEST_CASE("defender stuck ends the game") {
    const auto lts = lts_of("order 1\nrule p X a p X\nrule q X b q X\n");
    Session s(lts, pos("p X", "q X"));
    s.apply(Move{Side::left, pds::Action::named("a"), parse_configuration("p X")});
    REQUIRE(s.outcome());
    CHECK(s.outcome()->winner == Outcome::Winner::attacker);
    CHECK(s.outcome()->reason == "defender-stuck");
    CHECK(s.outcome()->round == 1);
    CHECK(s.legal_moves().empty());
    CHECK_THROWS_AS(s.apply(Move{}), IllegalMove);
  }

  TEST_CASE("attacker stuck and equality") {
    const auto lts = lts_of("order 1\nrule p X a p Y\nrule q Z a q Z\n");
    const Session stuck(lts, pos("p Y", "q Y"));
    REQUIRE(stuck.outcome());
    CHECK(stuck.outcome()->reason == "attacker-stuck");
    const Session eq(lts, pos("p X", "p X"), {.stop_on_equality = true});
    REQUIRE(eq.outcome());
    CHECK(eq.outcome()->reason == "equality");
    const Session open(lts, pos("p X", "p X"));
    CHECK_FALSE(open.outcome());
  }

  TEST_CASE("replay reproduces the session") {
    const auto r = reduce(kE1, 1);
    Session s(r.lts, r.start);
    std::vector<Move> moves;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 12 && !s.outcome(); ++i) {
      const auto legal = s.legal_moves();
      const auto m = legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
      moves.push_back(m);
      s.apply(m);
    }
    const auto again = replay(r.lts, r.start, moves);
    CHECK(again.position() == s.position());
    CHECK(again.round() == s.round());
    CHECK(again.history().size() == s.history().size());
  }

  TEST_CASE("configurations outside the system are rejected") {
    const auto lts = lts_of("order 1\nrule p X a p X\n");
    CHECK_THROWS(Session(lts, pos("p Z", "p X")));
  }
}

TEST_SUITE("game json") {
  TEST_CASE("configuration shape and round trip") {
    const auto c = parse_configuration("q0 I1 ⊥ ; ⊥");
    const auto j = configuration_json(c);
    CHECK(j.dump() == R"({"control":"q0","stacks":[["I1","⊥"],["⊥"]]})");
    CHECK(configuration_from_json(j) == c);
  }

  TEST_CASE("move and position round trip") {
    const Move m{Side::right, pds::Action::named("g"), parse_configuration("p1 I1 ⊥"), true};
    const auto j = move_json(m);
    CHECK(j["side"] == "right");
    CHECK(j["framed"] == true);
    CHECK(move_from_json(j) == m);
    const auto p = pos("q0 I1 ⊥", "q0' I1 ⊥");
    CHECK(position_from_json(position_json(p)) == p);
  }

  TEST_CASE("malformed JSON is reported") {
    CHECK_THROWS_AS(move_from_json(Json{{"side", "up"}, {"action", "g"}}), MalformedInput);
    CHECK_THROWS_AS(move_from_json(Json{{"side", "left"}}), MalformedInput);
    CHECK_THROWS_AS(configuration_from_json(Json{{"control", 3}}), MalformedInput);
    CHECK_THROWS_AS(position_from_json(Json::array()), MalformedInput);
  }

  TEST_CASE("verdict and certificate hash are stable") {
    const auto r = reduce(kE3, 1);
    const auto v = decide_game(r.lts, r.start, 20);
    const auto j = verdict_json(v);
    CHECK(j["verdict"] == "AttackerWins");
    CHECK(j["depth"] == 13);
    const auto h = certificate_hash(*v.certificate);
    CHECK(h.size() == 16);
    CHECK(h == certificate_hash(*decide_game(r.lts, r.start, 20, {.parallel = true}).certificate));
    CHECK(certificate_json(*v.certificate).contains("move"));
  }
}
