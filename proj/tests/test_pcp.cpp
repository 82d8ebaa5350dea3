#include <doctest.h>

#include <algorithm>
#include <deque>
#include <random>
#include <set>

#include "bisimlab/error.hpp"
#include "bisimlab/game/session.hpp"
#include "bisimlab/game/solver.hpp"
#include "bisimlab/pcp/instance.hpp"
#include "bisimlab/pcp/reduction.hpp"
#include "support/checks.hpp"
#include "support/oracles.hpp"

using namespace bisimlab;
using namespace bisimlab::pcp;
using game::Move;
using game::Position;
using game::Side;
using pds::Configuration;
using pds::parse_configuration;
using checks::stack_text;

namespace {

const oracle::Pairs kE1{{"A", "AA"}};
const oracle::Pairs kE2{{"A", "AB"}, {"B", "BA"}};
const oracle::Pairs kE3{{"A", "ABA"}, {"BA", "BAB"}};

ReductionOutput reduce(const oracle::Pairs& pairs, int order, bool normed = false,
                       FirstOrderStyle style = FirstOrderStyle::epsilon_family) {
  return build_reduction(oracle::to_instance(pairs), {order, style, normed});
}

std::vector<std::string> rule_texts(const ReductionOutput& r) {
  std::vector<std::string> out;
  for (const auto& rule : r.system->rules()) out.push_back(pds::to_string(rule));
  return out;
}

std::vector<std::string> framed_texts(const ReductionOutput& r) {
  std::vector<std::string> out;
  for (auto i : r.framed_rules) out.push_back(pds::to_string(r.system->rules()[i]));
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string rev(std::string w) {
  std::reverse(w.begin(), w.end());
  return w;
}

std::set<std::string> strings(const std::vector<Configuration>& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(pds::to_string(c));
  return out;
}

std::set<std::string> targets(const pds::Lts& lts, const Configuration& c, const char* action) {
  std::set<std::string> out;
  for (const auto& t : lts.transitions(c)) {
    if (t.action.str() == action) out.insert(pds::to_string(t.target));
  }
  return out;
}

}  // namespace

TEST_SUITE("instances") {
  TEST_CASE("validation") {
    CHECK(PcpInstance::validate({{"A", "AA"}}).size() == 1);
    CHECK(PcpInstance::validate({{"A", "AB"}, {"B", "BA"}}).size() == 2);
    CHECK_THROWS_AS(PcpInstance::validate({{"BA", "A"}}), ValidationError);
    CHECK_THROWS_AS(PcpInstance::validate({}), ValidationError);
    CHECK_THROWS_AS(PcpInstance::validate({{"", "A"}}), ValidationError);
    CHECK_THROWS_AS(PcpInstance::validate({{"A", "AC"}}), ValidationError);
    try {
      PcpInstance::validate({{"A", "AA"}, {"BA", "A"}});
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("pair 2") != std::string::npos);
    }
  }

  TEST_CASE("word helpers") {
    CHECK(head_action("AB").str() == "a");
    CHECK(head_action("BA").str() == "b");
    CHECK(tail("AB") == "B");
    CHECK(head("AB") == 'A');
    CHECK(reverse("AB") == "BA");
    CHECK(suffixes("AB") == std::vector<Word>{"AB", "B", ""});
    CHECK(suffixes("") == std::vector<Word>{""});
    CHECK_THROWS_AS(head(""), ValidationError);
    CHECK_THROWS_AS(tail(""), ValidationError);
    CHECK_THROWS_AS(head_action(""), ValidationError);
  }

  TEST_CASE("w = head w tail w") {
    for (const Word w : {"A", "B", "AB", "BBA", "ABAB"}) {
      CHECK(std::string(1, head(w)) + tail(w) == w);
      CHECK(reverse(reverse(w)) == w);
    }
  }

  TEST_CASE("file format") {
    const auto inst = parse_instance("# E2\nA AB\n\nB BA  # second\n");
    CHECK(inst.size() == 2);
    CHECK(inst.pair(2).v == "BA");
    CHECK(parse_instance(render_instance(inst)) == inst);
    try {
      parse_instance("A AA\nA\n");
      FAIL("expected MalformedInput");
    } catch (const MalformedInput& e) {
      CHECK(e.line() == 2);
    }
    try {
      parse_instance("A AA\nAB A\n");
      FAIL("expected MalformedInput");
    } catch (const MalformedInput& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("concatenations and partial solutions") {
    const auto e2 = oracle::to_instance(kE2);
    const std::vector<int> seq{1, 2, 2};
    CHECK(e2.u_concat(seq) == "ABB");
    CHECK(e2.v_concat(seq) == "ABBABA");
    CHECK(e2.is_partial_solution(seq));
    CHECK_FALSE(e2.is_partial_solution(std::vector<int>{1, 1}));
    CHECK_FALSE(e2.is_partial_solution(std::vector<int>{2}));
  }

  TEST_CASE("partial-solution trees by brute force") {
    CHECK(oracle::partial_solutions(kE3, 8) == std::vector<std::vector<int>>{{1}, {1, 2}, {1, 2, 2}});
    // E2 has a partial solution of every length: the Thue-Morse word is an infinite solution.
    const auto e2 = oracle::partial_solutions(kE2, 14);
    CHECK(e2.size() == 14);
    for (std::size_t l = 1; l <= 14; ++l) {
      CHECK(std::count_if(e2.begin(), e2.end(), [&](const auto& s) { return s.size() == l; }) == 1);
    }
  }

  TEST_CASE("is_partial_solution agrees with brute force") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 40; ++i) {
      const auto pairs = oracle::random_pairs(rng, 3, 3);
      const auto inst = oracle::to_instance(pairs);
      const auto brute = oracle::partial_solutions(pairs, 5);
      const std::set<std::vector<int>> expected(brute.begin(), brute.end());
      // every sequence over 1..n of length <= 4
      std::vector<std::vector<int>> all{{}};
      for (int len = 1; len <= 4; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& s : all) {
          if (static_cast<int>(s.size()) != len - 1) continue;
          for (int k = 1; k <= static_cast<int>(inst.size()); ++k) {
            auto t = s;
            t.push_back(k);
            next.push_back(t);
          }
        }
        for (const auto& s : next) CHECK(inst.is_partial_solution(s) == expected.contains(s));
        all.insert(all.end(), next.begin(), next.end());
      }
    }
  }
}

TEST_SUITE("first-order construction") {
  TEST_CASE("epsilon family for {(A,AA)}") {
    const auto r = reduce(kE1, 1);
    const auto rules = rule_texts(r);
    const std::vector<std::string> family{"q0 -s-> z ε",        "q0' -s-> z ε",       "zI1 -ε-> z ε",
                                          "zI1 -ε-> q_v AA", "zI1 -ε-> q_v A", "zI1 -ε-> q_v ε"};
    for (const auto& f : family) CHECK(contains(rules, f));
    const auto z_rules = std::count_if(rules.begin(), rules.end(), [](const std::string& s) {
      return s.find("-> z") != std::string::npos || s.rfind("z", 0) == 0;
    });
    CHECK(z_rules == 6);
    CHECK(contains(framed_texts(r), "q0 -s-> z ε"));
    CHECK_FALSE(contains(framed_texts(r), "q0' -s-> z ε"));
    CHECK(rules.size() == 18);
  }

  TEST_CASE("G1 and V1 rules") {
    const auto r = reduce(kE2, 1);
    const auto rules = rule_texts(r);
    const auto framed = framed_texts(r);
    for (const char* s : {"q0 -g-> t ε", "q0 -g-> p1 ε", "q0 -g-> p2 ε", "q0' -g-> p1 ε", "t -a1-> q0 I1",
                          "t -a2-> q0 I2", "p1 -a1-> q0' I1", "p1 -a2-> q0 I2", "p2 -a1-> q0 I1", "q0 -s-> q_u ε"}) {
      CHECK_MESSAGE(contains(rules, s), s);
    }
    CHECK(framed == std::vector<std::string>{"q0 -g-> p1 ε", "q0 -g-> p2 ε", "p1 -a2-> q0 I2", "p2 -a1-> q0 I1",
                                             "q0 -s-> z ε"});
    // reverse(A) = A, reverse(AB) = BA, reverse(B) = B, reverse(BA) = AB
    for (const char* s : {"q_uI1 -a-> q_u ε", "q_vI1 -b-> q_v A", "q_uI2 -b-> q_u ε", "q_vI2 -a-> q_v B",
                          "q_uA -a-> q_u ε", "q_uB -b-> q_u ε", "q_vA -a-> q_v ε", "q_vB -b-> q_v ε"}) {
      CHECK_MESSAGE(contains(rules, s), s);
    }
  }

  TEST_CASE("V1 examples for {(A,AA)}") {
    const auto rules = rule_texts(reduce(kE1, 1));
    CHECK(contains(rules, "q_uI1 -a-> q_u ε"));
    CHECK(contains(rules, "q_vI1 -a-> q_v A"));
  }

  TEST_CASE("normed adds exactly the two e-rules") {
    for (auto style : {FirstOrderStyle::epsilon_family, FirstOrderStyle::direct_schema}) {
      const auto plain = rule_texts(reduce(kE2, 1, false, style));
      const auto normed = rule_texts(reduce(kE2, 1, true, style));
      CHECK(normed.size() == plain.size() + 2);
      CHECK(contains(normed, "q_u⊥ -e-> q_u ε"));
      CHECK(contains(normed, "q_v⊥ -e-> q_v ε"));
    }
  }

  TEST_CASE("start pair") {
    const auto r = reduce(kE1, 1);
    CHECK(pds::to_string(r.start.left) == "q0[I1 ⊥]");
    CHECK(pds::to_string(r.start.right) == "q0'[I1 ⊥]");
    const auto n2 = reduce(kE1, 2, true);
    CHECK(pds::to_string(n2.start.left) == "q0[I1 ⊥][⊥]");
    CHECK(pds::to_string(n2.start.right) == "q0'[I1 ⊥][⊥]");
  }

  TEST_CASE("every framed rule is present in the system") {
    for (int order : {1, 2}) {
      const auto r = reduce(kE3, order, true);
      CHECK(std::is_sorted(r.framed_rules.begin(), r.framed_rules.end()));
      for (auto i : r.framed_rules) CHECK(i < r.system->rules().size());
    }
  }

  TEST_CASE("index stacks") {
    const auto names = ReductionNames::for_size(3);
    const std::vector<int> seq{1, 3, 2};
    const auto s = index_stack(names, seq);
    CHECK(pds::to_string(s) == "[I2 I3 I1 ⊥]");
    CHECK(index_sequence(names, s) == seq);
    CHECK(index_sequence(names, index_stack(names, {})).empty());
    CHECK_THROWS_AS(index_sequence(names, parse_configuration("q A I1 ⊥").top_stack()), MalformedInput);
    CHECK(names.index_of(names.I[2]) == 3);
    CHECK(names.index_of(names.A) == 0);
    CHECK(names.generator_index(names.p_i[1]) == 2);
    CHECK(names.action_index(names.a_i[0]) == 1);
  }

  TEST_CASE("styles parse and print") {
    CHECK(parse_style("eps") == FirstOrderStyle::epsilon_family);
    CHECK(parse_style("schema") == FirstOrderStyle::direct_schema);
    CHECK(to_string(FirstOrderStyle::direct_schema) == "schema");
    CHECK_THROWS(parse_style("other"));
    CHECK_THROWS(build_reduction(oracle::to_instance(kE1), {3}));
  }
}

TEST_SUITE("switch targets") {
  TEST_CASE("examples for {(A,AA)}") {
    const auto inst = oracle::to_instance(kE1);
    CHECK(strings(switch_targets(inst, parse_configuration("q0' I1 ⊥"))) ==
          std::set<std::string>{"q_v[A A ⊥]", "q_v[A ⊥]", "q_v[⊥]"});
    const auto six = switch_targets(inst, parse_configuration("q0' I1 I1 ⊥"));
    CHECK(six.size() == 6);
    CHECK(strings(six) == std::set<std::string>{"q_v[A A I1 ⊥]", "q_v[A I1 ⊥]", "q_v[I1 ⊥]", "q_v[A A ⊥]",
                                                 "q_v[A ⊥]", "q_v[⊥]"});
    CHECK(switch_targets(inst, parse_configuration("q0' ⊥")).empty());
    CHECK_THROWS_AS(switch_targets(inst, parse_configuration("q0' A I1 ⊥")), MalformedInput);
  }

  TEST_CASE("order: m descending, suffixes longest first") {
    const auto inst = oracle::to_instance(kE2);
    // stack I2 I1 ⊥ = sequence 1,2
    const auto t = switch_targets(inst, parse_configuration("q0 I2 I1 ⊥"));
    std::vector<std::string> got;
    for (const auto& c : t) got.push_back(pds::to_string(c));
    CHECK(got == std::vector<std::string>{"q_v[A B I1 ⊥]", "q_v[B I1 ⊥]", "q_v[I1 ⊥]", "q_v[B A ⊥]", "q_v[A ⊥]",
                                          "q_v[⊥]"});
  }

  TEST_CASE("epsilon family equals the schema plus z-configurations") {
    std::mt19937_64 rng(8);
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
      const auto pairs = oracle::random_pairs(rng, 3, 3);
      const auto r = reduce(pairs, 1);
      std::vector<Configuration> pool;
      for (const auto& c : {r.start.left, r.start.right}) {
        const auto reach = pds::reachable(*r.lts, c, 8, 500000);
        REQUIRE_FALSE(reach.truncated);
        pool.insert(pool.end(), reach.configs.begin(), reach.configs.end());
      }
      for (const auto& c : pool) {
        const bool left = c.control() == r.names.q0;
        if (!left && c.control() != r.names.q0p) continue;
        ++checked;
        // expected s-targets built from the index sequence by hand
        const auto seq = index_sequence(r.names, c.top_stack());
        std::set<std::string> expected;
        if (left) expected.insert("q_u[" + stack_text(seq) + "]");
        for (std::size_t m = 0; m <= seq.size(); ++m) {
          const std::vector<int> kept(seq.begin(), seq.begin() + static_cast<long>(m));
          expected.insert("z[" + stack_text(kept) + "]");
          if (m == seq.size()) continue;
          const auto v = rev(pairs[static_cast<std::size_t>(seq[m] - 1)].second);
          for (std::size_t k = 0; k <= v.size(); ++k) expected.insert("q_v[" + stack_text(kept, v.substr(k)) + "]");
        }
        CAPTURE(pds::to_string(c));
        CHECK(targets(*r.lts, c, "s") == expected);
        std::set<std::string> weak;
        for (const auto& [a, t] : oracle::weak_steps(*r.system, c)) {
          if (a == "s") weak.insert(t);
        }
        CHECK(weak == expected);
        std::set<std::string> qv;
        for (const auto& t : targets(*r.lts, c, "s")) {
          if (t.rfind("q_v[", 0) == 0) qv.insert(t);
        }
        CHECK(qv == strings(switch_targets(r.instance, c)));
      }
    }
    CHECK(checked > 100);
  }

  TEST_CASE("schema style emits the same s-moves minus z") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
      const auto pairs = oracle::random_pairs(rng, 3, 3);
      const auto eps = reduce(pairs, 1);
      const auto schema = reduce(pairs, 1, false, FirstOrderStyle::direct_schema);
      const auto reach = pds::reachable(*schema.lts, schema.start.right, 6, 100000);
      for (const auto& c : reach.configs) {
        auto e = targets(*eps.lts, c, "s");
        std::erase_if(e, [](const std::string& t) { return t.rfind("z[", 0) == 0; });
        CHECK(targets(*schema.lts, c, "s") == e);
        for (const char* act : {"g", "a", "b", "a1", "a2", "a3"}) CHECK(targets(*schema.lts, c, act) == targets(*eps.lts, c, act));
      }
    }
  }

  TEST_CASE("schema framing: s-moves of q0 are framed except q_u") {
    const auto r = reduce(kE1, 1, false, FirstOrderStyle::direct_schema);
    for (const auto& t : r.lts->transitions(parse_configuration("q0 I1 ⊥"))) {
      if (t.action.str() != "s") continue;
      CHECK(t.framed == (t.target.control() != r.names.q_u));
    }
    for (const auto& t : r.lts->transitions(parse_configuration("q0' I1 ⊥"))) CHECK_FALSE(t.framed);
  }
}

TEST_SUITE("game properties") {
  TEST_CASE("forcing: every deviation can be answered with an equal pair") {
    for (const auto& pairs : {kE1, kE2, kE3}) {
      for (int order : {1, 2}) {
        const auto rep = checks::forcing(reduce(pairs, order), 6);
        CHECK_MESSAGE(rep.failures == 0, rep.first_failure);
        CHECK(rep.checked > 5);
      }
    }
  }

  TEST_CASE("weak-step switch check on E1 and E2") {
    for (const auto& pairs : {kE1, kE2}) {
      const auto rep = checks::weak_step_switch(pairs, 8);
      CHECK_MESSAGE(rep.failures == 0, rep.first_failure);
      CHECK(rep.checked > 5);
    }
  }

  TEST_CASE("verification phase is deterministic") {
    for (const auto& pairs : {kE1, kE2, kE3}) {
      for (int order : {1, 2}) {
        for (bool normed : {false, true}) {
          const auto r = reduce(pairs, order, normed);
          for (const auto& side : {r.start.left, r.start.right}) {
            const auto reach = pds::reachable(*r.lts, side, order == 1 ? 10 : 14, 400000);
            for (const auto& c : reach.configs) {
              if (c.control() != r.names.q_u && c.control() != r.names.q_v) continue;
              auto ts = r.lts->transitions(c);
              std::erase_if(ts, [&](const pds::Transition& t) { return t.action == r.names.f; });
              CHECK_MESSAGE(ts.size() <= 1, pds::to_string(c));
            }
          }
        }
      }
    }
  }

  TEST_CASE("verification ends in mutual stuck iff the words agree") {
    std::mt19937_64 rng(17);
    int agree = 0;
    for (int i = 0; i < 200; ++i) {
      const auto pairs = oracle::random_pairs(rng, 3, 3);
      const int n = static_cast<int>(pairs.size());
      const int l = std::uniform_int_distribution<int>(1, 5)(rng);
      std::vector<int> seq{1};
      for (int k = 1; k < l; ++k) seq.push_back(std::uniform_int_distribution<int>(1, n)(rng));
      const auto m = std::uniform_int_distribution<std::size_t>(0, seq.size() - 1)(rng);
      std::string w;
      const auto inst = oracle::to_instance(pairs);
      const std::vector<int> prefix(seq.begin(), seq.begin() + static_cast<long>(m));
      const auto u = inst.u_concat(seq), vm = inst.v_concat(prefix);
      if (i % 3 == 1 && u.compare(0, vm.size(), vm) == 0 && vm.size() <= u.size()) {
        w = rev(u.substr(vm.size()));
      } else if (i % 3 == 0) {
        const int len = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int k = 0; k < len; ++k) w += "AB"[rng() % 2];
      } else {
        const auto v = rev(pairs[static_cast<std::size_t>(seq[m] - 1)].second);
        w = v.substr(std::uniform_int_distribution<std::size_t>(0, v.size())(rng));
      }
      const bool expected = oracle::verification_equal(pairs, seq, m, w);
      agree += expected;
      for (int order : {1, 2}) {
        const auto r = reduce(pairs, order);
        CAPTURE(order);
        CHECK(checks::verification_mutual_stuck(r, seq, m, w) == expected);
        std::string left = "q_u " + stack_text(seq), right = "q_v " + stack_text(prefix, w);
        if (order == 2) {
          left += " ; " + stack_text(seq);
          right += " ; " + stack_text(seq);
        }
        const auto v = game::decide_game(r.lts, {parse_configuration(left), parse_configuration(right)}, 64);
        CHECK(v.attacker_wins() == !expected);
      }
    }
    CHECK(agree > 20);
    CHECK(agree < 180);
  }
}

TEST_SUITE("second-order construction") {
  TEST_CASE("rule set for {(A,AA)}") {
    const auto r = reduce(kE1, 2);
    const auto rules = rule_texts(r);
    CHECK(rules.size() == 41);
    for (const char* s : {"q0I1 -s-> (r,push)", "q0'⊥ -s-> (r',push)", "r -c-> q ε", "r' -c-> q' ε", "r' -c-> q'' ε",
                          "qI1 -c1-> r ε", "q'I1 -c1-> r' ε", "q -c2-> p ε", "q'' -c2-> p' ε", "q⊥ -h-> q ε",
                          "pI1 -d-> (q_u,pop)", "p'I1 -d-> q_v AA", "p'I1 -d-> q_v A", "p'I1 -d-> q_v ε"}) {
      CHECK_MESSAGE(contains(rules, s), s);
    }
    CHECK(framed_texts(r) == std::vector<std::string>{"q0 -g-> p1 ε", "r -c-> q' ε", "r -c-> q'' ε",
                                                      "q''I1 -c1-> r ε", "q' -c2-> p ε", "pI1 -d-> q_v AA",
                                                      "pI1 -d-> q_v A", "pI1 -d-> q_v ε"});
  }

  TEST_CASE("the switch doubles the stacks") {
    const auto r = reduce(kE1, 2);
    const game::Session s(r.lts, r.start);
    std::optional<Move> sw;
    for (const auto& m : s.legal_moves()) {
      if (m.side == Side::left && m.action.str() == "s") sw = m;
    }
    REQUIRE(sw);
    CHECK(pds::to_string(sw->target) == "r[I1 ⊥][I1 ⊥]");
    const auto after = s.step(*sw);
    const auto answers = after.legal_moves();
    REQUIRE(answers.size() == 1);
    CHECK(pds::to_string(answers[0].target) == "r'[I1 ⊥][I1 ⊥]");
  }

  TEST_CASE("h is available only on the left at q[⊥][σ]") {
    const auto r = reduce(kE1, 2);
    const Position p{parse_configuration("q ⊥ ; I1 ⊥"), parse_configuration("q' ⊥ ; I1 ⊥")};
    // the emptied top stack is removed
    CHECK(targets(*r.lts, p.left, "h") == std::set<std::string>{"q[I1 ⊥]"});
    CHECK(targets(*r.lts, p.right, "h").empty());
    const auto v = game::decide_game(r.lts, p, 1);
    CHECK(v.attacker_wins());
    CHECK(v.certificate->attack.action.str() == "h");
  }

  TEST_CASE("d-moves from p and p'") {
    const auto r = reduce(kE1, 2);
    const auto left = parse_configuration("p I1 ⊥ ; I1 ⊥");
    const auto right = parse_configuration("p' I1 ⊥ ; I1 ⊥");
    CHECK(targets(*r.lts, left, "d") ==
          std::set<std::string>{"q_u[I1 ⊥]", "q_v[A A ⊥][I1 ⊥]", "q_v[A ⊥][I1 ⊥]", "q_v[⊥][I1 ⊥]"});
    CHECK(targets(*r.lts, right, "d") == std::set<std::string>{"q_v[A A ⊥][I1 ⊥]", "q_v[A ⊥][I1 ⊥]", "q_v[⊥][I1 ⊥]"});
    const Position p{left, right};
    const Move attack{Side::left, r.names.d, parse_configuration("q_u I1 ⊥")};
    CHECK(game::defender_responses(*r.lts, p, attack).size() == 3);
  }

  TEST_CASE("synchrony: only shortening both top stacks avoids an equal pair") {
    const auto r = reduce(kE2, 2);
    for (const char* sigma : {"I1 ⊥", "I2 I1 ⊥", "I1 I2 I1 ⊥"}) {
      const std::string s(sigma);
      const Position p{parse_configuration("q " + s + " ; " + s), parse_configuration("q' " + s + " ; " + s)};
      int kept = 0;
      for (const auto& attack : game::attacker_moves(*r.lts, p)) {
        const auto answers = game::defender_responses(*r.lts, p, attack);
        const bool losing = std::any_of(answers.begin(), answers.end(), [&](const Move& d) {
          return game::advance(p, attack, d).is_equal_pair();
        });
        if (losing) continue;
        ++kept;
        CHECK(attack.action == r.names.c1);
        for (const auto& d : answers) {
          const auto next = game::advance(p, attack, d);
          CHECK(next.left.top_stack().size() + 1 == p.left.top_stack().size());
          CHECK(next.right.top_stack().size() + 1 == p.right.top_stack().size());
          CHECK(next.left.stacks()[1] == p.left.stacks()[1]);
        }
      }
      CHECK(kept >= 1);
      CHECK_FALSE(game::decide_game(r.lts, p, 2).attacker_wins());
    }
  }

  TEST_CASE("q_pop variant") {
    const auto plain = reduce(kE1, 2);
    const auto normed = reduce(kE1, 2, true);
    const auto rules = rule_texts(normed);
    CHECK(contains(rules, "q_u -f-> q_pop ε"));
    CHECK(contains(rules, "q_pop⊥ -f-> (q_pop,pop)"));
    CHECK(contains(rules, "q_vI1 -f-> (q_pop,pop)"));
    CHECK_FALSE(contains(rules, "q_u⊥ -f-> (q_pop,pop)"));
    CHECK(rules.size() == 94);
    CHECK(normed.framed_rules.size() == 8);
    CHECK(plain.framed_rules.size() == 8);
  }
}

TEST_SUITE("manifest") {
  TEST_CASE("round trip for every variant") {
    for (const auto& pairs : {kE1, kE2, kE3}) {
      for (int order : {1, 2}) {
        for (bool normed : {false, true}) {
          for (auto style : {FirstOrderStyle::epsilon_family, FirstOrderStyle::direct_schema}) {
            if (order == 2 && style == FirstOrderStyle::direct_schema) continue;
            const auto r = reduce(pairs, order, normed, style);
            const auto j = manifest_json(r);
            CHECK(j["format"] == "bisimlab-reduction/1");
            const auto back = reduction_from_manifest(j, r.system.get());
            CHECK(*back.system == *r.system);
            CHECK(back.framed_rules == r.framed_rules);
            CHECK(back.start == r.start);
            CHECK(manifest_json(back) == j);
          }
        }
      }
    }
  }

  TEST_CASE("a manifest does not accept a different system") {
    const auto r = reduce(kE1, 1);
    const auto other = reduce(kE2, 1);
    CHECK_THROWS_AS(reduction_from_manifest(manifest_json(r), other.system.get()), ValidationError);
  }

  TEST_CASE("start text for the normed order-2 variant") {
    const auto j = manifest_json(reduce(kE1, 2, true));
    CHECK(j["start"]["left"] == "q0 I1 ⊥ ; ⊥");
    CHECK(j["start"]["right"] == "q0' I1 ⊥ ; ⊥");
  }
}
