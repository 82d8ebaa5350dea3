#include "support/checks.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "bisimlab/game/solver.hpp"

using namespace bisimlab;
using game::Move;
using game::Position;
using game::Side;
using pds::Configuration;

namespace checks {

namespace {

bool generating(const pcp::ReductionOutput& r, const Configuration& c) {
  const auto q = c.control();
  return q == r.names.q0 || q == r.names.q0p || q == r.names.t || r.names.generator_index(q) != 0;
}

std::string rev(std::string w) {
  std::reverse(w.begin(), w.end());
  return w;
}

}  // namespace

std::string stack_text(const std::vector<int>& seq, const std::string& above) {
  std::string out;
  for (char c : above) out += std::string(1, c) + " ";
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) out += "I" + std::to_string(*it) + " ";
  return out + "⊥";
}

bool is_deviation(const pcp::ReductionOutput& r, const Position& p, const Move& m) {
  if (m.framed) return true;
  if (m.action == r.names.g) return m.side == Side::right;
  const int j = r.names.action_index(m.action);
  if (j == 0) return false;
  return j != r.names.generator_index(p.right.control());
}

Report forcing(const pcp::ReductionOutput& r, int depth) {
  Report rep;
  std::unordered_set<Position> seen;
  std::deque<std::pair<Position, int>> queue{{r.start, 0}};
  while (!queue.empty()) {
    const auto [p, d] = queue.front();
    queue.pop_front();
    if (!seen.insert(p).second) continue;
    for (const auto& attack : game::attacker_moves(*r.lts, p)) {
      const auto answers = game::defender_responses(*r.lts, p, attack);
      if (is_deviation(r, p, attack)) {
        ++rep.checked;
        const bool equalized = std::any_of(answers.begin(), answers.end(), [&](const Move& a) {
          return game::advance(p, attack, a).is_equal_pair();
        });
        if (!equalized) rep.fail(game::to_string(p) + " attack " + game::to_string(attack));
        continue;
      }
      if (d >= depth) continue;
      for (const auto& a : answers) {
        const auto next = game::advance(p, attack, a);
        if (!next.is_equal_pair() && generating(r, next.left) && generating(r, next.right)) {
          queue.emplace_back(next, d + 1);
        }
      }
    }
  }
  return rep;
}

Report weak_step_switch(const oracle::Pairs& pairs, int depth) {
  Report rep;
  const auto r = pcp::build_reduction(oracle::to_instance(pairs), {});
  std::set<Configuration> pool;
  for (const auto& c : {r.start.left, r.start.right}) {
    const auto reach = pds::reachable(*r.lts, c, depth, 2'000'000);
    if (reach.truncated) rep.fail("reachable set truncated");
    pool.insert(reach.configs.begin(), reach.configs.end());
  }
  for (const auto& c : pool) {
    const bool left = c.control() == r.names.q0;
    if (!left && c.control() != r.names.q0p) continue;
    ++rep.checked;
    const auto seq = pcp::index_sequence(r.names, c.top_stack());
    std::set<std::string> expected;
    if (left) expected.insert("q_u[" + stack_text(seq) + "]");
    for (std::size_t m = 0; m <= seq.size(); ++m) {
      const std::vector<int> kept(seq.begin(), seq.begin() + static_cast<long>(m));
      expected.insert("z[" + stack_text(kept) + "]");
      if (m == seq.size()) continue;
      const auto v = rev(pairs[static_cast<std::size_t>(seq[m] - 1)].second);
      for (std::size_t k = 0; k <= v.size(); ++k) expected.insert("q_v[" + stack_text(kept, v.substr(k)) + "]");
    }
    std::set<std::string> got, qv, schema;
    for (const auto& s : pds::collapsed_successors(*r.system, c)) {
      if (s.action != r.names.s) continue;
      got.insert(pds::to_string(s.target));
      if (s.target.control() == r.names.q_v) qv.insert(pds::to_string(s.target));
    }
    for (const auto& t : pcp::switch_targets(r.instance, c)) schema.insert(pds::to_string(t));
    if (got != expected) rep.fail("s-successors of " + pds::to_string(c));
    if (qv != schema) rep.fail("switch_targets of " + pds::to_string(c));
  }
  return rep;
}

bool verification_mutual_stuck(const pcp::ReductionOutput& r, const std::vector<int>& seq, std::size_t m,
                               const std::string& w) {
  const std::vector<int> kept(seq.begin(), seq.begin() + static_cast<long>(m));
  std::string left = "q_u " + stack_text(seq), right = "q_v " + stack_text(kept, w);
  if (r.options.order == 2) {
    left += " ; " + stack_text(seq);
    right += " ; " + stack_text(seq);
  }
  Position p{pds::parse_configuration(left), pds::parse_configuration(right)};
  for (int round = 0; round < 256; ++round) {
    const auto tl = r.lts->transitions(p.left);
    const auto tr = r.lts->transitions(p.right);
    if (tl.empty() && tr.empty()) return true;
    if (tl.empty() || tr.empty() || tl[0].action != tr[0].action) return false;
    p = {tl[0].target, tr[0].target};
  }
  return false;
}

}  // namespace checks
