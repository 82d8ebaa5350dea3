#include "bisimlab/strategy/oracle.hpp"

#include <sstream>

#include "bisimlab/error.hpp"

namespace bisimlab::strategy {

SolutionOracle::SolutionOracle(pcp::PcpInstance inst, IndexSequence prefix, IndexSequence period)
    : inst_(std::move(inst)), prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty()) throw ValidationError("oracle period is empty");
  auto check = [&](const IndexSequence& s) {
    for (int k : s) {
      if (k < 1 || static_cast<std::size_t>(k) > inst_.size()) {
        throw ValidationError("oracle index " + std::to_string(k) + " out of range 1.." + std::to_string(inst_.size()));
      }
    }
  };
  check(prefix_);
  check(period_);
  if (index(1) != 1) throw ValidationError("oracle must start with index 1");
}

int SolutionOracle::index(std::size_t k) const {
  if (k == 0) throw ValidationError("oracle indices are 1-based");
  if (k <= prefix_.size()) return prefix_[k - 1];
  return period_[(k - 1 - prefix_.size()) % period_.size()];
}

IndexSequence SolutionOracle::take(std::size_t l) const {
  IndexSequence out;
  out.reserve(l);
  for (std::size_t k = 1; k <= l; ++k) out.push_back(index(k));
  if (l > 0 && !inst_.is_partial_solution(out)) {
    throw ValidationError("oracle prefix of length " + std::to_string(l) + " is not a partial solution");
  }
  return out;
}

namespace {

IndexSequence parse_indices(const std::string& text) {
  IndexSequence out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValidationError("bad oracle index '" + item + "'");
    }
  }
  return out;
}

std::string join(const IndexSequence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

}  // namespace

SolutionOracle parse_oracle(const pcp::PcpInstance& inst, const std::string& text) {
  const auto semi = text.find(';');
  if (semi == std::string::npos) return SolutionOracle(inst, {}, parse_indices(text));
  return SolutionOracle(inst, parse_indices(text.substr(0, semi)), parse_indices(text.substr(semi + 1)));
}

std::string to_string(const SolutionOracle& o) {
  return o.prefix().empty() ? join(o.period()) : join(o.prefix()) + ";" + join(o.period());
}

SwitchChoice compute_switch_choice(const pcp::PcpInstance& inst, const IndexSequence& seq) {
  if (!inst.is_partial_solution(seq)) throw ValidationError("not a partial solution: (" + join(seq) + ")");
  const pcp::Word u = inst.u_concat(seq);
  std::size_t m = 0;
  std::size_t vlen = 0;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    const std::size_t next = vlen + inst.pair(seq[k]).v.size();
    if (next > u.size()) break;
    vlen = next;
    m = k + 1;
  }
  SwitchChoice out{m, pcp::reverse(u.substr(vlen))};

  const pcp::Word vm = inst.v_concat(std::span<const int>(seq.data(), m));
  const pcp::Word rv = pcp::reverse(inst.pair(seq[m]).v);
  const bool is_suffix = rv.size() >= out.w.size() && rv.compare(rv.size() - out.w.size(), out.w.size(), out.w) == 0;
  if (pcp::reverse(u) != out.w + pcp::reverse(vm) || !is_suffix) {
    throw StrategyDefect("switch choice postcondition failed for (" + join(seq) + ")");
  }
  return out;
}

}  // namespace bisimlab::strategy
