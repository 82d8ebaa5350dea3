#pragma once

#include <cstddef>
#include <string>

#include "bisimlab/pcp/instance.hpp"

namespace bisimlab::strategy {

using pcp::IndexSequence;

/// Eventually periodic index sequence prefix · period^ω, checked against an instance.
class SolutionOracle {
 public:
  /// Throws ValidationError when the period is empty, an index is out of range, or i1 != 1.
  SolutionOracle(pcp::PcpInstance inst, IndexSequence prefix, IndexSequence period);

  /// i_k for k >= 1.
  int index(std::size_t k) const;
  /// i_1 ... i_l. Throws ValidationError when that is not a partial solution.
  IndexSequence take(std::size_t l) const;

  const IndexSequence& prefix() const { return prefix_; }
  const IndexSequence& period() const { return period_; }
  const pcp::PcpInstance& instance() const { return inst_; }

 private:
  pcp::PcpInstance inst_;
  IndexSequence prefix_;
  IndexSequence period_;
};

/// "1,2;2" is prefix (1,2) then period (2); "1" alone is the period (1).
SolutionOracle parse_oracle(const pcp::PcpInstance& inst, const std::string& text);
std::string to_string(const SolutionOracle& o);

struct SwitchChoice {
  std::size_t m = 0;
  pcp::Word w;
  friend bool operator==(const SwitchChoice&, const SwitchChoice&) = default;
};

/// Largest m < l with |v_i1...v_im| <= |U| and w = reverse(U minus that prefix), where
/// U = u_i1...u_il. Throws ValidationError unless `seq` is a partial solution; throws
/// StrategyDefect if the result fails reverse(U) = w·reverse(V_m) or w is not a suffix of
/// reverse(v_{i_{m+1}}).
SwitchChoice compute_switch_choice(const pcp::PcpInstance& inst, const IndexSequence& seq);

}  // namespace bisimlab::strategy
