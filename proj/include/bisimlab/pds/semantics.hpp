#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bisimlab/pds/configuration.hpp"
#include "bisimlab/pds/system.hpp"

namespace bisimlab::pds {

inline constexpr std::size_t kDefaultClosureBudget = 100000;

struct Step {
  Action action;
  Configuration target;

  friend bool operator==(const Step&, const Step&) = default;
};

/// Result of applying `rule` to `c`; the caller guarantees the rule matches c's head.
Configuration apply(const Rule& rule, const Configuration& c);

/// One-step transitions (epsilon steps included), one per matching rule in declaration order.
/// Throws MalformedInput when `c` does not belong to `sys`.
std::vector<Step> successors(const PushdownSystem& sys, const Configuration& c);

/// The epsilon-free weak-step relation: eps* a eps*. Duplicates removed; ordered by the
/// visible rule's declaration index, then lexically by target.
std::vector<Step> collapsed_successors(const PushdownSystem& sys, const Configuration& c,
                                       std::size_t closure_budget = kDefaultClosureBudget);

/// A labelled transition with a flag telling whether every derivation of it used a framed rule.
struct Transition {
  Action action;
  Configuration target;
  bool framed = false;
};

/// An epsilon-free LTS over configurations of a pushdown system.
class Lts {
 public:
  virtual ~Lts() = default;
  virtual std::vector<Transition> transitions(const Configuration& c) const = 0;
  virtual const PushdownSystem& system() const = 0;
};

/// The collapsed LTS of a pushdown system, with an optional set of framed rule indices.
class CollapsedLts final : public Lts {
 public:
  explicit CollapsedLts(std::shared_ptr<const PushdownSystem> sys, std::vector<std::size_t> framed_rules = {},
                        std::size_t closure_budget = kDefaultClosureBudget);

  std::vector<Transition> transitions(const Configuration& c) const override;
  const PushdownSystem& system() const override { return *sys_; }
  const std::shared_ptr<const PushdownSystem>& system_ptr() const { return sys_; }
  bool is_framed(std::size_t rule) const { return rule < framed_.size() && framed_[rule]; }

 private:
  std::shared_ptr<const PushdownSystem> sys_;
  std::vector<bool> framed_;
  std::size_t closure_budget_;
};

struct Reachable {
  std::vector<Configuration> configs;  // breadth-first discovery order
  std::vector<int> distance;           // parallel to configs
  bool truncated = false;
};

/// Configurations within `depth_limit` collapsed steps of `c`; stops with `truncated` set as soon
/// as more than `size_limit` configurations would be collected.
Reachable reachable(const Lts& lts, const Configuration& c, int depth_limit, std::size_t size_limit);
/// Same result as reachable(); expands each breadth-first layer with OpenMP.
Reachable reachable_parallel(const Lts& lts, const Configuration& c, int depth_limit, std::size_t size_limit);

enum class NormKind { normed_to_limit, not_normed, unknown };

struct NormVerdict {
  NormKind kind = NormKind::unknown;
  std::optional<Configuration> witness;
  std::string reason;
  std::size_t checked = 0;  // reachable configurations examined
};

struct NormOptions {
  int reach_limit = 8;
  int norm_limit = 64;
  std::size_t size_limit = 200000;
  /// When set, a configuration whose only stack is exactly [bottom] also counts as empty.
  std::optional<StackSymbol> bottom_as_empty;
};

NormVerdict normedness_check(const Lts& lts, const Configuration& c, const NormOptions& opts);
NormVerdict normedness_check(const PushdownSystem& sys, const Configuration& c, const NormOptions& opts);

std::string to_string(NormKind k);

}  // namespace bisimlab::pds
