#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bisimlab/pds/configuration.hpp"
#include "bisimlab/pds/symbols.hpp"

namespace bisimlab::pds {

enum class RuleKind : std::uint8_t {
  rewrite,  ///< pX -a-> q alpha
  push,     ///< pX -a-> (q, push)
  pop,      ///< pX -a-> (q, pop)
  wild,     ///< p -a-> q alpha, standing for pX -a-> q alpha X over every X
};

struct Rule {
  RuleKind kind = RuleKind::rewrite;
  ControlState from;
  StackSymbol top;  // unset for wild rules
  Action action;
  ControlState to;
  std::vector<StackSymbol> alpha;  // top first; rewrite/wild only

  static Rule rewrite(ControlState p, StackSymbol x, Action a, ControlState q, std::vector<StackSymbol> alpha = {});
  static Rule push(ControlState p, StackSymbol x, Action a, ControlState q);
  static Rule pop(ControlState p, StackSymbol x, Action a, ControlState q);
  static Rule wild(ControlState p, Action a, ControlState q, std::vector<StackSymbol> alpha = {});

  bool matches(ControlState p, StackSymbol x) const { return from == p && (kind == RuleKind::wild || top == x); }

  friend bool operator==(const Rule&, const Rule&) = default;
};

std::string to_string(const Rule& r);

class PdsBuilder;

/// A first- or second-order pushdown system (Q, Gamma, Act, Delta). Immutable; build with PdsBuilder.
/// Alphabets keep first-declaration order.
class PushdownSystem {
 public:
  int order() const { return order_; }
  const std::vector<ControlState>& controls() const { return controls_; }
  const std::vector<StackSymbol>& gamma() const { return gamma_; }
  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<Rule>& rules() const { return rules_; }

  bool has_control(ControlState q) const;
  bool has_symbol(StackSymbol x) const;

  /// Indices of rules applicable to control `p` with top symbol `x`, in declaration order.
  const std::vector<std::uint32_t>& rules_for(ControlState p, StackSymbol x) const;

  /// Throws MalformedInput when `c` mentions a foreign control or symbol, or has too many stacks.
  void check_configuration(const Configuration& c) const;

  /// Same order, same rule list, same alphabets as sets.
  friend bool operator==(const PushdownSystem& a, const PushdownSystem& b);

 private:
  friend class PdsBuilder;
  PushdownSystem() = default;
  void index();

  int order_ = 1;
  std::vector<ControlState> controls_;
  std::vector<StackSymbol> gamma_;
  std::vector<Action> actions_;
  std::vector<Rule> rules_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_head_;
  std::unordered_map<std::uint32_t, bool> control_set_;
  std::unordered_map<std::uint32_t, bool> symbol_set_;
};

/// Collects alphabets and rules; alphabets are declared implicitly by first use.
class PdsBuilder {
 public:
  explicit PdsBuilder(int order);

  PdsBuilder& declare(ControlState q);
  PdsBuilder& declare(StackSymbol x);
  PdsBuilder& declare(Action a);
  /// Returns the index of the added rule. Throws MalformedInput on invariant violations.
  std::size_t add(Rule rule);
  std::size_t rule_count() const { return sys_.rules_.size(); }
  int order() const { return sys_.order_; }

  PushdownSystem build() &&;
  PushdownSystem build() const&;

 private:
  PushdownSystem sys_;
};

}  // namespace bisimlab::pds
