#include "bisimlab/pds/system.hpp"

#include <algorithm>
#include <unordered_set>

#include "bisimlab/error.hpp"

namespace bisimlab::pds {
namespace {

std::uint64_t head_key(ControlState p, StackSymbol x) {
  return (static_cast<std::uint64_t>(p.id()) << 32) | x.id();
}

std::string alpha_text(const std::vector<StackSymbol>& alpha) {
  if (alpha.empty()) return "ε";
  std::string out;
  for (auto s : alpha) out += s.str();
  return out;
}

}  // namespace

Rule Rule::rewrite(ControlState p, StackSymbol x, Action a, ControlState q, std::vector<StackSymbol> alpha) {
  return Rule{RuleKind::rewrite, p, x, a, q, std::move(alpha)};
}
Rule Rule::push(ControlState p, StackSymbol x, Action a, ControlState q) {
  return Rule{RuleKind::push, p, x, a, q, {}};
}
Rule Rule::pop(ControlState p, StackSymbol x, Action a, ControlState q) {
  return Rule{RuleKind::pop, p, x, a, q, {}};
}
Rule Rule::wild(ControlState p, Action a, ControlState q, std::vector<StackSymbol> alpha) {
  return Rule{RuleKind::wild, p, StackSymbol(), a, q, std::move(alpha)};
}

std::string to_string(const Rule& r) {
  std::string lhs(r.from.str());
  if (r.kind != RuleKind::wild) lhs += std::string(r.top.str());
  std::string out = lhs + " -" + std::string(r.action.is_epsilon() ? "ε" : r.action.str()) + "-> ";
  switch (r.kind) {
    case RuleKind::push: return out + "(" + std::string(r.to.str()) + ",push)";
    case RuleKind::pop: return out + "(" + std::string(r.to.str()) + ",pop)";
    default: return out + std::string(r.to.str()) + " " + alpha_text(r.alpha);
  }
}

bool PushdownSystem::has_control(ControlState q) const { return control_set_.contains(q.id()); }
bool PushdownSystem::has_symbol(StackSymbol x) const { return symbol_set_.contains(x.id()); }

const std::vector<std::uint32_t>& PushdownSystem::rules_for(ControlState p, StackSymbol x) const {
  static const std::vector<std::uint32_t> none;
  auto it = by_head_.find(head_key(p, x));
  return it == by_head_.end() ? none : it->second;
}

void PushdownSystem::check_configuration(const Configuration& c) const {
  if (!has_control(c.control())) {
    throw MalformedInput("control state '" + std::string(c.control().str()) + "' is not declared");
  }
  if (order_ == 1 && c.stack_count() > 1) {
    throw MalformedInput("order-1 configuration with " + std::to_string(c.stack_count()) + " stacks");
  }
  for (const auto& s : c.stacks()) {
    s.for_each([&](StackSymbol x) {
      if (!has_symbol(x)) throw MalformedInput("stack symbol '" + std::string(x.str()) + "' is not declared");
    });
  }
}

void PushdownSystem::index() {
  by_head_.clear();
  for (auto p : controls_) {
    for (auto x : gamma_) {
      std::vector<std::uint32_t> ids;
      for (std::uint32_t i = 0; i < rules_.size(); ++i) {
        if (rules_[i].matches(p, x)) ids.push_back(i);
      }
      if (!ids.empty()) by_head_.emplace(head_key(p, x), std::move(ids));
    }
  }
}

bool operator==(const PushdownSystem& a, const PushdownSystem& b) {
  auto same_set = [](auto x, auto y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  };
  return a.order_ == b.order_ && a.rules_ == b.rules_ && same_set(a.controls_, b.controls_) &&
         same_set(a.gamma_, b.gamma_) && same_set(a.actions_, b.actions_);
}

PdsBuilder::PdsBuilder(int order) {
  if (order != 1 && order != 2) throw MalformedInput("order must be 1 or 2");
  sys_.order_ = order;
}

PdsBuilder& PdsBuilder::declare(ControlState q) {
  if (sys_.control_set_.emplace(q.id(), true).second) sys_.controls_.push_back(q);
  return *this;
}

PdsBuilder& PdsBuilder::declare(StackSymbol x) {
  if (sys_.symbol_set_.emplace(x.id(), true).second) sys_.gamma_.push_back(x);
  return *this;
}

PdsBuilder& PdsBuilder::declare(Action a) {
  if (a.is_epsilon()) return *this;
  if (std::find(sys_.actions_.begin(), sys_.actions_.end(), a) == sys_.actions_.end()) sys_.actions_.push_back(a);
  return *this;
}

std::size_t PdsBuilder::add(Rule rule) {
  if (!rule.from.valid() || !rule.to.valid()) throw MalformedInput("rule without control state");
  const bool stack_op = rule.kind == RuleKind::push || rule.kind == RuleKind::pop;
  if (stack_op && sys_.order_ == 1) throw MalformedInput("push/pop rules are forbidden at order 1");
  if (stack_op && rule.action.is_epsilon()) throw MalformedInput("epsilon is only allowed on rewrite rules");
  if (stack_op && !rule.alpha.empty()) throw MalformedInput("push/pop rules take no replacement word");
  if (rule.kind != RuleKind::wild && !rule.top.valid()) throw MalformedInput("rule without top symbol");
  declare(rule.from);
  if (rule.kind != RuleKind::wild) declare(rule.top);
  declare(rule.action);
  declare(rule.to);
  for (auto s : rule.alpha) declare(s);
  sys_.rules_.push_back(std::move(rule));
  return sys_.rules_.size() - 1;
}

PushdownSystem PdsBuilder::build() && {
  sys_.index();
  return std::move(sys_);
}

PushdownSystem PdsBuilder::build() const& {
  PushdownSystem copy = sys_;
  copy.index();
  return copy;
}

}  // namespace bisimlab::pds
