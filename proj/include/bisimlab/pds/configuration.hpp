#pragma once

#include <cstddef>
#include <compare>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bisimlab/pds/symbols.hpp"

namespace bisimlab::pds {

/// Immutable singly linked symbol sequence, top first. Tails are shared between
/// stacks, so pushing or popping the top allocates at most one node.
class Stack {
 public:
  Stack() = default;

  /// Builds a stack from symbols listed top first.
  static Stack of(std::span<const StackSymbol> top_first);
  static Stack of(std::initializer_list<StackSymbol> top_first) {
    return of(std::span<const StackSymbol>(top_first.begin(), top_first.size()));
  }

  bool empty() const { return head_ == nullptr; }
  std::size_t size() const { return head_ ? head_->size : 0; }
  StackSymbol top() const { return head_->symbol; }
  Stack pop() const { return Stack(head_->next); }
  Stack push(StackSymbol s) const;
  /// Pushes `alpha` so that alpha[0] ends up on top.
  Stack push_all(std::span<const StackSymbol> alpha) const;

  std::size_t hash() const { return head_ ? head_->hash : 0x9e3779b97f4a7c15ULL; }
  std::vector<StackSymbol> symbols() const;

  template <class F>
  void for_each(F&& f) const {
    for (auto* n = head_.get(); n != nullptr; n = n->next.get()) f(n->symbol);
  }

  friend bool operator==(const Stack& a, const Stack& b);
  /// Lexical order over symbol names, top first; a proper prefix sorts first.
  friend std::strong_ordering operator<=>(const Stack& a, const Stack& b);

 private:
  struct Node {
    StackSymbol symbol;
    std::shared_ptr<const Node> next;
    std::size_t size;
    std::size_t hash;
  };
  explicit Stack(std::shared_ptr<const Node> head) : head_(std::move(head)) {}

  std::shared_ptr<const Node> head_;
};

/// A control state over a sequence of nonempty stacks, leftmost (top) stack first.
/// Zero stacks is legal: such a configuration has no successors.
class Configuration {
 public:
  Configuration() = default;
  Configuration(ControlState control, std::vector<Stack> stacks);
  /// Convenience for a single stack (order-1 style).
  Configuration(ControlState control, Stack stack);

  ControlState control() const { return control_; }
  const std::vector<Stack>& stacks() const { return stacks_; }
  std::size_t stack_count() const { return stacks_.size(); }
  bool has_no_stacks() const { return stacks_.empty(); }
  const Stack& top_stack() const { return stacks_.front(); }

  std::size_t hash() const { return hash_; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.hash_ == b.hash_ && a.control_ == b.control_ && a.stacks_ == b.stacks_;
  }
  friend std::strong_ordering operator<=>(const Configuration& a, const Configuration& b);

 private:
  ControlState control_;
  std::vector<Stack> stacks_;
  std::size_t hash_ = 0;
};

/// `q0[I1 ⊥][⊥]` style rendering.
std::string to_string(const Stack& s);
std::string to_string(const Configuration& c);

/// The text form used by `start` lines: `q0 I1 ⊥ ; ⊥` (symbols top first, stacks separated by `;`).
std::string to_text(const Configuration& c);
Configuration parse_configuration(std::string_view text);

}  // namespace bisimlab::pds

template <>
struct std::hash<bisimlab::pds::Configuration> {
  std::size_t operator()(const bisimlab::pds::Configuration& c) const noexcept { return c.hash(); }
};
