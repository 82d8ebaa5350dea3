#pragma once

#include <string>

#include "bisimlab/pds/configuration.hpp"
#include "bisimlab/pds/symbols.hpp"

namespace bisimlab::game {

using pds::Action;
using pds::Configuration;

enum class Side { left, right };

inline Side opposite(Side s) { return s == Side::left ? Side::right : Side::left; }
std::string to_string(Side s);

struct Position {
  Configuration left;
  Configuration right;

  const Configuration& at(Side s) const { return s == Side::left ? left : right; }
  bool is_equal_pair() const { return left == right; }
  Position swapped() const { return {right, left}; }

  friend bool operator==(const Position&, const Position&) = default;
};

/// A transition chosen on one side. `framed` is informational and ignored by equality.
struct Move {
  Side side = Side::left;
  Action action;
  Configuration target;
  bool framed = false;

  friend bool operator==(const Move& a, const Move& b) {
    return a.side == b.side && a.action == b.action && a.target == b.target;
  }
};

/// The position after `attack` is answered by `response` on the other side.
Position advance(const Position& p, const Move& attack, const Move& response);

std::string to_string(const Position& p);
std::string to_string(const Move& m);

}  // namespace bisimlab::game

template <>
struct std::hash<bisimlab::game::Position> {
  std::size_t operator()(const bisimlab::game::Position& p) const noexcept {
    return p.left.hash() * 0x100000001b3ULL ^ (p.right.hash() + 0x9e3779b97f4a7c15ULL);
  }
};
