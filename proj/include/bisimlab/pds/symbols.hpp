#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace bisimlab::pds {

namespace detail {

// Process-wide interning table. Id 0 is reserved (the default/epsilon value).
std::uint32_t intern(int table, std::string_view name);
std::string_view lookup(int table, std::uint32_t id);

enum Table : int { kControlTable = 0, kSymbolTable = 1, kActionTable = 2 };

}  // namespace detail

/// Interned identifier. Equality is by id (equivalently by name); ordering is lexical by name.
template <int TableId>
class Name {
 public:
  Name() = default;

  static Name of(std::string_view name) { return Name(detail::intern(TableId, name)); }

  std::string_view str() const { return detail::lookup(TableId, id_); }
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != 0; }

  friend bool operator==(Name a, Name b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Name a, Name b) {
    if (a.id_ == b.id_) return std::strong_ordering::equal;
    return a.str().compare(b.str()) <=> 0;
  }

 private:
  explicit Name(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

using ControlState = Name<detail::kControlTable>;
using StackSymbol = Name<detail::kSymbolTable>;

/// A visible action, or the silent action epsilon (which no user name can produce).
class Action {
 public:
  Action() = default;

  static Action epsilon() { return Action(0); }
  static Action named(std::string_view name);

  bool is_epsilon() const { return id_ == 0; }
  /// "eps" for the silent action.
  std::string_view str() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(Action a, Action b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Action a, Action b) {
    if (a.id_ == b.id_) return std::strong_ordering::equal;
    return a.str().compare(b.str()) <=> 0;
  }

 private:
  explicit Action(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

/// Keyword used for epsilon in text formats.
inline constexpr std::string_view kEpsilonKeyword = "eps";

}  // namespace bisimlab::pds

template <int T>
struct std::hash<bisimlab::pds::Name<T>> {
  std::size_t operator()(bisimlab::pds::Name<T> n) const noexcept { return n.id(); }
};

template <>
struct std::hash<bisimlab::pds::Action> {
  std::size_t operator()(bisimlab::pds::Action a) const noexcept { return a.id(); }
};
