#include "bisimlab/pds/symbols.hpp"

#include <array>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "bisimlab/error.hpp"

namespace bisimlab::pds {
namespace detail {
namespace {

struct InternTable {
  std::shared_mutex mutex;
  std::deque<std::string> names{std::string()};
  std::unordered_map<std::string_view, std::uint32_t> ids;
};

std::array<InternTable, 3>& tables() {
  static std::array<InternTable, 3> t;
  return t;
}

}  // namespace

std::uint32_t intern(int table, std::string_view name) {
  if (name.empty()) throw MalformedInput("empty name");
  auto& t = tables()[table];
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.ids.find(name); it != t.ids.end()) return it->second;
  }
  std::unique_lock lock(t.mutex);
  if (auto it = t.ids.find(name); it != t.ids.end()) return it->second;
  auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(t.names.back(), id);
  return id;
}

std::string_view lookup(int table, std::uint32_t id) {
  auto& t = tables()[table];
  std::shared_lock lock(t.mutex);
  // deque never relocates elements, so the view outlives the lock
  return t.names.at(id);
}

}  // namespace detail

Action Action::named(std::string_view name) {
  if (name == kEpsilonKeyword) throw MalformedInput("'eps' is reserved for the silent action");
  return Action(detail::intern(detail::kActionTable, name));
}

std::string_view Action::str() const {
  if (id_ == 0) return kEpsilonKeyword;
  return detail::lookup(detail::kActionTable, id_);
}

}  // namespace bisimlab::pds
