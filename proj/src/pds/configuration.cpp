#include "bisimlab/pds/configuration.hpp"

#include <sstream>

#include "bisimlab/error.hpp"

namespace bisimlab::pds {
namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Stack Stack::push(StackSymbol s) const {
  auto n = std::make_shared<const Node>(Node{s, head_, size() + 1, mix(hash(), s.id())});
  return Stack(std::move(n));
}

Stack Stack::of(std::span<const StackSymbol> top_first) {
  Stack out;
  for (auto it = top_first.rbegin(); it != top_first.rend(); ++it) out = out.push(*it);
  return out;
}

Stack Stack::push_all(std::span<const StackSymbol> alpha) const {
  Stack out = *this;
  for (auto it = alpha.rbegin(); it != alpha.rend(); ++it) out = out.push(*it);
  return out;
}

std::vector<StackSymbol> Stack::symbols() const {
  std::vector<StackSymbol> out;
  out.reserve(size());
  for_each([&](StackSymbol s) { out.push_back(s); });
  return out;
}

bool operator==(const Stack& a, const Stack& b) {
  const Stack::Node* x = a.head_.get();
  const Stack::Node* y = b.head_.get();
  if (x == y) return true;
  if (a.size() != b.size() || a.hash() != b.hash()) return false;
  while (x != y) {
    if (x->symbol != y->symbol) return false;
    x = x->next.get();
    y = y->next.get();
  }
  return true;
}

std::strong_ordering operator<=>(const Stack& a, const Stack& b) {
  const Stack::Node* x = a.head_.get();
  const Stack::Node* y = b.head_.get();
  while (x != y) {
    if (x == nullptr) return std::strong_ordering::less;
    if (y == nullptr) return std::strong_ordering::greater;
    if (auto c = x->symbol <=> y->symbol; c != 0) return c;
    x = x->next.get();
    y = y->next.get();
  }
  return std::strong_ordering::equal;
}

Configuration::Configuration(ControlState control, std::vector<Stack> stacks)
    : control_(control), stacks_(std::move(stacks)) {
  hash_ = mix(0xcbf29ce484222325ULL, control_.id());
  for (const auto& s : stacks_) {
    if (s.empty()) throw MalformedInput("configuration contains an empty inner stack");
    hash_ = mix(hash_, s.hash());
  }
}

Configuration::Configuration(ControlState control, Stack stack)
    : Configuration(control, std::vector<Stack>{std::move(stack)}) {}

std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) {
  if (auto c = a.control_ <=> b.control_; c != 0) return c;
  const std::size_t n = std::min(a.stacks_.size(), b.stacks_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.stacks_[i] <=> b.stacks_[i]; c != 0) return c;
  }
  return a.stacks_.size() <=> b.stacks_.size();
}

std::string to_string(const Stack& s) {
  std::string out = "[";
  bool first = true;
  s.for_each([&](StackSymbol sym) {
    if (!first) out += ' ';
    out += sym.str();
    first = false;
  });
  out += ']';
  return out;
}

std::string to_string(const Configuration& c) {
  std::string out(c.control().str());
  for (const auto& s : c.stacks()) out += to_string(s);
  return out;
}

std::string to_text(const Configuration& c) {
  std::string out(c.control().str());
  bool first = true;
  for (const auto& s : c.stacks()) {
    if (!first) out += " ;";
    first = false;
    s.for_each([&](StackSymbol sym) {
      out += ' ';
      out += sym.str();
    });
  }
  return out;
}

Configuration parse_configuration(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string token;
  if (!(in >> token)) throw MalformedInput("empty configuration");
  if (token == ";") throw MalformedInput("configuration must start with a control state");
  ControlState control = ControlState::of(token);
  std::vector<Stack> stacks;
  std::vector<StackSymbol> current;
  bool saw_separator = false;
  while (in >> token) {
    if (token == ";") {
      if (current.empty()) throw MalformedInput("empty inner stack in configuration '" + std::string(text) + "'");
      stacks.push_back(Stack::of(current));
      current.clear();
      saw_separator = true;
      continue;
    }
    current.push_back(StackSymbol::of(token));
  }
  if (!current.empty()) {
    stacks.push_back(Stack::of(current));
  } else if (saw_separator) {
    throw MalformedInput("empty inner stack in configuration '" + std::string(text) + "'");
  }
  return Configuration(control, std::move(stacks));
}

}  // namespace bisimlab::pds
