#include "bisimlab/pds/codec.hpp"

#include <optional>
#include <sstream>

#include "bisimlab/error.hpp"

namespace bisimlab::pds {
namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return out;
}

bool is_reserved(std::string_view s) { return s == "push" || s == "pop" || s == "-" || s == ";"; }

Action parse_action(const Token& t) {
  if (t.text == kEpsilonKeyword) return Action::epsilon();
  return Action::named(t.text);
}

}  // namespace

PdsFile parse_pds(std::string_view text) {
  std::optional<PdsBuilder> builder;
  std::vector<std::pair<Configuration, int>> starts;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;

  auto need_order = [&](int line, int col) -> PdsBuilder& {
    if (!builder) throw MalformedInput("'order' directive must come first", line, col);
    return *builder;
  };
  auto symbol = [&](const Token& t, int line) {
    if (is_reserved(t.text)) throw MalformedInput("'" + t.text + "' cannot be used as a name", line, t.column);
    return StackSymbol::of(t.text);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    const std::string& directive = tokens[0].text;
    try {
      if (directive == "order") {
        if (builder) throw MalformedInput("duplicate 'order' directive", line_no, tokens[0].column);
        if (tokens.size() != 2 || (tokens[1].text != "1" && tokens[1].text != "2")) {
          throw MalformedInput("expected 'order 1' or 'order 2'", line_no, tokens[0].column);
        }
        builder.emplace(tokens[1].text == "1" ? 1 : 2);
      } else if (directive == "start") {
        auto& b = need_order(line_no, tokens[0].column);
        if (tokens.size() < 2) throw MalformedInput("start needs a control state", line_no, tokens[0].column);
        std::string body;
        for (std::size_t i = 1; i < tokens.size(); ++i) body += tokens[i].text + " ";
        Configuration c = parse_configuration(body);
        b.declare(c.control());
        for (const auto& s : c.stacks()) s.for_each([&](StackSymbol x) { b.declare(x); });
        starts.emplace_back(std::move(c), line_no);
      } else if (directive == "rule") {
        auto& b = need_order(line_no, tokens[0].column);
        if (tokens.size() < 6) throw MalformedInput("rule needs: p X action q (alpha|-|push|pop)", line_no, tokens[0].column);
        const auto p = ControlState::of(tokens[1].text);
        const auto x = symbol(tokens[2], line_no);
        const auto a = parse_action(tokens[3]);
        const auto q = ControlState::of(tokens[4].text);
        const std::string& tail = tokens[5].text;
        const int tail_col = tokens[5].column;
        if (tail == "push" || tail == "pop") {
          if (tokens.size() != 6) throw MalformedInput("unexpected tokens after " + tail, line_no, tokens[6].column);
          if (b.order() == 1) {
            throw MalformedInput(tail + " forbidden at order 1", line_no, tail_col);
          }
          b.add(tail == "push" ? Rule::push(p, x, a, q) : Rule::pop(p, x, a, q));
        } else if (tail == "-") {
          if (tokens.size() != 6) throw MalformedInput("'-' must be the whole replacement", line_no, tokens[6].column);
          b.add(Rule::rewrite(p, x, a, q));
        } else {
          std::vector<StackSymbol> alpha;
          for (std::size_t i = 5; i < tokens.size(); ++i) alpha.push_back(symbol(tokens[i], line_no));
          b.add(Rule::rewrite(p, x, a, q, std::move(alpha)));
        }
      } else if (directive == "wild") {
        auto& b = need_order(line_no, tokens[0].column);
        if (tokens.size() < 5) throw MalformedInput("wild needs: p action q (alpha|-)", line_no, tokens[0].column);
        const auto p = ControlState::of(tokens[1].text);
        const auto a = parse_action(tokens[2]);
        const auto q = ControlState::of(tokens[3].text);
        std::vector<StackSymbol> alpha;
        if (tokens[4].text == "-") {
          if (tokens.size() != 5) throw MalformedInput("'-' must be the whole replacement", line_no, tokens[5].column);
        } else {
          for (std::size_t i = 4; i < tokens.size(); ++i) alpha.push_back(symbol(tokens[i], line_no));
        }
        b.add(Rule::wild(p, a, q, std::move(alpha)));
      } else {
        throw MalformedInput("unknown directive '" + directive + "'", line_no, tokens[0].column);
      }
    } catch (const MalformedInput& e) {
      if (e.line() > 0) throw;
      throw MalformedInput(e.what(), line_no, tokens[0].column);
    }
  }
  if (!builder) throw MalformedInput("missing 'order' directive");
  if (starts.size() > 2) throw MalformedInput("at most two start lines are allowed", starts[2].second, 1);
  PdsFile out{std::move(*builder).build(), {}};
  for (auto& [c, line] : starts) {
    try {
      out.system.check_configuration(c);
    } catch (const MalformedInput& e) {
      throw MalformedInput(e.what(), line, 1);
    }
    out.starts.push_back(std::move(c));
  }
  return out;
}

std::string render_pds(const PushdownSystem& sys, const std::vector<Configuration>& starts) {
  std::ostringstream out;
  out << "order " << sys.order() << "\n";
  for (const auto& s : starts) out << "start " << to_text(s) << "\n";
  auto alpha = [](const std::vector<StackSymbol>& a) {
    if (a.empty()) return std::string("-");
    std::string text;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i > 0) text += ' ';
      text += a[i].str();
    }
    return text;
  };
  for (const auto& r : sys.rules()) {
    switch (r.kind) {
      case RuleKind::wild:
        out << "wild " << r.from.str() << ' ' << r.action.str() << ' ' << r.to.str() << ' ' << alpha(r.alpha) << "\n";
        break;
      case RuleKind::push:
      case RuleKind::pop:
        out << "rule " << r.from.str() << ' ' << r.top.str() << ' ' << r.action.str() << ' ' << r.to.str() << ' '
            << (r.kind == RuleKind::push ? "push" : "pop") << "\n";
        break;
      case RuleKind::rewrite:
        out << "rule " << r.from.str() << ' ' << r.top.str() << ' ' << r.action.str() << ' ' << r.to.str() << ' '
            << alpha(r.alpha) << "\n";
        break;
    }
  }
  return out.str();
}

}  // namespace bisimlab::pds
