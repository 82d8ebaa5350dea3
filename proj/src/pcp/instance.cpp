#include "bisimlab/pcp/instance.hpp"

#include <algorithm>
#include <sstream>

#include "bisimlab/error.hpp"

namespace bisimlab::pcp {
namespace {

void check_word(const Word& w, std::size_t index, const char* which) {
  const std::string where = "pair " + std::to_string(index) + ": " + which;
  if (w.empty()) throw ValidationError(where + " is empty");
  for (char c : w) {
    if (c != 'A' && c != 'B') throw ValidationError(where + " contains '" + std::string(1, c) + "' (only A and B allowed)");
  }
}

}  // namespace

PcpInstance PcpInstance::validate(std::vector<WordPair> raw) {
  if (raw.empty()) throw ValidationError("instance has no pairs");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    check_word(raw[i].u, i + 1, "u");
    check_word(raw[i].v, i + 1, "v");
    if (raw[i].u.size() > raw[i].v.size()) {
      throw ValidationError("pair " + std::to_string(i + 1) + ": |u| = " + std::to_string(raw[i].u.size()) +
                            " exceeds |v| = " + std::to_string(raw[i].v.size()));
    }
  }
  PcpInstance inst;
  inst.pairs_ = std::move(raw);
  return inst;
}

Word PcpInstance::u_concat(std::span<const int> seq) const {
  Word out;
  for (int i : seq) out += pair(i).u;
  return out;
}

Word PcpInstance::v_concat(std::span<const int> seq) const {
  Word out;
  for (int i : seq) out += pair(i).v;
  return out;
}

bool PcpInstance::is_partial_solution(std::span<const int> seq) const {
  if (seq.empty() || seq.front() != 1) return false;
  for (int i : seq) {
    if (i < 1 || static_cast<std::size_t>(i) > pairs_.size()) return false;
  }
  const Word u = u_concat(seq);
  const Word v = v_concat(seq);
  return v.compare(0, u.size(), u) == 0;
}

PcpInstance parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<WordPair> pairs;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string u, v, extra;
    if (!(fields >> u)) continue;
    if (!(fields >> v)) throw MalformedInput("expected '<u> <v>'", line_no, 1);
    if (fields >> extra) throw MalformedInput("unexpected token '" + extra + "'", line_no, 1);
    pairs.push_back({u, v});
    try {
      PcpInstance::validate({pairs.back()});
    } catch (const ValidationError& e) {
      std::string msg = e.what();
      // the single-pair check always reports "pair 1"; restate with the line's pair number
      msg.replace(0, msg.find(':'), "pair " + std::to_string(pairs.size()));
      throw MalformedInput(msg, line_no, 1);
    }
  }
  if (pairs.empty()) throw MalformedInput("instance has no pairs");
  return PcpInstance::validate(std::move(pairs));
}

std::string render_instance(const PcpInstance& inst) {
  std::string out;
  for (const auto& p : inst.pairs()) out += p.u + " " + p.v + "\n";
  return out;
}

char head(const Word& w) {
  if (w.empty()) throw ValidationError("head of the empty word");
  return w.front();
}

Word tail(const Word& w) {
  if (w.empty()) throw ValidationError("tail of the empty word");
  return w.substr(1);
}

pds::Action head_action(const Word& w) { return pds::Action::named(head(w) == 'A' ? "a" : "b"); }

Word reverse(Word w) {
  std::reverse(w.begin(), w.end());
  return w;
}

std::vector<Word> suffixes(const Word& w) {
  std::vector<Word> out;
  for (std::size_t i = 0; i <= w.size(); ++i) out.push_back(w.substr(i));
  return out;
}

}  // namespace bisimlab::pcp
