#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bisimlab/pds/symbols.hpp"

namespace bisimlab::pcp {

/// A word over {A, B}.
using Word = std::string;
/// Indices are 1-based, as in i1, i2, ... with i1 = 1.
using IndexSequence = std::vector<int>;

struct WordPair {
  Word u;
  Word v;
  friend bool operator==(const WordPair&, const WordPair&) = default;
};

/// Nonempty list of pairs of nonempty {A,B}-words with |u_i| <= |v_i|.
class PcpInstance {
 public:
  /// Throws ValidationError naming the offending pair.
  static PcpInstance validate(std::vector<WordPair> raw);

  std::size_t size() const { return pairs_.size(); }
  const std::vector<WordPair>& pairs() const { return pairs_; }
  /// 1-based access.
  const WordPair& pair(int i) const { return pairs_.at(static_cast<std::size_t>(i - 1)); }

  Word u_concat(std::span<const int> seq) const;
  Word v_concat(std::span<const int> seq) const;
  /// i1 = 1 and u_{i1}...u_{il} is a prefix of v_{i1}...v_{il}.
  bool is_partial_solution(std::span<const int> seq) const;

  friend bool operator==(const PcpInstance&, const PcpInstance&) = default;

 private:
  std::vector<WordPair> pairs_;
};

/// One pair per line, `<u> <v>`, `#` comments. Errors carry the line number.
PcpInstance parse_instance(std::string_view text);
std::string render_instance(const PcpInstance& inst);

/// Word helpers; head/tail/head_action throw ValidationError on the empty word.
char head(const Word& w);
Word tail(const Word& w);
/// a for head A, b for head B.
pds::Action head_action(const Word& w);
Word reverse(Word w);
/// All suffixes, longest (the word itself) first, ending with the empty word.
std::vector<Word> suffixes(const Word& w);

}  // namespace bisimlab::pcp
