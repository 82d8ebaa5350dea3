#include "bisimlab/game/solver.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "bisimlab/error.hpp"

namespace bisimlab::game {
namespace {

constexpr int kInfinity = 1 << 30;
constexpr std::size_t kShards = 64;

Move as_move(Side side, const Transition& t) { return Move{side, t.action, t.target, t.framed}; }

Position child_of(const Position& p, Side attack_side, const Configuration& attack_target,
                  const Configuration& response_target) {
  if (attack_side == Side::left) return {attack_target, response_target};
  return {response_target, attack_target};
}

}  // namespace

struct GameSolver::Tables {
  struct MemoShard {
    std::mutex mutex;
    std::unordered_map<Position, Entry> map;
  };
  struct CacheShard {
    std::mutex mutex;
    std::unordered_map<Configuration, std::shared_ptr<const std::vector<Transition>>> map;
  };
  std::array<MemoShard, kShards> memo;
  std::array<CacheShard, kShards> cache;
  std::atomic<std::size_t> memo_count{0};
  std::atomic<std::size_t> cache_count{0};

  MemoShard& shard(const Position& p) { return memo[std::hash<Position>{}(p) % kShards]; }

  Entry get(const Position& p) {
    auto& s = shard(p);
    std::lock_guard lock(s.mutex);
    auto it = s.map.find(p);
    return it == s.map.end() ? Entry{} : it->second;
  }

  template <class F>
  void update(const Position& p, std::size_t capacity, F&& f) {
    auto& s = shard(p);
    std::lock_guard lock(s.mutex);
    auto [it, inserted] = s.map.try_emplace(p);
    if (inserted && memo_count.fetch_add(1) + 1 > capacity) {
      s.map.erase(it);
      throw BudgetExceeded("game memo exceeded " + std::to_string(capacity) + " positions");
    }
    f(it->second);
  }
};

int certificate_depth(const CertificateNode& node) {
  int deepest = 0;
  for (const auto& [move, child] : node.responses) deepest = std::max(deepest, certificate_depth(*child));
  return deepest + 1;
}

std::size_t certificate_size(const CertificateNode& node) {
  std::size_t n = 1;
  for (const auto& [move, child] : node.responses) n += certificate_size(*child);
  return n;
}

std::string to_string(const Verdict& v) {
  return std::string(v.attacker_wins() ? "AttackerWins(" : "DefenderSurvives(") + std::to_string(v.depth) + ")";
}

std::vector<Move> attacker_moves(const Lts& lts, const Position& p) {
  std::vector<Move> out;
  for (const auto& t : lts.transitions(p.left)) out.push_back(as_move(Side::left, t));
  for (const auto& t : lts.transitions(p.right)) out.push_back(as_move(Side::right, t));
  return out;
}

std::vector<Move> defender_responses(const Lts& lts, const Position& p, const Move& attack) {
  std::vector<Move> out;
  const Side side = opposite(attack.side);
  for (const auto& t : lts.transitions(p.at(side))) {
    if (t.action == attack.action) out.push_back(as_move(side, t));
  }
  return out;
}

GameSolver::GameSolver(std::shared_ptr<const Lts> lts, SolveOptions opts)
    : lts_(std::move(lts)), opts_(opts), tables_(std::make_unique<Tables>()) {}

GameSolver::~GameSolver() = default;

std::size_t GameSolver::memo_size() const { return tables_->memo_count.load(); }

std::shared_ptr<const std::vector<Transition>> GameSolver::moves(const Configuration& c) {
  auto& shard = tables_->cache[c.hash() % kShards];
  {
    std::lock_guard lock(shard.mutex);
    if (auto it = shard.map.find(c); it != shard.map.end()) return it->second;
  }
  auto computed = std::make_shared<const std::vector<Transition>>(lts_->transitions(c));
  if (tables_->cache_count.load() < opts_.memo_capacity) {
    std::lock_guard lock(shard.mutex);
    if (shard.map.emplace(c, computed).second) tables_->cache_count.fetch_add(1);
  }
  return computed;
}

int GameSolver::first_winning_move(const Position& p, int budget) {
  const auto left = moves(p.left);
  const auto right = moves(p.right);
  int idx = 0;
  for (Side side : {Side::left, Side::right}) {
    const auto& mine = side == Side::left ? *left : *right;
    const auto& theirs = side == Side::left ? *right : *left;
    for (const auto& attack : mine) {
      std::vector<const Transition*> answers;
      for (const auto& t : theirs) {
        if (t.action == attack.action) answers.push_back(&t);
      }
      if (answers.empty()) return idx;
      if (budget > 1) {
        // an answer reproducing the attacker's target is the likeliest refutation
        std::stable_partition(answers.begin(), answers.end(),
                              [&](const Transition* t) { return t->target == attack.target; });
        bool all = true;
        for (const auto* answer : answers) {
          if (!solve(child_of(p, side, attack.target, answer->target), budget - 1)) {
            all = false;
            break;
          }
        }
        if (all) return idx;
      }
      ++idx;
    }
  }
  return -1;
}

bool GameSolver::solve(const Position& p, int budget) {
  if (opts_.equality_shortcircuit && p.is_equal_pair()) return false;
  if (budget <= 0) return false;
  const Entry known = tables_->get(p);
  if (known.win <= budget) return true;
  if (known.survive >= budget) return false;
  if (moves(p.left)->empty() && moves(p.right)->empty()) {
    tables_->update(p, opts_.memo_capacity, [](Entry& e) { e.survive = kInfinity; });
    return false;
  }
  for (int b = known.survive + 1; b <= budget; ++b) {
    const int idx = first_winning_move(p, b);
    if (idx >= 0) {
      tables_->update(p, opts_.memo_capacity, [&](Entry& e) {
        if (b < e.win || (b == e.win && idx < e.move)) {
          e.win = b;
          e.move = idx;
        }
      });
      return true;
    }
    tables_->update(p, opts_.memo_capacity, [&](Entry& e) { e.survive = std::max(e.survive, b); });
  }
  return false;
}

bool GameSolver::solve_root_parallel(const Position& p, int budget) {
  if (opts_.equality_shortcircuit && p.is_equal_pair()) return false;
  if (budget <= 0) return false;
  const Entry known = tables_->get(p);
  if (known.win <= budget) return true;
  if (known.survive >= budget) return false;
  const auto left = moves(p.left);
  const auto right = moves(p.right);
  if (left->empty() && right->empty()) {
    tables_->update(p, opts_.memo_capacity, [](Entry& e) { e.survive = kInfinity; });
    return false;
  }

  struct Task {
    std::size_t attack;
    Position child;
  };
  std::vector<Task> tasks;
  std::vector<bool> unanswerable;
  for (Side side : {Side::left, Side::right}) {
    const auto& mine = side == Side::left ? *left : *right;
    const auto& theirs = side == Side::left ? *right : *left;
    for (const auto& attack : mine) {
      const std::size_t id = unanswerable.size();
      bool any = false;
      for (const auto& t : theirs) {
        if (t.action != attack.action) continue;
        any = true;
        tasks.push_back({id, child_of(p, side, attack.target, t.target)});
      }
      unanswerable.push_back(!any);
    }
  }

  for (int b = known.survive + 1; b <= budget; ++b) {
    std::vector<std::atomic<bool>> refuted(unanswerable.size());
    for (auto& r : refuted) r.store(b <= 1);
    std::atomic<bool> failed{false};
    std::string failure;
    if (b > 1) {
      const auto n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
      for (long i = 0; i < n; ++i) {
        const auto& task = tasks[static_cast<std::size_t>(i)];
        if (refuted[task.attack].load(std::memory_order_relaxed) || failed.load()) continue;
        try {
          if (!solve(task.child, b - 1)) refuted[task.attack].store(true);
        } catch (const std::exception& e) {
#pragma omp critical(solver_failure)
          {
            if (!failed.exchange(true)) failure = e.what();
          }
        }
      }
    }
    if (failed.load()) throw BudgetExceeded(failure);
    int idx = -1;
    for (std::size_t i = 0; i < unanswerable.size(); ++i) {
      if (unanswerable[i] || !refuted[i].load()) {
        idx = static_cast<int>(i);
        break;
      }
    }
    if (idx >= 0) {
      tables_->update(p, opts_.memo_capacity, [&](Entry& e) {
        if (b < e.win || (b == e.win && idx < e.move)) {
          e.win = b;
          e.move = idx;
        }
      });
      return true;
    }
    tables_->update(p, opts_.memo_capacity, [&](Entry& e) { e.survive = std::max(e.survive, b); });
  }
  return false;
}

Certificate GameSolver::extract(const Position& p, std::unordered_map<Position, Certificate>& done) {
  if (auto it = done.find(p); it != done.end()) return it->second;
  const Entry e = tables_->get(p);
  if (e.move < 0) throw std::logic_error("certificate requested for a position without a recorded win");
  const auto left = moves(p.left);
  const auto right = moves(p.right);
  const auto idx = static_cast<std::size_t>(e.move);
  const Side side = idx < left->size() ? Side::left : Side::right;
  const Transition& t = idx < left->size() ? (*left)[idx] : (*right)[idx - left->size()];
  auto node = std::make_shared<CertificateNode>();
  node->attack = as_move(side, t);
  for (const auto& answer : (side == Side::left ? *right : *left)) {
    if (answer.action != t.action) continue;
    const Position child = child_of(p, side, t.target, answer.target);
    node->responses.emplace_back(as_move(opposite(side), answer), extract(child, done));
  }
  done.emplace(p, node);
  return node;
}

Verdict GameSolver::decide(const Position& pos, int rounds) {
  if (rounds < 0) throw std::invalid_argument("round budget must be non-negative");
  const bool wins = opts_.parallel ? solve_root_parallel(pos, rounds) : solve(pos, rounds);
  if (!wins) return Verdict{Verdict::Kind::defender_survives, rounds, nullptr};
  std::unordered_map<Position, Certificate> done;
  Verdict v{Verdict::Kind::attacker_wins, tables_->get(pos).win, extract(pos, done)};
  return v;
}

Verdict decide_game(std::shared_ptr<const Lts> lts, const Position& pos, int rounds, const SolveOptions& opts) {
  GameSolver solver(std::move(lts), opts);
  return solver.decide(pos, rounds);
}

namespace {

struct Budgeted {
  Position pos;
  int rounds;
  friend bool operator==(const Budgeted&, const Budgeted&) = default;
};

struct BudgetedHash {
  std::size_t operator()(const Budgeted& b) const { return std::hash<Position>{}(b.pos) * 131 + b.rounds; }
};

class ReferenceSolver {
 public:
  ReferenceSolver(const Lts& lts, bool eq) : lts_(lts), eq_(eq) {}

  bool wins(const Position& p, int rounds) {
    if (eq_ && p.is_equal_pair()) return false;
    if (rounds <= 0) return false;
    if (auto it = memo_.find({p, rounds}); it != memo_.end()) return it->second;
    const bool result = winning_move(p, rounds) >= 0;
    memo_.emplace(Budgeted{p, rounds}, result);
    return result;
  }

  int winning_move(const Position& p, int rounds) {
    const auto attacks = attacker_moves(lts_, p);
    for (std::size_t i = 0; i < attacks.size(); ++i) {
      bool all = true;
      for (const auto& r : defender_responses(lts_, p, attacks[i])) {
        if (!wins(advance(p, attacks[i], r), rounds - 1)) {
          all = false;
          break;
        }
      }
      if (all) return static_cast<int>(i);
    }
    return -1;
  }

  int minimal_depth(const Position& p, int limit) {
    for (int d = 1; d <= limit; ++d) {
      if (wins(p, d)) return d;
    }
    return -1;
  }

  Certificate certificate(const Position& p, int limit) {
    const int d = minimal_depth(p, limit);
    const auto attacks = attacker_moves(lts_, p);
    const auto& attack = attacks.at(static_cast<std::size_t>(winning_move(p, d)));
    auto node = std::make_shared<CertificateNode>();
    node->attack = attack;
    for (const auto& r : defender_responses(lts_, p, attack)) {
      node->responses.emplace_back(r, certificate(advance(p, attack, r), d - 1));
    }
    return node;
  }

 private:
  const Lts& lts_;
  bool eq_;
  std::unordered_map<Budgeted, bool, BudgetedHash> memo_;
};

}  // namespace

Verdict decide_game_reference(const Lts& lts, const Position& pos, int rounds, bool equality_shortcircuit) {
  if (rounds < 0) throw std::invalid_argument("round budget must be non-negative");
  ReferenceSolver ref(lts, equality_shortcircuit);
  const int d = ref.minimal_depth(pos, rounds);
  if (d < 0) return Verdict{Verdict::Kind::defender_survives, rounds, nullptr};
  return Verdict{Verdict::Kind::attacker_wins, d, ref.certificate(pos, d)};
}

namespace {

bool check_node(const Lts& lts, const Position& pos, const CertificateNode& node, std::string& path,
                std::string& diagnostic) {
  const auto attacks = attacker_moves(lts, pos);
  if (std::find(attacks.begin(), attacks.end(), node.attack) == attacks.end()) {
    diagnostic = path + ": illegal attacker move " + to_string(node.attack) + " at " + to_string(pos);
    return false;
  }
  const auto responses = defender_responses(lts, pos, node.attack);
  for (const auto& r : responses) {
    auto it = std::find_if(node.responses.begin(), node.responses.end(),
                           [&](const auto& child) { return child.first == r; });
    if (it == node.responses.end()) {
      diagnostic = path + " / " + to_string(node.attack) + ": missing Defender response " + to_string(r);
      return false;
    }
  }
  for (const auto& [r, child] : node.responses) {
    if (std::find(responses.begin(), responses.end(), r) == responses.end()) {
      diagnostic = path + " / " + to_string(node.attack) + ": not a legal Defender response " + to_string(r);
      return false;
    }
    const std::size_t mark = path.size();
    path += " / " + to_string(node.attack) + " | " + to_string(r);
    if (!check_node(lts, advance(pos, node.attack, r), *child, path, diagnostic)) return false;
    path.resize(mark);
  }
  return true;
}

}  // namespace

CertificateCheck verify_certificate(const Lts& lts, const Position& pos, const CertificateNode& cert) {
  CertificateCheck out;
  std::string path = "root";
  out.ok = check_node(lts, pos, cert, path, out.diagnostic);
  return out;
}

}  // namespace bisimlab::game
