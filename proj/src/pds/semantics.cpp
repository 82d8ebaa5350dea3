#include "bisimlab/pds/semantics.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "bisimlab/error.hpp"

namespace bisimlab::pds {

Configuration apply(const Rule& rule, const Configuration& c) {
  const auto& stacks = c.stacks();
  switch (rule.kind) {
    case RuleKind::push: {
      std::vector<Stack> next;
      next.reserve(stacks.size() + 1);
      next.push_back(stacks.front());
      next.insert(next.end(), stacks.begin(), stacks.end());
      return Configuration(rule.to, std::move(next));
    }
    case RuleKind::pop:
      return Configuration(rule.to, std::vector<Stack>(stacks.begin() + 1, stacks.end()));
    case RuleKind::rewrite:
    case RuleKind::wild: {
      Stack base = rule.kind == RuleKind::wild ? stacks.front() : stacks.front().pop();
      Stack top = base.push_all(rule.alpha);
      std::vector<Stack> next;
      next.reserve(stacks.size());
      // alpha gamma = eps removes the whole top stack
      if (!top.empty()) next.push_back(std::move(top));
      next.insert(next.end(), stacks.begin() + 1, stacks.end());
      return Configuration(rule.to, std::move(next));
    }
  }
  return c;
}

namespace {

template <class F>
void for_each_rule_step(const PushdownSystem& sys, const Configuration& c, F&& f) {
  if (c.has_no_stacks()) return;
  for (auto idx : sys.rules_for(c.control(), c.top_stack().top())) {
    f(idx, apply(sys.rules()[idx], c));
  }
}

struct ClosureEntry {
  Configuration config;
  bool framed;
};

// Epsilon closure keeping, per configuration, whether it is only reachable through framed rules.
std::vector<ClosureEntry> epsilon_closure(const PushdownSystem& sys, const std::vector<bool>& framed,
                                          const Configuration& start, bool start_framed, std::size_t budget) {
  std::vector<ClosureEntry> out;
  std::unordered_map<Configuration, std::size_t> seen;
  std::deque<std::size_t> queue;
  out.push_back({start, start_framed});
  seen.emplace(start, 0);
  queue.push_back(0);
  while (!queue.empty()) {
    const std::size_t at = queue.front();
    queue.pop_front();
    const Configuration here = out[at].config;
    const bool here_framed = out[at].framed;
    for_each_rule_step(sys, here, [&](std::uint32_t idx, Configuration next) {
      if (!sys.rules()[idx].action.is_epsilon()) return;
      const bool f = here_framed || (idx < framed.size() && framed[idx]);
      auto it = seen.find(next);
      if (it == seen.end()) {
        if (out.size() >= budget) throw BudgetExceeded("epsilon closure exceeded " + std::to_string(budget) + " configurations");
        seen.emplace(next, out.size());
        out.push_back({std::move(next), f});
        queue.push_back(out.size() - 1);
      } else if (out[it->second].framed && !f) {
        out[it->second].framed = false;
        queue.push_back(it->second);
      }
    });
  }
  return out;
}

struct Candidate {
  std::uint32_t rule;
  Transition t;
};

std::vector<Transition> collapse(const PushdownSystem& sys, const std::vector<bool>& framed, const Configuration& c,
                                 std::size_t budget) {
  std::vector<Candidate> found;
  bool any_epsilon = false;
  for (const auto& r : sys.rules()) any_epsilon = any_epsilon || r.action.is_epsilon();

  auto visible_from = [&](const ClosureEntry& src, auto&& sink) {
    for_each_rule_step(sys, src.config, [&](std::uint32_t idx, Configuration next) {
      const Rule& r = sys.rules()[idx];
      if (r.action.is_epsilon()) return;
      sink(idx, r.action, std::move(next), src.framed || (idx < framed.size() && framed[idx]));
    });
  };

  if (!any_epsilon) {
    visible_from(ClosureEntry{c, false}, [&](std::uint32_t idx, Action a, Configuration next, bool f) {
      found.push_back({idx, Transition{a, std::move(next), f}});
    });
  } else {
    for (const auto& pre : epsilon_closure(sys, framed, c, false, budget)) {
      visible_from(pre, [&](std::uint32_t idx, Action a, Configuration mid, bool f) {
        for (auto& post : epsilon_closure(sys, framed, mid, f, budget)) {
          found.push_back({idx, Transition{a, std::move(post.config), post.framed}});
        }
      });
    }
  }

  // Deduplicate on (action, target): keep the smallest rule index, framed only if all derivations are.
  struct Key {
    Action a;
    const Configuration* t;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.t->hash() * 31 + k.a.id(); }
  };
  struct KeyEq {
    bool operator()(const Key& x, const Key& y) const { return x.a == y.a && *x.t == *y.t; }
  };
  std::unordered_map<Key, std::size_t, KeyHash, KeyEq> index;
  std::vector<Candidate> unique;
  unique.reserve(found.size());
  for (auto& cand : found) {
    auto it = index.find(Key{cand.t.action, &cand.t.target});
    if (it == index.end()) {
      unique.push_back(std::move(cand));
      index.emplace(Key{unique.back().t.action, &unique.back().t.target}, unique.size() - 1);
    } else {
      auto& kept = unique[it->second];
      kept.rule = std::min(kept.rule, cand.rule);
      kept.t.framed = kept.t.framed && cand.t.framed;
    }
  }
  std::stable_sort(unique.begin(), unique.end(), [](const Candidate& x, const Candidate& y) {
    if (x.rule != y.rule) return x.rule < y.rule;
    return x.t.target < y.t.target;
  });
  std::vector<Transition> out;
  out.reserve(unique.size());
  for (auto& u : unique) out.push_back(std::move(u.t));
  return out;
}

}  // namespace

std::vector<Step> successors(const PushdownSystem& sys, const Configuration& c) {
  sys.check_configuration(c);
  std::vector<Step> out;
  for_each_rule_step(sys, c, [&](std::uint32_t idx, Configuration next) {
    out.push_back({sys.rules()[idx].action, std::move(next)});
  });
  return out;
}

std::vector<Step> collapsed_successors(const PushdownSystem& sys, const Configuration& c, std::size_t closure_budget) {
  sys.check_configuration(c);
  std::vector<Step> out;
  for (auto& t : collapse(sys, {}, c, closure_budget)) out.push_back({t.action, std::move(t.target)});
  return out;
}

CollapsedLts::CollapsedLts(std::shared_ptr<const PushdownSystem> sys, std::vector<std::size_t> framed_rules,
                           std::size_t closure_budget)
    : sys_(std::move(sys)), framed_(sys_->rules().size(), false), closure_budget_(closure_budget) {
  for (auto i : framed_rules) {
    if (i >= framed_.size()) throw MalformedInput("framed rule index " + std::to_string(i) + " out of range");
    framed_[i] = true;
  }
}

std::vector<Transition> CollapsedLts::transitions(const Configuration& c) const {
  return collapse(*sys_, framed_, c, closure_budget_);
}

Reachable reachable(const Lts& lts, const Configuration& c, int depth_limit, std::size_t size_limit) {
  Reachable out;
  std::unordered_set<Configuration> seen{c};
  out.configs.push_back(c);
  out.distance.push_back(0);
  if (size_limit == 0) {
    out.truncated = true;
    return out;
  }
  std::size_t layer_begin = 0;
  for (int d = 0; d < depth_limit; ++d) {
    const std::size_t layer_end = out.configs.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (auto& t : lts.transitions(out.configs[i])) {
        if (seen.contains(t.target)) continue;
        if (out.configs.size() >= size_limit) {
          out.truncated = true;
          return out;
        }
        seen.insert(t.target);
        out.configs.push_back(std::move(t.target));
        out.distance.push_back(d + 1);
      }
    }
    if (out.configs.size() == layer_end) break;
    layer_begin = layer_end;
  }
  return out;
}

Reachable reachable_parallel(const Lts& lts, const Configuration& c, int depth_limit, std::size_t size_limit) {
  Reachable out;
  std::unordered_set<Configuration> seen{c};
  out.configs.push_back(c);
  out.distance.push_back(0);
  if (size_limit == 0) {
    out.truncated = true;
    return out;
  }
  std::size_t layer_begin = 0;
  for (int d = 0; d < depth_limit; ++d) {
    const std::size_t layer_end = out.configs.size();
    const auto width = static_cast<long>(layer_end - layer_begin);
    std::vector<std::vector<Transition>> expanded(static_cast<std::size_t>(width));
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < width; ++i) {
      try {
        expanded[static_cast<std::size_t>(i)] = lts.transitions(out.configs[layer_begin + static_cast<std::size_t>(i)]);
      } catch (const std::exception& e) {
#pragma omp critical(reachable_failure)
        {
          failed = true;
          failure = e.what();
        }
      }
    }
    if (failed) throw BudgetExceeded(failure);
    // merge in frontier order so the result matches the serial kernel exactly
    for (auto& ts : expanded) {
      for (auto& t : ts) {
        if (seen.contains(t.target)) continue;
        if (out.configs.size() >= size_limit) {
          out.truncated = true;
          return out;
        }
        seen.insert(t.target);
        out.configs.push_back(std::move(t.target));
        out.distance.push_back(d + 1);
      }
    }
    if (out.configs.size() == layer_end) break;
    layer_begin = layer_end;
  }
  return out;
}

namespace {

bool counts_as_empty(const Configuration& c, const NormOptions& opts) {
  if (c.has_no_stacks()) return true;
  if (!opts.bottom_as_empty || c.stack_count() != 1) return false;
  const Stack& s = c.top_stack();
  return s.size() == 1 && s.top() == *opts.bottom_as_empty;
}

enum class Search { found, exhausted, limit };

struct NormSearch {
  Search result;
  std::vector<Configuration> closure;  // complete when result == exhausted
};

NormSearch search_empty(const Lts& lts, const Configuration& start, const NormOptions& opts,
                        std::unordered_set<Configuration>& known_normed) {
  std::vector<Configuration> nodes{start};
  std::vector<std::size_t> parent{0};
  std::unordered_set<Configuration> seen{start};
  auto mark_path = [&](std::size_t at) {
    while (true) {
      known_normed.insert(nodes[at]);
      if (at == 0) break;
      at = parent[at];
    }
  };
  if (counts_as_empty(start, opts) || known_normed.contains(start)) {
    known_normed.insert(start);
    return {Search::found, {}};
  }
  std::size_t layer_begin = 0;
  for (int d = 0; d < opts.norm_limit; ++d) {
    const std::size_t layer_end = nodes.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (auto& t : lts.transitions(nodes[i])) {
        if (seen.contains(t.target)) continue;
        seen.insert(t.target);
        nodes.push_back(t.target);
        parent.push_back(i);
        if (counts_as_empty(t.target, opts) || known_normed.contains(t.target)) {
          mark_path(nodes.size() - 1);
          return {Search::found, {}};
        }
        if (nodes.size() > opts.size_limit) return {Search::limit, {}};
      }
    }
    if (nodes.size() == layer_end) return {Search::exhausted, std::move(nodes)};
    layer_begin = layer_end;
  }
  return {Search::limit, {}};
}

// Narrows a witness to a member of its closure whose own closure is smallest (a bottom component).
Configuration refine_witness(const Lts& lts, const std::vector<Configuration>& closure) {
  constexpr std::size_t kRefineCap = 4096;
  if (closure.size() > kRefineCap) return closure.front();
  std::size_t best = 0;
  std::size_t best_size = closure.size();
  for (std::size_t i = 0; i < closure.size(); ++i) {
    auto r = reachable(lts, closure[i], static_cast<int>(closure.size()) + 1, closure.size() + 1);
    if (r.configs.size() < best_size) {
      best_size = r.configs.size();
      best = i;
    }
  }
  return closure[best];
}

}  // namespace

NormVerdict normedness_check(const Lts& lts, const Configuration& c, const NormOptions& opts) {
  if (opts.reach_limit <= 0 || opts.norm_limit <= 0 || opts.size_limit == 0) {
    throw MalformedInput("normedness limits must be positive");
  }
  lts.system().check_configuration(c);
  NormVerdict verdict;
  auto reach = reachable(lts, c, opts.reach_limit, opts.size_limit);
  std::unordered_set<Configuration> known_normed;
  std::optional<Configuration> first_unknown;
  for (const auto& x : reach.configs) {
    ++verdict.checked;
    auto res = search_empty(lts, x, opts, known_normed);
    if (res.result == Search::found) continue;
    if (res.result == Search::exhausted) {
      verdict.kind = NormKind::not_normed;
      verdict.witness = refine_witness(lts, res.closure);
      const auto moves = lts.transitions(*verdict.witness).size();
      verdict.reason = moves == 0 ? "stuck without reaching an empty configuration"
                                  : "closed set of configurations containing no empty configuration";
      return verdict;
    }
    if (!first_unknown) first_unknown = x;
  }
  if (first_unknown) {
    verdict.kind = NormKind::unknown;
    verdict.witness = first_unknown;
    verdict.reason = "norm search limit exhausted";
  } else if (reach.truncated) {
    verdict.kind = NormKind::unknown;
    verdict.reason = "reachable set truncated at size limit";
  } else {
    verdict.kind = NormKind::normed_to_limit;
  }
  return verdict;
}

NormVerdict normedness_check(const PushdownSystem& sys, const Configuration& c, const NormOptions& opts) {
  CollapsedLts lts(std::make_shared<const PushdownSystem>(sys));
  return normedness_check(lts, c, opts);
}

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::normed_to_limit: return "NormedToLimit";
    case NormKind::not_normed: return "NotNormed";
    case NormKind::unknown: return "Unknown";
  }
  return "Unknown";
}

}  // namespace bisimlab::pds
