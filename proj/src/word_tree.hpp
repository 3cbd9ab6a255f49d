#pragma once

// Traversal of the word tree I* of an IFS. Every kernel that enumerates words (stoppings,
// pressure sums, attractor generation, κ estimation) is a Visitor over this tree.
//
// A Visitor type V provides
//   bool V::visit(const WordNode&, std::span<const Word::Letter> word)   // descend into children?
//   void V::merge(V&& later)                                              // append a later DFS segment
// and is default-constructible (or built by the factory passed to walk_parallel).
//
// walk_serial is the reference: one visitor, strict DFS order.
// walk_parallel expands a fixed-size ordered frontier, walks the open subtrees on OpenMP
// workers with one visitor each, then merges visitors in DFS order. The frontier size does not
// depend on the worker count, so merged results (including floating-point sums) are identical
// for every thread count.

#include <atomic>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <omp.h>

#include "affdim/error.hpp"
#include "affdim/exec.hpp"
#include "affdim/ifs.hpp"

namespace affdim::detail {

struct WordNode {
  AffineMap map;  // S_w
  std::uint32_t depth = 0;
};

inline WordNode child_node(const Ifs& ifs, const WordNode& parent, Word::Letter j) {
  return {compose(parent.map, ifs.map(j)), parent.depth + 1};
}

/// Shared cap on visited nodes.
class NodeBudget {
 public:
  explicit NodeBudget(std::uint64_t limit) : limit_(limit) {}

  void charge(std::uint64_t n = 1) {
    if (used_.fetch_add(n, std::memory_order_relaxed) + n > limit_) {
      throw BudgetExceeded("word enumeration exceeded budget of " + std::to_string(limit_) + " nodes");
    }
  }
  std::uint64_t used() const noexcept { return used_.load(std::memory_order_relaxed); }

 private:
  std::uint64_t limit_;
  std::atomic<std::uint64_t> used_{0};
};

template <class Visitor>
void walk_subtree(const Ifs& ifs, const WordNode& node, std::vector<Word::Letter>& word, Visitor& visitor,
                  NodeBudget& budget) {
  budget.charge();
  if (!visitor.visit(node, word)) return;
  const auto n = static_cast<Word::Letter>(ifs.size());
  for (Word::Letter j = 0; j < n; ++j) {
    word.push_back(j);
    walk_subtree(ifs, child_node(ifs, node, j), word, visitor, budget);
    word.pop_back();
  }
}

/// Visits every non-empty word in DFS order (the empty word is not visited).
template <class Visitor>
void walk_serial(const Ifs& ifs, Visitor& visitor, NodeBudget& budget) {
  const WordNode root{AffineMap::identity(ifs.dim()), 0};
  std::vector<Word::Letter> word;
  const auto n = static_cast<Word::Letter>(ifs.size());
  for (Word::Letter j = 0; j < n; ++j) {
    word.assign(1, j);
    walk_subtree(ifs, child_node(ifs, root, j), word, visitor, budget);
  }
}

inline constexpr std::size_t kFrontierTarget = 256;

template <class Visitor, class Factory>
Visitor walk_parallel(const Ifs& ifs, Factory make_visitor, NodeBudget& budget, const Exec& exec) {
  struct Slot {
    std::vector<Word::Letter> word;
    WordNode node;
    bool open = true;  // open: subtree not yet visited; closed: `visitor` holds the node's own output
    Visitor visitor;
  };

  const WordNode root{AffineMap::identity(ifs.dim()), 0};
  const auto n = static_cast<Word::Letter>(ifs.size());
  std::vector<Slot> slots;
  for (Word::Letter j = 0; j < n; ++j) {
    slots.push_back(Slot{{j}, child_node(ifs, root, j), true, make_visitor()});
  }

  // Breadth-first refinement of the ordered frontier, one level per round.
  for (int round = 0; round < 64; ++round) {
    std::size_t open = 0;
    for (const auto& s : slots) open += s.open ? 1 : 0;
    if (open == 0 || open >= kFrontierTarget) break;

    std::vector<Slot> next;
    next.reserve(slots.size() * (n + 1));
    for (auto& s : slots) {
      if (!s.open) {
        next.push_back(std::move(s));
        continue;
      }
      budget.charge();
      Slot self{s.word, s.node, false, make_visitor()};
      const bool descend = self.visitor.visit(s.node, s.word);
      next.push_back(std::move(self));
      if (!descend) continue;
      for (Word::Letter j = 0; j < n; ++j) {
        auto w = s.word;
        w.push_back(j);
        next.push_back(Slot{std::move(w), child_node(ifs, s.node, j), true, make_visitor()});
      }
    }
    slots = std::move(next);
  }

  std::vector<std::size_t> open_idx;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].open) open_idx.push_back(i);
  }

  std::exception_ptr failure;
  const int threads = resolved_threads(exec);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t k = 0; k < open_idx.size(); ++k) {
    Slot& s = slots[open_idx[k]];
    try {
      std::vector<Word::Letter> word = s.word;
      walk_subtree(ifs, s.node, word, s.visitor, budget);
    } catch (...) {
#pragma omp critical(affdim_walk_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  Visitor result = make_visitor();
  for (auto& s : slots) result.merge(std::move(s.visitor));
  return result;
}

template <class Visitor, class Factory>
Visitor walk(const Ifs& ifs, Factory make_visitor, NodeBudget& budget, const Exec& exec) {
  if (!exec.parallel) {
    Visitor v = make_visitor();
    walk_serial(ifs, v, budget);
    return v;
  }
  return walk_parallel<Visitor>(ifs, make_visitor, budget, exec);
}

}  // namespace affdim::detail
