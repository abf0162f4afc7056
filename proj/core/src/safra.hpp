#pragma once

// Internal to the tree-automata module: deterministic parity monitor for
// trace languages over run-DAG edge relations, built with Safra trees and an
// index-appearance record. Used by alternation removal; not installed.

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace slimc::detail {

// Edge relation over the states of a nondeterministic Büchi word automaton,
// sorted pairs (src, dst).
using EdgeSet = std::vector<std::pair<int, int>>;

// Deterministic min-even parity automaton over edge-set letters accepting the
// words that carry some Büchi-accepting infinite trace. States are built on
// demand and interned; colours are emitted per transition.
class TraceMonitor {
 public:
  using SuccFn = std::function<void(int bad_state, const EdgeSet& edges, std::vector<int>& out)>;
  using AccFn = std::function<bool(int bad_state)>;

  TraceMonitor(int initial_bad_state, SuccFn succ, AccFn acc);

  int initial() const { return 0; }
  int num_states() const { return static_cast<int>(states_.size()); }
  int interned_edge_sets() const { return static_cast<int>(edge_ids_.size()); }

  // Deterministic step; colour is min-even for "a bad trace exists".
  std::pair<int, int> step(int state, const EdgeSet& edges) const;

 private:
  struct TNode {
    int name;
    std::vector<int> label;
    std::vector<TNode> children;
  };
  struct MonState {
    std::vector<TNode> roots;  // zero or one root
    std::vector<int> iar;      // alive names, least recently disturbed first
  };

  SuccFn succ_;
  AccFn acc_;

  mutable std::vector<MonState> states_;
  mutable std::map<std::vector<int>, int> state_ids_;
  mutable std::map<EdgeSet, int> edge_ids_;
  mutable std::map<std::pair<int, int>, std::pair<int, int>> step_memo_;

  int intern(const MonState& s) const;
  static void serialize(const TNode& n, std::vector<int>& out);
};

}  // namespace slimc::detail
