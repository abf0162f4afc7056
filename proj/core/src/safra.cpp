#include "safra.hpp"

#include <algorithm>
#include <set>

#include "slimc/support.hpp"

namespace slimc::detail {

TraceMonitor::TraceMonitor(int initial_bad_state, SuccFn succ, AccFn acc)
    : succ_(std::move(succ)), acc_(std::move(acc)) {
  MonState init;
  init.roots.push_back({1, {initial_bad_state}, {}});
  init.iar = {1};
  intern(init);
}

void TraceMonitor::serialize(const TNode& n, std::vector<int>& out) {
  out.push_back(n.name);
  out.push_back(static_cast<int>(n.label.size()));
  for (int q : n.label) out.push_back(q);
  out.push_back(static_cast<int>(n.children.size()));
  for (const TNode& c : n.children) serialize(c, out);
}

int TraceMonitor::intern(const MonState& s) const {
  std::vector<int> key;
  key.push_back(static_cast<int>(s.roots.size()));
  for (const TNode& r : s.roots) serialize(r, key);
  key.push_back(-1);
  for (int n : s.iar) key.push_back(n);
  auto [it, fresh] = state_ids_.emplace(key, static_cast<int>(states_.size()));
  if (fresh) states_.push_back(s);
  return it->second;
}

std::pair<int, int> TraceMonitor::step(int state, const EdgeSet& edges) const {
  auto eid_it = edge_ids_.emplace(edges, static_cast<int>(edge_ids_.size()));
  int eid = eid_it.first->second;
  auto memo = step_memo_.find({state, eid});
  if (memo != step_memo_.end()) return memo->second;

  const MonState src = states_[state];  // copy: states_ may grow below
  MonState dst;
  std::set<int> died, marked, born;

  // successor map over bad states restricted to this letter
  auto succ_of = [&](const std::vector<int>& label) {
    std::set<int> out;
    std::vector<int> buf;
    for (int q : label) {
      buf.clear();
      succ_(q, edges, buf);
      out.insert(buf.begin(), buf.end());
    }
    return std::vector<int>(out.begin(), out.end());
  };

  if (!src.roots.empty()) {
    TNode root = src.roots[0];

    // fresh-name pool: names in use at step start
    std::set<int> used;
    {
      std::vector<const TNode*> stack{&root};
      while (!stack.empty()) {
        const TNode* n = stack.back();
        stack.pop_back();
        used.insert(n->name);
        for (const TNode& c : n->children) stack.push_back(&c);
      }
    }
    auto fresh = [&]() {
      int n = 1;
      while (used.count(n)) ++n;
      used.insert(n);
      return n;
    };

    // 1. spawn children from accepting states (pre-update labels)
    {
      std::vector<TNode*> stack{&root};
      std::vector<TNode*> order;
      while (!stack.empty()) {
        TNode* n = stack.back();
        stack.pop_back();
        order.push_back(n);
        for (TNode& c : n->children) stack.push_back(&c);
      }
      for (TNode* n : order) {
        std::vector<int> accepting;
        for (int q : n->label)
          if (acc_(q)) accepting.push_back(q);
        if (!accepting.empty()) {
          int nm = fresh();
          born.insert(nm);
          n->children.push_back({nm, accepting, {}});
        }
      }
    }

    // 2. subset update along the edge relation
    {
      std::vector<TNode*> stack{&root};
      while (!stack.empty()) {
        TNode* n = stack.back();
        stack.pop_back();
        n->label = succ_of(n->label);
        for (TNode& c : n->children) stack.push_back(&c);
      }
    }

    // 3. horizontal merge: a state is kept in the oldest sibling containing it,
    //    and labels stay within the parent's label
    {
      std::function<void(TNode&, const std::vector<int>&)> walk = [&](TNode& n,
                                                                       const std::vector<int>&
                                                                           allowed) {
        std::vector<int> keep;
        std::set_intersection(n.label.begin(), n.label.end(), allowed.begin(), allowed.end(),
                              std::back_inserter(keep));
        n.label = keep;
        std::set<int> seen;
        for (TNode& c : n.children) {
          std::vector<int> child_allowed;
          for (int q : n.label)
            if (!seen.count(q)) child_allowed.push_back(q);
          walk(c, child_allowed);
          seen.insert(c.label.begin(), c.label.end());
        }
      };
      std::vector<int> all = root.label;
      walk(root, all);
    }

    // 4. remove empty nodes
    {
      std::function<void(TNode&)> strip = [&](TNode& n) {
        std::vector<TNode> keep;
        for (TNode& c : n.children) {
          if (c.label.empty()) {
            // its whole subtree dies
            std::vector<const TNode*> stack{&c};
            while (!stack.empty()) {
              const TNode* x = stack.back();
              stack.pop_back();
              died.insert(x->name);
              for (const TNode& cc : x->children) stack.push_back(&cc);
            }
          } else {
            strip(c);
            keep.push_back(std::move(c));
          }
        }
        n.children = std::move(keep);
      };
      if (root.label.empty()) {
        std::vector<const TNode*> stack{&root};
        while (!stack.empty()) {
          const TNode* x = stack.back();
          stack.pop_back();
          died.insert(x->name);
          for (const TNode& cc : x->children) stack.push_back(&cc);
        }
        root.children.clear();
        root.label.clear();
        dst.roots.clear();
      } else {
        strip(root);
        dst.roots.push_back(root);
      }
    }

    // 5. vertical merge (green events), bottom-up
    if (!dst.roots.empty()) {
      std::function<void(TNode&)> vert = [&](TNode& n) {
        for (TNode& c : n.children) vert(c);
        if (n.children.empty()) return;
        std::set<int> uni;
        for (const TNode& c : n.children) uni.insert(c.label.begin(), c.label.end());
        if (std::vector<int>(uni.begin(), uni.end()) == n.label) {
          marked.insert(n.name);
          for (const TNode& c : n.children) {
            std::vector<const TNode*> stack{&c};
            while (!stack.empty()) {
              const TNode* x = stack.back();
              stack.pop_back();
              died.insert(x->name);
              for (const TNode& cc : x->children) stack.push_back(&cc);
            }
          }
          n.children.clear();
        }
      };
      vert(dst.roots[0]);
    }
  }

  // born-and-died names never entered the record
  for (int d : died) born.erase(d);

  // index appearance record update
  int e_min = -1;
  for (std::size_t i = 0; i < src.iar.size(); ++i)
    if (died.count(src.iar[i])) {
      e_min = static_cast<int>(i) + 1;
      break;
    }
  for (int nm : src.iar)
    if (!died.count(nm)) dst.iar.push_back(nm);
  for (int nm : born) dst.iar.push_back(nm);
  int g_min = -1;
  for (std::size_t i = 0; i < dst.iar.size(); ++i)
    if (marked.count(dst.iar[i])) {
      g_min = static_cast<int>(i) + 1;
      break;
    }

  int neutral = 2 * static_cast<int>(dst.iar.size()) + 3;
  int color = neutral;
  if (e_min >= 1) color = std::min(color, 2 * e_min - 1);
  if (g_min >= 1) color = std::min(color, 2 * g_min);

  int id = intern(dst);
  auto res = std::make_pair(id, color);
  step_memo_.emplace(std::make_pair(state, eid), res);
  return res;
}

}  // namespace slimc::detail
