#include "slimc/parity_games.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace slimc {

std::vector<std::string> validate(const ParityGame& g) {
  std::vector<std::string> out;
  if (g.size() == 0) out.push_back("game has no positions");
  if (g.color.size() != g.owner.size() || g.moves.size() != g.owner.size())
    out.push_back("field sizes disagree");
  for (int v = 0; v < g.size(); ++v) {
    if (v < static_cast<int>(g.moves.size())) {
      if (g.moves[v].empty()) out.push_back("position without outgoing move: " + std::to_string(v));
      for (int u : g.moves[v])
        if (u < 0 || u >= g.size()) out.push_back("move target out of range at " + std::to_string(v));
    }
    if (v < static_cast<int>(g.color.size()) && g.color[v] < 0)
      out.push_back("negative colour at " + std::to_string(v));
  }
  if (g.initial < 0 || g.initial >= g.size()) out.push_back("initial position out of range");
  return out;
}

namespace {

struct Zielonka {
  const ParityGame& g;
  GameSolution sol;
  std::vector<int> pred_count;  // scratch for attractors

  explicit Zielonka(const ParityGame& gg) : g(gg) {
    sol.winner.assign(g.size(), 0);
    sol.strategy_eve.assign(g.size(), -1);
    sol.strategy_adam.assign(g.size(), -1);
  }

  // Attractor of `targets` for player p within `alive`. Marks attracted
  // positions in `in_attr` and records p's attractor moves in `strat`.
  void attractor(const std::vector<char>& alive, std::vector<char>& in_attr, int p,
                 std::vector<int>& strat, std::deque<int>& queue,
                 const std::vector<std::vector<int>>& preds) {
    std::vector<int> cnt(g.size(), 0);
    for (int v = 0; v < g.size(); ++v) {
      if (!alive[v]) continue;
      int c = 0;
      for (int u : g.moves[v])
        if (alive[u]) ++c;
      cnt[v] = c;
    }
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : preds[u]) {
        if (!alive[v] || in_attr[v]) continue;
        if (g.owner[v] == p) {
          in_attr[v] = 1;
          strat[v] = u;
          queue.push_back(v);
        } else {
          if (--cnt[v] == 0) {
            in_attr[v] = 1;
            queue.push_back(v);
          }
        }
      }
    }
  }

  void solve(std::vector<char> alive, const std::vector<std::vector<int>>& preds) {
    int min_color = -1;
    for (int v = 0; v < g.size(); ++v)
      if (alive[v] && (min_color < 0 || g.color[v] < min_color)) min_color = g.color[v];
    if (min_color < 0) return;
    int i = min_color & 1;
    auto& strat_i = i == 0 ? sol.strategy_eve : sol.strategy_adam;
    auto& strat_o = i == 0 ? sol.strategy_adam : sol.strategy_eve;

    std::vector<char> in_a(g.size(), 0);
    std::vector<int> att(g.size(), -1);
    std::deque<int> queue;
    for (int v = 0; v < g.size(); ++v)
      if (alive[v] && g.color[v] == min_color) {
        in_a[v] = 1;
        queue.push_back(v);
      }
    attractor(alive, in_a, i, att, queue, preds);

    std::vector<char> rest = alive;
    for (int v = 0; v < g.size(); ++v)
      if (in_a[v]) rest[v] = 0;
    solve(rest, preds);

    bool opp_nonempty = false;
    for (int v = 0; v < g.size(); ++v)
      if (rest[v] && sol.winner[v] != i) {
        opp_nonempty = true;
        break;
      }

    if (!opp_nonempty) {
      for (int v = 0; v < g.size(); ++v) {
        if (!alive[v]) continue;
        if (in_a[v]) {
          sol.winner[v] = static_cast<uint8_t>(i);
          if (g.owner[v] == i) {
            if (att[v] >= 0)
              strat_i[v] = att[v];
            else {
              // colour-c target: any move staying alive
              for (int u : g.moves[v])
                if (alive[u]) {
                  strat_i[v] = u;
                  break;
                }
            }
            strat_o[v] = -1;
          }
        }
        // rest positions keep the recursive assignment
      }
      return;
    }

    int o = 1 - i;
    std::vector<char> in_b(g.size(), 0);
    std::vector<int> att2(g.size(), -1);
    std::deque<int> queue2;
    for (int v = 0; v < g.size(); ++v)
      if (rest[v] && sol.winner[v] == o) {
        in_b[v] = 1;
        queue2.push_back(v);
      }
    // remember the recursive strategy inside the opponent's region before the
    // next solve call can overwrite anything (it will not touch B, but be
    // explicit about which entries survive)
    attractor(alive, in_b, o, att2, queue2, preds);

    std::vector<char> alive3 = alive;
    for (int v = 0; v < g.size(); ++v)
      if (in_b[v]) alive3[v] = 0;

    // record B before recursing: targets keep their recursive strategy,
    // attracted positions take the attractor move
    auto& strat_opp = o == 0 ? sol.strategy_eve : sol.strategy_adam;
    for (int v = 0; v < g.size(); ++v) {
      if (!in_b[v]) continue;
      sol.winner[v] = static_cast<uint8_t>(o);
      if (g.owner[v] == o && att2[v] >= 0) strat_opp[v] = att2[v];
    }
    solve(alive3, preds);
  }
};

}  // namespace

GameSolution solve_zielonka(const ParityGame& g) {
  Zielonka z(g);
  std::vector<std::vector<int>> preds(g.size());
  for (int v = 0; v < g.size(); ++v)
    for (int u : g.moves[v]) preds[u].push_back(v);
  z.solve(std::vector<char>(g.size(), 1), preds);
  return std::move(z.sol);
}

// ---- small progress measures --------------------------------------------------

namespace {

// Jurdziński's algorithm for max-parity; min-even games are recoloured with
// c' = M - c for an even M ≥ max colour.
struct Spm {
  int n;
  std::vector<int> prio;            // max-parity colours
  std::vector<int> odd_prios;       // descending (most significant first)
  std::vector<int> cap;             // per odd prio index
  std::vector<std::vector<int>> rho;  // measure per vertex; empty vector = ⊤ flag separately
  std::vector<char> top;

  int cmp(const std::vector<int>& a, bool atop, const std::vector<int>& b, bool btop) const {
    if (atop && btop) return 0;
    if (atop) return 1;
    if (btop) return -1;
    for (std::size_t i = 0; i < odd_prios.size(); ++i) {
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
  }

  // compare truncated to priorities ≥ p
  int cmp_trunc(const std::vector<int>& a, bool atop, const std::vector<int>& b, bool btop,
                int p) const {
    if (atop && btop) return 0;
    if (atop) return 1;
    if (btop) return -1;
    for (std::size_t i = 0; i < odd_prios.size() && odd_prios[i] >= p; ++i)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }

  // least m with m ≥_p r (strict if p odd); returns top flag
  std::pair<std::vector<int>, bool> prog(const std::vector<int>& r, bool rtop, int p) const {
    std::vector<int> m(odd_prios.size(), 0);
    if (rtop) return {m, true};
    for (std::size_t i = 0; i < odd_prios.size() && odd_prios[i] >= p; ++i) m[i] = r[i];
    if (p % 2 == 0) return {m, false};
    // strictly increase within components ≥ p: bump the least significant
    // allowed component, with carry
    for (int i = static_cast<int>(odd_prios.size()) - 1; i >= 0; --i) {
      if (odd_prios[i] < p) continue;
      if (m[i] < cap[i]) {
        ++m[i];
        for (std::size_t j = i + 1; j < odd_prios.size(); ++j) m[j] = 0;
        return {m, false};
      }
      m[i] = 0;
    }
    return {m, true};
  }
};

}  // namespace

std::vector<uint8_t> solve_progress_measures(const ParityGame& g) {
  int n = g.size();
  int maxc = 0;
  for (int c : g.color) maxc = std::max(maxc, c);
  int M = maxc % 2 == 0 ? maxc : maxc + 1;
  Spm s;
  s.n = n;
  s.prio.resize(n);
  for (int v = 0; v < n; ++v) s.prio[v] = M - g.color[v];
  int d = 0;
  for (int v = 0; v < n; ++v) d = std::max(d, s.prio[v]);
  for (int p = d % 2 == 1 ? d : d - 1; p >= 1; p -= 2) s.odd_prios.push_back(p);
  s.cap.assign(s.odd_prios.size(), 0);
  for (int v = 0; v < n; ++v)
    for (std::size_t i = 0; i < s.odd_prios.size(); ++i)
      if (s.prio[v] == s.odd_prios[i]) ++s.cap[i];
  s.rho.assign(n, std::vector<int>(s.odd_prios.size(), 0));
  s.top.assign(n, 0);

  std::vector<std::vector<int>> preds(n);
  for (int v = 0; v < n; ++v)
    for (int u : g.moves[v]) preds[u].push_back(v);

  auto lift_value = [&](int v) -> std::pair<std::vector<int>, bool> {
    bool eve = g.owner[v] == 0;
    std::vector<int> best;
    bool best_top = false;
    bool first = true;
    for (int u : g.moves[v]) {
      auto [m, t] = s.prog(s.rho[u], s.top[u], s.prio[v]);
      if (first) {
        best = m;
        best_top = t;
        first = false;
        continue;
      }
      int c = s.cmp(m, t, best, best_top);
      if ((eve && c < 0) || (!eve && c > 0)) {
        best = m;
        best_top = t;
      }
    }
    return {best, best_top};
  };

  std::deque<int> work;
  std::vector<char> inwork(n, 1);
  for (int v = 0; v < n; ++v) work.push_back(v);
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    inwork[v] = 0;
    auto [m, t] = lift_value(v);
    if (s.cmp(m, t, s.rho[v], s.top[v]) > 0) {
      if (t)
        s.top[v] = 1;
      else
        s.rho[v] = m;
      for (int u : preds[v])
        if (!inwork[u]) {
          inwork[u] = 1;
          work.push_back(u);
        }
    }
  }
  std::vector<uint8_t> winner(n, 0);
  for (int v = 0; v < n; ++v) winner[v] = s.top[v] ? 1 : 0;
  return winner;
}

bool verify_strategy(const ParityGame& g, int player, const std::vector<uint8_t>& winner,
                     const std::vector<int>& strategy) {
  int n = g.size();
  std::vector<char> region(n, 0);
  for (int v = 0; v < n; ++v) region[v] = winner[v] == player;
  std::vector<std::vector<int>> adj(n);
  for (int v = 0; v < n; ++v) {
    if (!region[v]) continue;
    if (g.owner[v] == player) {
      int s = strategy[v];
      if (s < 0) return false;
      if (std::find(g.moves[v].begin(), g.moves[v].end(), s) == g.moves[v].end()) return false;
      if (!region[s]) return false;  // strategy leaves region
      adj[v].push_back(s);
    } else {
      for (int u : g.moves[v]) {
        if (!region[u]) return false;  // region not closed under opponent moves
        adj[v].push_back(u);
      }
    }
  }
  // No cycle inside the region may have minimal colour of the opponent's
  // parity. For each opponent colour c, look for a colour-c vertex on a cycle
  // of the subgraph restricted to colours ≥ c.
  std::set<int> colors;
  for (int v = 0; v < n; ++v)
    if (region[v]) colors.insert(g.color[v]);
  for (int c : colors) {
    if ((c & 1) == player) continue;  // player's own parity is fine
    // iterative Tarjan over {v in region : color[v] >= c}
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> onstack(n, 0);
    std::vector<int> stack, call, child;
    int next_index = 0, ncomp = 0;
    auto inside = [&](int v) { return region[v] && g.color[v] >= c; };
    for (int root = 0; root < n; ++root) {
      if (!inside(root) || index[root] != -1) continue;
      call = {root};
      child = {0};
      index[root] = low[root] = next_index++;
      stack.push_back(root);
      onstack[root] = 1;
      while (!call.empty()) {
        int v = call.back();
        bool advanced = false;
        while (child.back() < static_cast<int>(adj[v].size())) {
          int w = adj[v][child.back()++];
          if (!inside(w)) continue;
          if (index[w] == -1) {
            index[w] = low[w] = next_index++;
            stack.push_back(w);
            onstack[w] = 1;
            call.push_back(w);
            child.push_back(0);
            advanced = true;
            break;
          }
          if (onstack[w]) low[v] = std::min(low[v], index[w]);
        }
        if (advanced) continue;
        if (low[v] == index[v]) {
          std::vector<int> scc;
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            onstack[w] = 0;
            comp[w] = ncomp;
            scc.push_back(w);
            if (w == v) break;
          }
          ++ncomp;
          bool cyclic = scc.size() > 1;
          if (!cyclic)
            for (int u : adj[scc[0]])
              if (u == scc[0]) cyclic = true;
          if (cyclic)
            for (int w : scc)
              if (g.color[w] == c) return false;
        }
        call.pop_back();
        child.pop_back();
        if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      }
    }
  }
  return true;
}

std::string to_dot(const ParityGame& g) {
  std::ostringstream o;
  o << "digraph parity {\n";
  for (int v = 0; v < g.size(); ++v) {
    o << "  n" << v << " [shape=" << (g.owner[v] == 0 ? "ellipse" : "box") << ",label=\"" << v
      << ":" << g.color[v] << "\"];\n";
    for (int u : g.moves[v]) o << "  n" << v << " -> n" << u << ";\n";
  }
  o << "}\n";
  return o.str();
}

std::vector<int> compress_colors(const std::vector<int>& colors) {
  std::vector<int> distinct = colors;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::map<int, int> remap;
  int prev_new = -1;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    int c = distinct[i];
    if (i == 0) {
      prev_new = c & 1;
    } else if ((c & 1) != (prev_new & 1)) {
      prev_new = prev_new + 1;
    }
    remap[c] = prev_new;
  }
  std::vector<int> out(colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i) out[i] = remap[colors[i]];
  return out;
}

}  // namespace slimc
