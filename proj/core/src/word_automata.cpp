#include "slimc/word_automata.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace slimc {

namespace {

// Negation normal form over literals, X, U and R.
struct Nf {
  enum K { True, False, Lit, And, Or, X, U, R } k;
  int atom = -1;    // Lit
  bool neg = false; // Lit
  int a = -1, b = -1;
};

struct NfPool {
  std::vector<Nf> nodes;
  std::map<std::string, int> dedup;

  int put(const Nf& n) {
    std::ostringstream key;
    key << n.k << ':' << n.atom << ':' << n.neg << ':' << n.a << ':' << n.b;
    auto [it, fresh] = dedup.emplace(key.str(), static_cast<int>(nodes.size()));
    if (fresh) nodes.push_back(n);
    return it->second;
  }
  int lit(int atom, bool neg) { return put({Nf::Lit, atom, neg, -1, -1}); }
  int tru() { return put({Nf::True, -1, false, -1, -1}); }
  int fls() { return put({Nf::False, -1, false, -1, -1}); }
  int bin(Nf::K k, int a, int b) { return put({k, -1, false, a, b}); }
  int un(Nf::K k, int a) { return put({k, -1, false, a, -1}); }
};

int atom_index(const std::vector<std::string>& atoms, const std::string& n) {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] == n) return static_cast<int>(i);
  fail(errc::input, "formula atom '" + n + "' not in the declared alphabet");
}

int to_nnf(const FRef& f, bool pos, NfPool& pool, const std::vector<std::string>& atoms) {
  switch (f->k) {
    case FK::True: return pos ? pool.tru() : pool.fls();
    case FK::False: return pos ? pool.fls() : pool.tru();
    case FK::Atom: return pool.lit(atom_index(atoms, f->name), !pos);
    case FK::Not: return to_nnf(f->a, !pos, pool, atoms);
    case FK::Or: {
      int a = to_nnf(f->a, pos, pool, atoms), b = to_nnf(f->b, pos, pool, atoms);
      return pool.bin(pos ? Nf::Or : Nf::And, a, b);
    }
    case FK::And: {
      int a = to_nnf(f->a, pos, pool, atoms), b = to_nnf(f->b, pos, pool, atoms);
      return pool.bin(pos ? Nf::And : Nf::Or, a, b);
    }
    case FK::Implies: {
      int a = to_nnf(f->a, !pos, pool, atoms), b = to_nnf(f->b, pos, pool, atoms);
      return pool.bin(pos ? Nf::Or : Nf::And, a, b);
    }
    case FK::Next: return pool.un(Nf::X, to_nnf(f->a, pos, pool, atoms));
    case FK::Until: {
      int a = to_nnf(f->a, pos, pool, atoms), b = to_nnf(f->b, pos, pool, atoms);
      return pool.bin(pos ? Nf::U : Nf::R, a, b);
    }
    case FK::Finally: {
      int a = to_nnf(f->a, pos, pool, atoms);
      return pos ? pool.bin(Nf::U, pool.tru(), a) : pool.bin(Nf::R, pool.fls(), a);
    }
    case FK::Globally: {
      int a = to_nnf(f->a, pos, pool, atoms);
      return pos ? pool.bin(Nf::R, pool.fls(), a) : pool.bin(Nf::U, pool.tru(), a);
    }
    default: fail(errc::input, "non-LTL operator in a word-automaton translation");
  }
}

// Tableau node under construction.
struct Proto {
  std::set<int> nnew, old, next;
  std::vector<int> incoming;  // source tableau states; -1 marks initial
};

struct Tableau {
  NfPool& pool;
  // completed states, keyed by (old, next)
  std::map<std::pair<std::set<int>, std::set<int>>, int> ids;
  std::vector<std::set<int>> olds, nexts;
  std::vector<std::pair<int, int>> tr;  // (source or -1, target)

  explicit Tableau(NfPool& p) : pool(p) {}

  void expand(Proto nd) {
    if (nd.nnew.empty()) {
      auto key = std::make_pair(nd.old, nd.next);
      auto it = ids.find(key);
      int id;
      if (it != ids.end()) {
        id = it->second;
        for (int s : nd.incoming) tr.emplace_back(s, id);
        return;
      }
      id = static_cast<int>(olds.size());
      ids.emplace(key, id);
      olds.push_back(nd.old);
      nexts.push_back(nd.next);
      for (int s : nd.incoming) tr.emplace_back(s, id);
      Proto succ;
      succ.nnew = nd.next;
      succ.incoming = {id};
      expand(std::move(succ));
      return;
    }
    int eta = *nd.nnew.begin();
    nd.nnew.erase(nd.nnew.begin());
    if (nd.old.count(eta)) {
      expand(std::move(nd));
      return;
    }
    const Nf n = pool.nodes[eta];
    switch (n.k) {
      case Nf::False: return;  // inconsistent branch
      case Nf::True: expand(std::move(nd)); return;
      case Nf::Lit: {
        int negated = pool.lit(n.atom, !n.neg);
        if (nd.old.count(negated)) return;
        nd.old.insert(eta);
        expand(std::move(nd));
        return;
      }
      case Nf::And: {
        nd.old.insert(eta);
        if (!nd.old.count(n.a)) nd.nnew.insert(n.a);
        if (!nd.old.count(n.b)) nd.nnew.insert(n.b);
        expand(std::move(nd));
        return;
      }
      case Nf::Or: {
        Proto left = nd, right = nd;
        left.old.insert(eta);
        right.old.insert(eta);
        if (!left.old.count(n.a)) left.nnew.insert(n.a);
        if (!right.old.count(n.b)) right.nnew.insert(n.b);
        expand(std::move(left));
        expand(std::move(right));
        return;
      }
      case Nf::X: {
        nd.old.insert(eta);
        nd.next.insert(n.a);
        expand(std::move(nd));
        return;
      }
      case Nf::U: {
        Proto left = nd, right = nd;
        left.old.insert(eta);
        right.old.insert(eta);
        if (!left.old.count(n.a)) left.nnew.insert(n.a);
        left.next.insert(eta);
        if (!right.old.count(n.b)) right.nnew.insert(n.b);
        expand(std::move(left));
        expand(std::move(right));
        return;
      }
      case Nf::R: {
        Proto left = nd, right = nd;
        left.old.insert(eta);
        right.old.insert(eta);
        if (!left.old.count(n.b)) left.nnew.insert(n.b);
        left.next.insert(eta);
        if (!right.old.count(n.a)) right.nnew.insert(n.a);
        if (!right.old.count(n.b)) right.nnew.insert(n.b);
        expand(std::move(left));
        expand(std::move(right));
        return;
      }
    }
  }
};

// Language-preserving cleanup: keep states that can reach an accepting cycle.
Nbw prune(const Nbw& in) {
  int n = in.num_states();
  // Tarjan SCC
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> onstack(n, 0);
  std::vector<int> stack;
  int next_index = 0, ncomp = 0;
  std::vector<int> call, child;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call = {root};
    child = {0};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    onstack[root] = 1;
    while (!call.empty()) {
      int v = call.back();
      if (child.back() < static_cast<int>(in.edges[v].size())) {
        int w = in.edges[v][child.back()++].dst;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          onstack[w] = 1;
          call.push_back(w);
          child.push_back(0);
        } else if (onstack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            onstack[w] = 0;
            comp[w] = ncomp;
            if (w == v) break;
          }
          ++ncomp;
        }
        call.pop_back();
        child.pop_back();
        if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      }
    }
  }
  // component has an internal edge?
  std::vector<char> comp_cyclic(ncomp, 0), comp_accepting(ncomp, 0);
  for (int v = 0; v < n; ++v)
    for (const auto& e : in.edges[v])
      if (comp[e.dst] == comp[v]) comp_cyclic[comp[v]] = 1;
  for (int v = 0; v < n; ++v)
    if (in.color[v] == 0) comp_accepting[comp[v]] = 1;
  // states that can reach a cyclic accepting component
  std::vector<char> good(n, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (good[v]) continue;
      bool g = comp_cyclic[comp[v]] && comp_accepting[comp[v]];
      if (!g) {
        // an accepting cycle may lie in the component even if v is not coloured;
        // the check above covers it because comp_accepting is per component.
        for (const auto& e : in.edges[v])
          if (good[e.dst]) {
            g = true;
            break;
          }
      }
      if (g) {
        good[v] = 1;
        changed = true;
      }
    }
  }
  if (!good[in.initial]) {
    // empty language; keep a single rejecting sink
    Nbw out;
    out.atoms = in.atoms;
    out.initial = 0;
    out.color = {1};
    out.edges = {{}};
    return out;
  }
  std::vector<int> remap(n, -1);
  int m = 0;
  for (int v = 0; v < n; ++v)
    if (good[v]) remap[v] = m++;
  Nbw out;
  out.atoms = in.atoms;
  out.initial = remap[in.initial];
  out.color.resize(m);
  out.edges.resize(m);
  for (int v = 0; v < n; ++v) {
    if (!good[v]) continue;
    out.color[remap[v]] = in.color[v];
    for (const auto& e : in.edges[v])
      if (good[e.dst]) out.edges[remap[v]].push_back({e.req, e.forb, remap[e.dst]});
  }
  return out;
}

}  // namespace

Nbw ltl_to_nbw(const FRef& psi, const std::vector<std::string>& atoms) {
  require(atoms.size() <= 64, errc::ceiling, "too many atoms for a word automaton");
  NfPool pool;
  int root = to_nnf(psi, true, pool, atoms);
  Tableau tab(pool);
  Proto init;
  init.nnew = {root};
  init.incoming = {-1};
  tab.expand(std::move(init));

  // acceptance sets, one per Until in the pool
  std::vector<int> untils;
  for (std::size_t i = 0; i < pool.nodes.size(); ++i)
    if (pool.nodes[i].k == Nf::U) untils.push_back(static_cast<int>(i));
  int k = static_cast<int>(untils.size());
  int nn = static_cast<int>(tab.olds.size());
  auto in_fset = [&](int state, int j) {
    int u = untils[j];
    return !tab.olds[state].count(u) || tab.olds[state].count(pool.nodes[u].b);
  };
  auto guard_of = [&](int state) {
    Letter req = 0, forb = 0;
    for (int f : tab.olds[state]) {
      const Nf& n = pool.nodes[f];
      if (n.k == Nf::Lit) {
        if (n.neg)
          forb |= Letter{1} << n.atom;
        else
          req |= Letter{1} << n.atom;
      }
    }
    return std::make_pair(req, forb);
  };

  std::vector<std::vector<int>> succ(nn);
  std::vector<int> initial_states;
  for (auto [src, dst] : tab.tr) {
    if (src == -1)
      initial_states.push_back(dst);
    else
      succ[src].push_back(dst);
  }

  Nbw out;
  out.atoms = atoms;
  if (k == 0) {
    // no untils: every run accepting; single counter value
    out.color.assign(nn + 1, 0);
    out.edges.assign(nn + 1, {});
    out.initial = nn;
    out.color[nn] = 1;
    for (int s = 0; s < nn; ++s) {
      auto [req, forb] = guard_of(s);
      for (int t : succ[s]) out.edges[s].push_back({req, forb, t});
      // initial edges
    }
    for (int s : initial_states) {
      auto [req, forb] = guard_of(s);
      for (int t : succ[s]) out.edges[nn].push_back({req, forb, t});
    }
    return prune(out);
  }

  // degeneralize: states (tableau node, awaited set index), plus a fresh initial
  int total = nn * k + 1;
  int q0 = nn * k;
  out.color.assign(total, 1);
  out.edges.assign(total, {});
  out.initial = q0;
  auto id = [&](int s, int j) { return s * k + j; };
  for (int s = 0; s < nn; ++s) {
    auto [req, forb] = guard_of(s);
    for (int j = 0; j < k; ++j) {
      int j2 = in_fset(s, j) ? (j + 1) % k : j;
      for (int t : succ[s]) out.edges[id(s, j)].push_back({req, forb, id(t, j2)});
    }
  }
  for (int s = 0; s < nn; ++s)
    if (in_fset(s, 0)) out.color[id(s, 0)] = 0;
  for (int s : initial_states) {
    auto [req, forb] = guard_of(s);
    int j2 = in_fset(s, 0) ? 1 % k : 0;
    for (int t : succ[s]) out.edges[q0].push_back({req, forb, id(t, j2)});
  }
  return prune(out);
}

bool nbw_membership(const Nbw& a, const std::vector<Letter>& prefix,
                    const std::vector<Letter>& loop) {
  require(!loop.empty(), errc::input, "lasso loop must be nonempty");
  int P = static_cast<int>(prefix.size());
  int L = static_cast<int>(loop.size());
  int W = P + L;
  auto letter_at = [&](int i) { return i < P ? prefix[i] : loop[i - P]; };
  auto next_pos = [&](int i) { return i + 1 < W ? i + 1 : P; };
  int n = a.num_states();
  auto node = [&](int i, int q) { return i * n + q; };
  std::vector<char> seen(static_cast<std::size_t>(W) * n, 0);
  std::vector<int> work;
  work.push_back(node(0, a.initial));
  seen[node(0, a.initial)] = 1;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(W) * n);
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    int i = v / n, q = v % n;
    Letter w = letter_at(i);
    for (const auto& e : a.edges[q]) {
      if (!a.edge_enabled(e, w)) continue;
      int u = node(next_pos(i), e.dst);
      adj[v].push_back(u);
      if (!seen[u]) {
        seen[u] = 1;
        work.push_back(u);
      }
    }
  }
  // accepting cycle search on the reachable product: iterative Tarjan
  int N = W * n;
  std::vector<int> index(N, -1), low(N, 0), comp(N, -1);
  std::vector<char> onstack(N, 0);
  std::vector<int> stack, call, child;
  int next_index = 0, ncomp = 0;
  for (int root = 0; root < N; ++root) {
    if (!seen[root] || index[root] != -1) continue;
    call = {root};
    child = {0};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    onstack[root] = 1;
    while (!call.empty()) {
      int v = call.back();
      if (child.back() < static_cast<int>(adj[v].size())) {
        int w = adj[v][child.back()++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          onstack[w] = 1;
          call.push_back(w);
          child.push_back(0);
        } else if (onstack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            onstack[w] = 0;
            comp[w] = ncomp;
            if (w == v) break;
          }
          ++ncomp;
        }
        call.pop_back();
        child.pop_back();
        if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      }
    }
  }
  std::vector<char> cyclic(ncomp, 0), accepting(ncomp, 0);
  for (int v = 0; v < N; ++v) {
    if (!seen[v]) continue;
    for (int u : adj[v])
      if (comp[u] == comp[v]) cyclic[comp[v]] = 1;
  }
  for (int v = 0; v < N; ++v)
    if (seen[v] && a.color[v % n] == 0) accepting[comp[v]] = 1;
  for (int c = 0; c < ncomp; ++c)
    if (cyclic[c] && accepting[c]) return true;
  return false;
}

std::string dump_hoa(const Nbw& a) {
  std::ostringstream o;
  o << "HOA-like: v1\n";
  o << "States: " << a.num_states() << "\n";
  o << "Start: " << a.initial << "\n";
  o << "AP: " << a.atoms.size();
  for (const auto& p : a.atoms) o << " \"" << p << "\"";
  o << "\nAcceptance: Buchi (colour 0)\n--BODY--\n";
  for (int s = 0; s < a.num_states(); ++s) {
    o << "State: " << s << " {" << a.color[s] << "}\n";
    for (const auto& e : a.edges[s]) {
      o << "  [";
      bool first = true;
      for (std::size_t i = 0; i < a.atoms.size(); ++i) {
        if (e.req & (Letter{1} << i)) {
          o << (first ? "" : " & ") << a.atoms[i];
          first = false;
        }
        if (e.forb & (Letter{1} << i)) {
          o << (first ? "!" : " & !") << a.atoms[i];
          first = false;
        }
      }
      if (first) o << "t";
      o << "] " << e.dst << "\n";
    }
  }
  o << "--END--\n";
  return o.str();
}

}  // namespace slimc
