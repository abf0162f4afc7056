#include "slimc/structures.hpp"

#include <algorithm>
#include <numeric>

namespace slimc {

Partition Partition::identity(int n) {
  Partition p;
  p.class_of.resize(n);
  std::iota(p.class_of.begin(), p.class_of.end(), 0);
  p.classes = n;
  return p;
}

Partition Partition::blind(int n) {
  Partition p;
  p.class_of.assign(n, 0);
  p.classes = n > 0 ? 1 : 0;
  return p;
}

Partition Partition::from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
  Partition p;
  p.class_of.assign(n, -1);
  int next = 0;
  for (const auto& b : blocks) {
    if (b.empty()) continue;
    int c = next++;
    for (int e : b) {
      require(e >= 0 && e < n, errc::input, "partition block element out of range");
      require(p.class_of[e] == -1, errc::input, "partition blocks overlap");
      p.class_of[e] = c;
    }
  }
  for (int i = 0; i < n; ++i)
    if (p.class_of[i] == -1) p.class_of[i] = next++;
  p.classes = next;
  return p;
}

bool Partition::subset_of(const Partition& other) const {
  // same class here implies same class there; compare via representatives
  std::map<int, int> rep;  // my class -> other's class
  for (int i = 0; i < size(); ++i) {
    auto [it, fresh] = rep.emplace(class_of[i], other.class_of[i]);
    if (!fresh && it->second != other.class_of[i]) return false;
  }
  return true;
}

std::vector<int> Partition::canonical() const {
  std::vector<int> out(class_of.size());
  std::map<int, int> ren;
  int next = 0;
  for (std::size_t i = 0; i < class_of.size(); ++i) {
    auto [it, fresh] = ren.emplace(class_of[i], next);
    if (fresh) ++next;
    out[i] = it->second;
  }
  return out;
}

int Cgs::num_joint() const {
  int n = 1;
  for (std::size_t i = 0; i < agents.size(); ++i) n *= static_cast<int>(actions.size());
  return n;
}

int Cgs::joint_encode(const std::vector<int>& per_agent) const {
  int j = 0;
  for (int i = static_cast<int>(agents.size()) - 1; i >= 0; --i)
    j = j * static_cast<int>(actions.size()) + per_agent[i];
  return j;
}

std::vector<int> Cgs::joint_decode(int joint) const {
  std::vector<int> out(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    out[i] = joint % static_cast<int>(actions.size());
    joint /= static_cast<int>(actions.size());
  }
  return out;
}

int Cgs::obs_index(const std::string& name) const {
  for (std::size_t i = 0; i < obs.size(); ++i)
    if (obs[i].first == name) return static_cast<int>(i);
  return -1;
}

const Partition& Cgs::obs_part(const std::string& name) const {
  int i = obs_index(name);
  require(i >= 0, errc::input, "unknown observation symbol: " + name);
  return obs[i].second;
}

static int find_name(const std::vector<std::string>& v, const std::string& n) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == n) return static_cast<int>(i);
  return -1;
}

int Cgs::atom_id(const std::string& n) const { return find_name(atoms, n); }
int Cgs::action_id(const std::string& n) const { return find_name(actions, n); }
int Cgs::agent_id(const std::string& n) const { return find_name(agents, n); }
int Cgs::position_id(const std::string& n) const { return find_name(positions, n); }

std::vector<int> Cgs::successors(int v) const {
  std::set<int> s(next[v].begin(), next[v].end());
  return std::vector<int>(s.begin(), s.end());
}

void Cgs::ensure_perfect() {
  int i = obs_index("perfect");
  if (i < 0) obs.emplace_back("perfect", Partition::identity(static_cast<int>(positions.size())));
}

int Cks::atom_id(const std::string& n) const { return find_name(atoms, n); }
int Cks::state_id_by_name(const std::string& n) const { return find_name(state_names, n); }

IndexSet full_index_set(int n) {
  IndexSet s(n);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

int DirAlphabet::id_of(const std::vector<int>& t) const {
  auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
  if (it == tuples.end() || *it != t) return -1;
  return static_cast<int>(it - tuples.begin());
}

static std::vector<int> project_tuple(const std::vector<int>& tuple, const IndexSet& from,
                                      const IndexSet& to) {
  std::vector<int> out;
  out.reserve(to.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (j < to.size() && from[i] == to[j]) {
      out.push_back(tuple[i]);
      ++j;
    }
  }
  require(j == to.size(), errc::internal, "projection over non-subset index set");
  return out;
}

DirAlphabet DirAlphabet::for_cks(const Cks& k, const IndexSet& I) {
  require(subset(I, full_index_set(k.components())), errc::input,
          "index set outside the structure's components");
  DirAlphabet a;
  a.indices = I;
  IndexSet full = full_index_set(k.components());
  std::set<std::vector<int>> seen;
  for (const auto& s : k.states) seen.insert(project_tuple(s, full, I));
  a.tuples.assign(seen.begin(), seen.end());
  return a;
}

DirAlphabet DirAlphabet::narrowed(const IndexSet& J) const {
  require(subset(J, indices), errc::input, "narrowing target is not a subset");
  DirAlphabet a;
  a.indices = J;
  std::set<std::vector<int>> seen;
  for (const auto& t : tuples) seen.insert(project_tuple(t, indices, J));
  a.tuples.assign(seen.begin(), seen.end());
  return a;
}

std::vector<int> projection_map(const DirAlphabet& from, const DirAlphabet& to) {
  std::vector<int> m(from.size());
  for (int d = 0; d < from.size(); ++d) {
    int id = to.id_of(project_tuple(from.tuples[d], from.indices, to.indices));
    require(id >= 0, errc::internal, "projected direction missing from target alphabet");
    m[d] = id;
  }
  return m;
}

std::vector<std::string> validate(const RegularTree& t) {
  std::vector<std::string> out;
  if (t.dirs.size() == 0) out.push_back("empty direction alphabet");
  if (t.num_nodes() == 0) out.push_back("tree has no nodes");
  for (int m = 0; m < t.num_nodes(); ++m) {
    if (static_cast<int>(t.succ[m].size()) != t.dirs.size())
      out.push_back("succ not total at node " + std::to_string(m));
    for (int d : t.succ[m])
      if (d < 0 || d >= t.num_nodes())
        out.push_back("succ target out of range at node " + std::to_string(m));
  }
  // reachability from root
  if (t.num_nodes() > 0) {
    std::vector<char> seen(t.num_nodes(), 0);
    std::vector<int> work{t.root};
    seen[t.root] = 1;
    while (!work.empty()) {
      int m = work.back();
      work.pop_back();
      for (int d = 0; d < t.dirs.size() && d < static_cast<int>(t.succ[m].size()); ++d) {
        int n = t.succ[m][d];
        if (n >= 0 && n < t.num_nodes() && !seen[n]) {
          seen[n] = 1;
          work.push_back(n);
        }
      }
    }
    for (int m = 0; m < t.num_nodes(); ++m)
      if (!seen[m]) out.push_back("node unreachable from root: " + std::to_string(m));
  }
  return out;
}

RegularTree widen(const RegularTree& t, const DirAlphabet& target, int root_lift) {
  require(subset(t.dirs.indices, target.indices), errc::input,
          "widening target must refine the source index set");
  std::vector<int> proj = projection_map(target, t.dirs);
  require(root_lift >= 0 && root_lift < target.size(), errc::input, "root lift out of range");
  require(proj[root_lift] == t.root_dir, errc::input,
          "root lift does not project to the input root");
  RegularTree w;
  w.dirs = target;
  w.atoms = t.atoms;
  w.root = t.root;
  w.root_dir = root_lift;
  w.label = t.label;
  w.succ.assign(t.num_nodes(), std::vector<int>(target.size()));
  for (int m = 0; m < t.num_nodes(); ++m)
    for (int d = 0; d < target.size(); ++d) w.succ[m][d] = t.succ[m][proj[d]];
  return w;
}

std::vector<std::string> validate(const Cgs& g) {
  std::vector<std::string> out;
  if (g.actions.empty()) out.push_back("actions must be nonempty");
  if (g.positions.empty()) out.push_back("positions must be nonempty");
  if (g.agents.empty()) out.push_back("agents must be nonempty");
  if (g.initial < 0 || g.initial >= static_cast<int>(g.positions.size()))
    out.push_back("initial position out of range");
  if (g.next.size() != g.positions.size()) out.push_back("transition table size mismatch");
  int nj = g.num_joint();
  for (std::size_t v = 0; v < g.next.size(); ++v) {
    if (static_cast<int>(g.next[v].size()) != nj) {
      out.push_back("transition not total at " + g.positions[v]);
      continue;
    }
    for (int j = 0; j < nj; ++j)
      if (g.next[v][j] < 0 || g.next[v][j] >= static_cast<int>(g.positions.size()))
        out.push_back("transition target out of range at " + g.positions[v]);
  }
  if (g.label.size() != g.positions.size()) out.push_back("labeling size mismatch");
  for (const auto& [name, p] : g.obs) {
    if (p.size() != static_cast<int>(g.positions.size()))
      out.push_back("observation " + name + " does not cover all positions");
    if (name == "perfect" && !p.is_identity())
      out.push_back("reserved observation 'perfect' must be the identity partition");
  }
  return out;
}

std::vector<std::string> validate(const Cks& k) {
  std::vector<std::string> out;
  if (k.locals.empty()) out.push_back("no local-state components");
  std::set<std::string> all_locals;
  for (const auto& comp : k.locals)
    for (const auto& l : comp) {
      if (!all_locals.insert(l).second) out.push_back("local sets not disjoint at " + l);
    }
  if (k.states.empty()) out.push_back("no states");
  for (std::size_t s = 0; s < k.states.size(); ++s) {
    const std::string& nm = s < k.state_names.size() ? k.state_names[s] : std::to_string(s);
    if (k.states[s].size() != k.locals.size()) {
      out.push_back("state tuple arity mismatch at " + nm);
      continue;
    }
    for (std::size_t i = 0; i < k.locals.size(); ++i)
      if (k.states[s][i] < 0 || k.states[s][i] >= static_cast<int>(k.locals[i].size()))
        out.push_back("state component out of local set at " + nm);
  }
  // distinct tuples
  {
    std::set<std::vector<int>> seen;
    for (std::size_t s = 0; s < k.states.size(); ++s)
      if (!seen.insert(k.states[s]).second)
        out.push_back("duplicate state tuple at index " + std::to_string(s));
  }
  if (k.initial < 0 || k.initial >= static_cast<int>(k.states.size()))
    out.push_back("initial state out of range");
  if (k.succ.size() != k.states.size()) out.push_back("relation table size mismatch");
  for (std::size_t s = 0; s < k.succ.size(); ++s) {
    const std::string& nm = s < k.state_names.size() ? k.state_names[s] : std::to_string(s);
    if (k.succ[s].empty()) out.push_back("relation not left-total at " + nm);
    for (int t : k.succ[s])
      if (t < 0 || t >= static_cast<int>(k.states.size()))
        out.push_back("relation target out of range at " + nm);
  }
  return out;
}

std::vector<std::string> validate_play(const Cgs& g, const FinitePlay& p) {
  std::vector<std::string> out;
  if (p.empty()) {
    out.push_back("play is empty");
    return out;
  }
  if (p.front() != g.initial) out.push_back("play does not start at the initial position");
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    auto succ = g.successors(p[i]);
    if (!std::binary_search(succ.begin(), succ.end(), p[i + 1]))
      out.push_back("step " + std::to_string(i) + " not realizable by any joint action");
  }
  return out;
}

std::vector<std::string> validate_lasso(const Cgs& g, const InfinitePlayLasso& p) {
  std::vector<std::string> out;
  if (p.loop.empty()) {
    out.push_back("lasso loop is empty");
    return out;
  }
  FinitePlay flat = p.prefix;
  flat.insert(flat.end(), p.loop.begin(), p.loop.end());
  auto base = validate_play(g, flat);
  out.insert(out.end(), base.begin(), base.end());
  auto succ = g.successors(p.loop.back());
  if (!std::binary_search(succ.begin(), succ.end(), p.loop.front()))
    out.push_back("loop does not close");
  return out;
}

bool play_obs_equiv(const Cgs& g, const std::string& obs, const FinitePlay& a,
                    const FinitePlay& b) {
  const Partition& p = g.obs_part(obs);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!p.same(a[i], b[i])) return false;
  return true;
}

}  // namespace slimc
