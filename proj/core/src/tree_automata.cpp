#include "slimc/tree_automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "safra.hpp"
#include "slimc/parity_games.hpp"

namespace slimc {

// --- transition formulas -------------------------------------------------------

TfP tf_true() {
  static TfP t = [] {
    auto n = std::make_shared<Tf>();
    n->k = Tf::True;
    return n;
  }();
  return t;
}

TfP tf_false() {
  static TfP t = [] {
    auto n = std::make_shared<Tf>();
    n->k = Tf::False;
    return n;
  }();
  return t;
}

TfP tf_atom(int dir, int state) {
  auto n = std::make_shared<Tf>();
  n->k = Tf::Atom;
  n->dir = dir;
  n->state = state;
  return n;
}

TfP tf_and(TfP a, TfP b) {
  if (a->k == Tf::False || b->k == Tf::False) return tf_false();
  if (a->k == Tf::True) return b;
  if (b->k == Tf::True) return a;
  auto n = std::make_shared<Tf>();
  n->k = Tf::And;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

TfP tf_or(TfP a, TfP b) {
  if (a->k == Tf::True || b->k == Tf::True) return tf_true();
  if (a->k == Tf::False) return b;
  if (b->k == Tf::False) return a;
  auto n = std::make_shared<Tf>();
  n->k = Tf::Or;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

TfP tf_and_all(const std::vector<TfP>& xs) {
  TfP out = tf_true();
  for (const auto& x : xs) out = tf_and(out, x);
  return out;
}

TfP tf_or_all(const std::vector<TfP>& xs) {
  TfP out = tf_false();
  for (const auto& x : xs) out = tf_or(out, x);
  return out;
}

TfP tf_dual(const TfP& f) {
  switch (f->k) {
    case Tf::True: return tf_false();
    case Tf::False: return tf_true();
    case Tf::Atom: return f;
    case Tf::And: return tf_or(tf_dual(f->a), tf_dual(f->b));
    case Tf::Or: return tf_and(tf_dual(f->a), tf_dual(f->b));
  }
  return f;
}

int tf_size(const TfP& f) {
  if (!f) return 0;
  return 1 + (f->a ? tf_size(f->a) : 0) + (f->b ? tf_size(f->b) : 0);
}

std::string tf_to_string(const TfP& f) {
  switch (f->k) {
    case Tf::True: return "T";
    case Tf::False: return "F";
    case Tf::Atom: return "[" + std::to_string(f->dir) + "," + std::to_string(f->state) + "]";
    case Tf::And: return "(" + tf_to_string(f->a) + " & " + tf_to_string(f->b) + ")";
    case Tf::Or: return "(" + tf_to_string(f->a) + " | " + tf_to_string(f->b) + ")";
  }
  return "?";
}

std::optional<std::vector<NtaDisjunct>> tf_read_dnf(const TfP& f, int ndirs) {
  switch (f->k) {
    case Tf::True: return std::vector<NtaDisjunct>{NtaDisjunct{std::vector<int>(ndirs, -1)}};
    case Tf::False: return std::vector<NtaDisjunct>{};
    case Tf::Atom: {
      NtaDisjunct d{std::vector<int>(ndirs, -1)};
      d.succ[f->dir] = f->state;
      return std::vector<NtaDisjunct>{d};
    }
    case Tf::Or: {
      auto a = tf_read_dnf(f->a, ndirs);
      if (!a) return std::nullopt;
      auto b = tf_read_dnf(f->b, ndirs);
      if (!b) return std::nullopt;
      a->insert(a->end(), b->begin(), b->end());
      return a;
    }
    case Tf::And: {
      auto a = tf_read_dnf(f->a, ndirs);
      if (!a) return std::nullopt;
      auto b = tf_read_dnf(f->b, ndirs);
      if (!b) return std::nullopt;
      if (a->size() * b->size() > 1024) return std::nullopt;
      std::vector<NtaDisjunct> out;
      for (const auto& da : *a)
        for (const auto& db : *b) {
          NtaDisjunct m = da;
          bool ok = true;
          for (int d = 0; d < ndirs; ++d) {
            if (db.succ[d] < 0) continue;
            if (m.succ[d] >= 0 && m.succ[d] != db.succ[d]) {
              ok = false;
              break;
            }
            m.succ[d] = db.succ[d];
          }
          if (!ok) return std::nullopt;  // two obligations in one direction
          out.push_back(std::move(m));
        }
      return out;
    }
  }
  return std::nullopt;
}

// Eve's structural choice sets: the possible atom sets obtainable by picking
// one branch at every disjunction.
static std::vector<std::vector<std::pair<int, int>>> tf_models(const TfP& f) {
  switch (f->k) {
    case Tf::True: return {{}};
    case Tf::False: return {};
    case Tf::Atom: return {{{f->dir, f->state}}};
    case Tf::Or: {
      auto a = tf_models(f->a), b = tf_models(f->b);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case Tf::And: {
      auto a = tf_models(f->a), b = tf_models(f->b);
      std::vector<std::vector<std::pair<int, int>>> out;
      require(a.size() * b.size() <= 65536, errc::ceiling,
              "transition formula model blowup in simulation");
      for (const auto& ma : a)
        for (const auto& mb : b) {
          auto m = ma;
          m.insert(m.end(), mb.begin(), mb.end());
          std::sort(m.begin(), m.end());
          m.erase(std::unique(m.begin(), m.end()), m.end());
          out.push_back(std::move(m));
        }
      return out;
    }
  }
  return {};
}

// --- base class -----------------------------------------------------------------

TfP Ata::delta(int q, Letter a) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(q, a);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  TfP v = delta_raw(q, a);
  memo_.emplace(key, v);
  return v;
}

Letter Ata::restrict_letter(Letter a, const std::vector<int>& bit_of_child_atom) const {
  Letter out = 0;
  for (std::size_t i = 0; i < bit_of_child_atom.size(); ++i)
    if (bit_of_child_atom[i] >= 0 && ((a >> bit_of_child_atom[i]) & 1)) out |= Letter{1} << i;
  return out;
}

static std::vector<int> atom_bits(const std::vector<std::string>& parent,
                                  const std::vector<std::string>& child) {
  std::vector<int> out(child.size(), -1);
  for (std::size_t i = 0; i < child.size(); ++i)
    for (std::size_t j = 0; j < parent.size(); ++j)
      if (parent[j] == child[i]) {
        out[i] = static_cast<int>(j);
        break;
      }
  return out;
}

static std::vector<std::string> atom_union(const std::vector<std::string>& a,
                                           const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& x : b)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

// --- explicit / constant automata ---------------------------------------------------

namespace {

class FnAta : public Ata {
 public:
  int n = 1;
  int init = 0;
  std::vector<int> colors;
  std::function<TfP(int, Letter)> fn;

  int num_states() const override { return n; }
  int initial_state() const override { return init; }
  int color(int q) const override { return colors[q]; }

 protected:
  TfP delta_raw(int q, Letter a) const override { return fn(q, a); }
};

}  // namespace

AtaP make_explicit_ata(DirAlphabet dirs, std::vector<std::string> atoms, int initial,
                       std::vector<int> colors, std::function<TfP(int, Letter)> delta) {
  auto a = std::make_shared<FnAta>();
  a->dirs = std::move(dirs);
  a->atoms = std::move(atoms);
  a->init = initial;
  a->n = static_cast<int>(colors.size());
  a->colors = std::move(colors);
  a->fn = std::move(delta);
  a->construction = "explicit";
  return a;
}

AtaP make_const_ata(DirAlphabet dirs, std::vector<std::string> atoms, bool accept) {
  return make_explicit_ata(std::move(dirs), std::move(atoms), 0, {accept ? 0 : 1},
                           [accept](int, Letter) { return accept ? tf_true() : tf_false(); });
}

// --- dualization ------------------------------------------------------------------

namespace {

class DualAta : public Ata {
 public:
  AtaP child;
  int num_states() const override { return child->num_states(); }
  int initial_state() const override { return child->initial_state(); }
  int color(int q) const override { return child->color(q) + 1; }

 protected:
  TfP delta_raw(int q, Letter a) const override { return tf_dual(child->delta(q, a)); }
};

}  // namespace

AtaP dualize(const AtaP& a) {
  if (auto d = std::dynamic_pointer_cast<const DualAta>(a)) return d->child;
  auto out = std::make_shared<DualAta>();
  out->child = a;
  out->atoms = a->atoms;
  out->dirs = a->dirs;
  out->construction = "dualize";
  return out;
}

// --- narrowing --------------------------------------------------------------------

namespace {

class NarrowAta : public Ata {
 public:
  AtaP child;
  std::vector<int> dirmap;  // child direction -> my direction

  int num_states() const override { return child->num_states(); }
  int initial_state() const override { return child->initial_state(); }
  int color(int q) const override { return child->color(q); }

 protected:
  TfP subst(const TfP& f) const {
    switch (f->k) {
      case Tf::True:
      case Tf::False: return f;
      case Tf::Atom: return tf_atom(dirmap[f->dir], f->state);
      case Tf::And: return tf_and(subst(f->a), subst(f->b));
      case Tf::Or: return tf_or(subst(f->a), subst(f->b));
    }
    return f;
  }
  TfP delta_raw(int q, Letter a) const override { return subst(child->delta(q, a)); }
};

}  // namespace

AtaP narrow(const AtaP& a, const IndexSet& J) {
  require(subset(J, a->dirs.indices), errc::input,
          "narrowing target must be a subset of the direction index set");
  if (J == a->dirs.indices) return a;
  auto out = std::make_shared<NarrowAta>();
  out->child = a;
  out->atoms = a->atoms;
  out->dirs = a->dirs.narrowed(J);
  out->dirmap = projection_map(a->dirs, out->dirs);
  out->construction = "narrow";
  // An injective projection keeps the liberal DNF shape intact.
  bool injective = true;
  std::set<int> seen;
  for (int d : out->dirmap)
    if (!seen.insert(d).second) injective = false;
  out->nd_certified = injective && a->nd_certified;
  return out;
}

// --- binary junctions ----------------------------------------------------------------

namespace {

struct PairRegistry {
  mutable std::map<std::pair<int, long long>, int> ids;
  mutable std::vector<std::pair<int, long long>> back;
  mutable std::mutex mu;

  int intern(int part, long long inner, const Limits* limits) const {
    std::lock_guard<std::mutex> lock(mu);
    auto [it, fresh] = ids.emplace(std::make_pair(part, inner), static_cast<int>(back.size()));
    if (fresh) {
      back.emplace_back(part, inner);
      if (limits) limits->charge_states();
    }
    return it->second;
  }
  std::pair<int, long long> lookup(int id) const {
    std::lock_guard<std::mutex> lock(mu);
    return back[id];
  }
  int size() const {
    std::lock_guard<std::mutex> lock(mu);
    return static_cast<int>(back.size());
  }
};

class JunctionAta : public Ata {
 public:
  bool is_or = true;
  AtaP ca, cb;
  std::vector<int> bits_a, bits_b;
  PairRegistry reg;
  const Limits* limits = nullptr;

  void init_reg() { reg.intern(0, 0, limits); }

  int num_states() const override { return reg.size(); }
  int initial_state() const override { return 0; }
  int color(int q) const override {
    auto [part, inner] = reg.lookup(q);
    if (part == 0) return 0;
    return part == 1 ? ca->color(static_cast<int>(inner)) : cb->color(static_cast<int>(inner));
  }

 protected:
  TfP remap(const TfP& f, int part) const {
    switch (f->k) {
      case Tf::True:
      case Tf::False: return f;
      case Tf::Atom: return tf_atom(f->dir, reg.intern(part, f->state, limits));
      case Tf::And: return tf_and(remap(f->a, part), remap(f->b, part));
      case Tf::Or: return tf_or(remap(f->a, part), remap(f->b, part));
    }
    return f;
  }

  TfP delta_raw(int q, Letter a) const override {
    auto [part, inner] = reg.lookup(q);
    if (part == 1) return remap(ca->delta(static_cast<int>(inner), restrict_letter(a, bits_a)), 1);
    if (part == 2) return remap(cb->delta(static_cast<int>(inner), restrict_letter(a, bits_b)), 2);
    TfP fa = remap(ca->delta(ca->initial_state(), restrict_letter(a, bits_a)), 1);
    TfP fb = remap(cb->delta(cb->initial_state(), restrict_letter(a, bits_b)), 2);
    return is_or ? tf_or(fa, fb) : tf_and(fa, fb);
  }
};

AtaP make_junction(const AtaP& a, const AtaP& b, bool is_or) {
  require(a->dirs == b->dirs, errc::internal, "junction over distinct direction alphabets");
  auto out = std::make_shared<JunctionAta>();
  out->is_or = is_or;
  out->ca = a;
  out->cb = b;
  out->atoms = atom_union(a->atoms, b->atoms);
  out->dirs = a->dirs;
  out->bits_a = atom_bits(out->atoms, a->atoms);
  out->bits_b = atom_bits(out->atoms, b->atoms);
  out->construction = is_or ? "or" : "and";
  out->nd_certified = is_or && a->nd_certified && b->nd_certified;
  out->init_reg();
  return out;
}

}  // namespace

AtaP ata_or(const AtaP& a, const AtaP& b) { return make_junction(a, b, true); }
AtaP ata_and(const AtaP& a, const AtaP& b) { return make_junction(a, b, false); }

// --- deterministic safety intersection ---------------------------------------------

namespace {

class DetSafetyAta : public Ata {
 public:
  AtaP body;
  std::function<bool(Letter)> constraint;
  PairRegistry reg;  // part 0 = pad state, part 1 = body states
  const Limits* limits = nullptr;

  void init_reg() {
    reg.intern(0, 0, limits);
    init_ = reg.intern(1, body->initial_state(), limits);
  }

  int num_states() const override { return reg.size(); }
  int initial_state() const override { return init_; }
  int color(int q) const override {
    auto [part, inner] = reg.lookup(q);
    return part == 0 ? 0 : body->color(static_cast<int>(inner));
  }

 protected:
  TfP delta_raw(int q, Letter a) const override {
    if (!constraint(a)) return tf_false();
    auto [part, inner] = reg.lookup(q);
    int ndirs = dirs.size();
    if (part == 0) {
      std::vector<TfP> alls;
      for (int d = 0; d < ndirs; ++d) alls.push_back(tf_atom(d, 0));
      return tf_and_all(alls);
    }
    TfP f = body->delta(static_cast<int>(inner), a);
    auto dnf = tf_read_dnf(f, ndirs);
    require(dnf.has_value(), errc::internal,
            "deterministic intersection over a non-nondeterministic body");
    std::vector<TfP> disjuncts;
    for (const auto& d : *dnf) {
      std::vector<TfP> conj;
      for (int x = 0; x < ndirs; ++x) {
        int t = d.succ[x];
        conj.push_back(tf_atom(x, t < 0 ? 0 : reg.intern(1, t, limits)));
      }
      disjuncts.push_back(tf_and_all(conj));
    }
    return tf_or_all(disjuncts);
  }

 private:
  int init_ = 1;
};

}  // namespace

AtaP det_safety_intersect(const AtaP& body, std::function<bool(Letter)> constraint,
                          const std::string& tag) {
  require(body->nd_certified, errc::internal,
          "deterministic safety intersection requires a certified body");
  auto out = std::make_shared<DetSafetyAta>();
  out->body = body;
  out->constraint = std::move(constraint);
  out->atoms = body->atoms;
  out->dirs = body->dirs;
  out->construction = "det-intersect:" + tag;
  out->nd_certified = true;
  out->init_reg();
  return out;
}

// --- simulation ------------------------------------------------------------------------

namespace {

class SimulatedAta : public Ata {
 public:
  AtaP in;
  const Limits* limits = nullptr;

  // bad-trace NBW states: (ata state, committed odd colour or -1)
  mutable std::map<std::pair<int, int>, int> bad_ids;
  mutable std::vector<std::pair<int, int>> bad_back;
  mutable std::mutex bad_mu;
  std::unique_ptr<detail::TraceMonitor> monitor;

  // NTA states: (slice, monitor state, entry colour)
  mutable std::map<std::tuple<std::vector<int>, int, int>, int> ids;
  mutable std::vector<std::tuple<std::vector<int>, int, int>> back;
  mutable std::mutex mu2;

  int intern_bad(int q, int commit) const {
    std::lock_guard<std::mutex> lock(bad_mu);
    auto [it, fresh] =
        bad_ids.emplace(std::make_pair(q, commit), static_cast<int>(bad_back.size()));
    if (fresh) bad_back.emplace_back(q, commit);
    return it->second;
  }

  void setup() {
    int b0 = intern_bad(in->initial_state(), -1);
    auto succ = [this](int b, const detail::EdgeSet& edges, std::vector<int>& out) {
      auto [q, commit] = [this, b] {
        std::lock_guard<std::mutex> lock(bad_mu);
        return bad_back[b];
      }();
      for (const auto& [src, dst] : edges) {
        if (src != q) continue;
        int c = in->color(dst);
        if (commit < 0) {
          out.push_back(intern_bad(dst, -1));
          if (c % 2 == 1) out.push_back(intern_bad(dst, c));
        } else if (c >= commit) {
          out.push_back(intern_bad(dst, commit));
        }
      }
    };
    auto acc = [this](int b) {
      auto [q, commit] = [this, b] {
        std::lock_guard<std::mutex> lock(bad_mu);
        return bad_back[b];
      }();
      return commit >= 0 && in->color(q) == commit;
    };
    monitor = std::make_unique<detail::TraceMonitor>(b0, succ, acc);
    intern({in->initial_state()}, monitor->initial(), 1);
  }

  int intern(std::vector<int> slice, int mon, int col) const {
    std::lock_guard<std::mutex> lock(mu2);
    auto key = std::make_tuple(std::move(slice), mon, col);
    auto [it, fresh] = ids.emplace(key, static_cast<int>(back.size()));
    if (fresh) {
      back.push_back(std::get<0>(key).empty() ? key : key);
      back.back() = key;
      if (limits) limits->charge_states();
    }
    return it->second;
  }

  std::tuple<std::vector<int>, int, int> lookup(int id) const {
    std::lock_guard<std::mutex> lock(mu2);
    return back[id];
  }

  int num_states() const override {
    std::lock_guard<std::mutex> lock(mu2);
    return static_cast<int>(back.size());
  }
  int initial_state() const override { return 0; }
  int color(int q) const override {
    auto [slice, mon, col] = lookup(q);
    return slice.empty() ? 0 : col;
  }

 protected:
  TfP delta_raw(int q, Letter a) const override {
    auto [slice, mon, col] = lookup(q);
    int ndirs = dirs.size();
    if (slice.empty()) {
      std::vector<TfP> conj;
      for (int d = 0; d < ndirs; ++d) conj.push_back(tf_atom(d, q));
      return tf_and_all(conj);
    }
    // per slice member, Eve's possible choice sets
    std::vector<std::vector<std::vector<std::pair<int, int>>>> models;
    long long combos = 1;
    for (int s : slice) {
      models.push_back(tf_models(in->delta(s, a)));
      if (models.back().empty()) return tf_false();
      combos *= static_cast<long long>(models.back().size());
      require(combos <= 65536, errc::ceiling, "choice blowup in simulation transition");
    }
    std::set<std::vector<int>> seen;
    std::vector<TfP> disjuncts;
    std::vector<std::size_t> pick(slice.size(), 0);
    for (;;) {
      // assemble slices and edge relations per direction
      std::vector<std::set<int>> slice_next(ndirs);
      std::vector<detail::EdgeSet> edges(ndirs);
      for (std::size_t i = 0; i < slice.size(); ++i) {
        for (const auto& [d, t] : models[i][pick[i]]) {
          slice_next[d].insert(t);
          edges[d].emplace_back(slice[i], t);
        }
      }
      std::vector<int> targets(ndirs);
      for (int d = 0; d < ndirs; ++d) {
        std::sort(edges[d].begin(), edges[d].end());
        edges[d].erase(std::unique(edges[d].begin(), edges[d].end()), edges[d].end());
        auto [mon2, c] = monitor->step(mon, edges[d]);
        std::vector<int> sl(slice_next[d].begin(), slice_next[d].end());
        targets[d] = intern(std::move(sl), mon2, c + 1);
      }
      if (seen.insert(targets).second) {
        std::vector<TfP> conj;
        for (int d = 0; d < ndirs; ++d) conj.push_back(tf_atom(d, targets[d]));
        disjuncts.push_back(tf_and_all(conj));
      }
      // next combination
      std::size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < models[i].size()) break;
        pick[i] = 0;
      }
      if (i == pick.size()) break;
    }
    return tf_or_all(disjuncts);
  }
};

}  // namespace

std::optional<NtaWitness> try_certify(const AtaP& a, int max_atoms, long long state_budget) {
  if (a->nd_certified) return NtaWitness{a};
  if (static_cast<int>(a->atoms.size()) > max_atoms) return std::nullopt;
  Letter letters = Letter{1} << a->atoms.size();
  std::set<int> seen{a->initial_state()};
  std::deque<int> work{a->initial_state()};
  long long visited = 0;
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    if (++visited > state_budget) return std::nullopt;
    for (Letter l = 0; l < letters; ++l) {
      TfP f;
      try {
        f = a->delta(q, l);
      } catch (const error&) {
        return std::nullopt;
      }
      auto dnf = tf_read_dnf(f, a->dirs.size());
      if (!dnf) return std::nullopt;
      for (const auto& d : *dnf)
        for (int t : d.succ)
          if (t >= 0 && seen.insert(t).second) work.push_back(t);
    }
  }
  a->nd_certified = true;
  return NtaWitness{a};
}

NtaWitness simulate(const AtaP& a, const Limits* limits) {
  if (a->nd_certified) return NtaWitness{a};
  if (auto w = try_certify(a)) return *w;
  auto out = std::make_shared<SimulatedAta>();
  out->in = a;
  out->limits = limits;
  out->atoms = a->atoms;
  out->dirs = a->dirs;
  out->construction = "simulate";
  out->nd_certified = true;
  out->setup();
  return NtaWitness{out};
}

// --- projection -------------------------------------------------------------------------

namespace {

class ProjectAta : public Ata {
 public:
  AtaP child;
  int p_bit = 0;                 // bit of the projected atom in the child
  std::vector<int> child_bits;   // child atom -> my bit (p maps to -1)

  int num_states() const override { return child->num_states(); }
  int initial_state() const override { return child->initial_state(); }
  int color(int q) const override { return child->color(q); }

 protected:
  TfP checked(TfP f) const {
    require(tf_read_dnf(f, dirs.size()).has_value(), errc::internal,
            "projection applied to a non-nondeterministic transition");
    return f;
  }
  TfP delta_raw(int q, Letter a) const override {
    Letter base = 0;
    for (std::size_t i = 0; i < child_bits.size(); ++i)
      if (child_bits[i] >= 0 && ((a >> child_bits[i]) & 1)) base |= Letter{1} << i;
    TfP with = checked(child->delta(q, base | (Letter{1} << p_bit)));
    TfP without = checked(child->delta(q, base & ~(Letter{1} << p_bit)));
    return tf_or(with, without);
  }
};

}  // namespace

NtaWitness project(const NtaWitness& n, const std::string& atom) {
  const AtaP& c = n.ata;
  int pb = -1;
  for (std::size_t i = 0; i < c->atoms.size(); ++i)
    if (c->atoms[i] == atom) pb = static_cast<int>(i);
  if (pb < 0) return n;  // atom absent: projection is the identity
  auto out = std::make_shared<ProjectAta>();
  out->child = c;
  out->p_bit = pb;
  for (std::size_t i = 0; i < c->atoms.size(); ++i)
    if (static_cast<int>(i) != pb) out->atoms.push_back(c->atoms[i]);
  out->child_bits = atom_bits(out->atoms, c->atoms);
  out->dirs = c->dirs;
  out->construction = "project";
  out->nd_certified = true;
  return NtaWitness{out};
}

// --- acceptance game ---------------------------------------------------------------------

namespace {

struct GameBuilder {
  const Ata& a;
  const RegularTree& t;
  const Limits* limits;

  std::vector<Letter> node_letter;      // per tree node
  std::vector<std::vector<TfP>> delta_cache;  // [node][state] formula at that node

  std::map<std::tuple<int, int, const Tf*, int>, int> ids;
  std::vector<TfP> keepalive;
  ParityGame game;
  std::vector<int> pos_color;

  GameBuilder(const Ata& aa, const RegularTree& tt, const Limits* ll) : a(aa), t(tt), limits(ll) {
    // letter per node; unknown labeled atoms are an error
    std::vector<int> tree_bit(t.atoms.size(), -1);
    for (std::size_t i = 0; i < t.atoms.size(); ++i)
      for (std::size_t j = 0; j < a.atoms.size(); ++j)
        if (a.atoms[j] == t.atoms[i]) tree_bit[i] = static_cast<int>(j);
    node_letter.assign(t.num_nodes(), 0);
    for (int m = 0; m < t.num_nodes(); ++m)
      for (int at : t.label[m]) {
        require(tree_bit[at] >= 0, errc::input,
                "tree atom '" + t.atoms[at] + "' unknown to the automaton");
        node_letter[m] |= Letter{1} << tree_bit[at];
      }
    delta_cache.assign(t.num_nodes(), {});
  }

  TfP delta_at(int node, int q) {
    auto& row = delta_cache[node];
    if (static_cast<int>(row.size()) <= q) row.resize(a.num_states() > q ? a.num_states() : q + 1);
    if (!row[q]) row[q] = a.delta(q, node_letter[node]);
    return row[q];
  }

  int intern(int node, int q, const TfP& f) {
    auto key = std::make_tuple(node, q, f.get(), 0);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(game.owner.size());
    ids.emplace(key, id);
    keepalive.push_back(f);
    game.owner.push_back(0);
    game.moves.emplace_back();
    pos_color.push_back(0);
    if (limits) limits->charge_game();
    work.emplace_back(node, q, f, id);
    return id;
  }

  std::deque<std::tuple<int, int, TfP, int>> work;

  void build(int start_node, int start_state) {
    int init = intern(start_node, start_state, delta_at(start_node, start_state));
    game.initial = init;
    while (!work.empty()) {
      auto [node, q, f, id] = work.front();
      work.pop_front();
      switch (f->k) {
        case Tf::True:
          game.owner[id] = 1;
          pos_color[id] = 0;
          game.moves[id].push_back(id);
          break;
        case Tf::False:
          game.owner[id] = 0;
          pos_color[id] = 1;
          game.moves[id].push_back(id);
          break;
        case Tf::Or:
        case Tf::And: {
          game.owner[id] = f->k == Tf::Or ? 0 : 1;
          pos_color[id] = a.color(q);
          game.moves[id].push_back(intern(node, q, f->a));
          game.moves[id].push_back(intern(node, q, f->b));
          break;
        }
        case Tf::Atom: {
          game.owner[id] = 0;
          pos_color[id] = a.color(q);
          int node2 = t.succ[node][f->dir];
          int q2 = f->state;
          game.moves[id].push_back(intern(node2, q2, delta_at(node2, q2)));
          break;
        }
      }
    }
    game.color = compress_colors(pos_color);
  }
};

}  // namespace

bool accepts(const AtaP& a, const RegularTree& t, int node, const Limits* limits,
             long long* game_positions) {
  require(a->dirs.size() == t.dirs.size(), errc::input,
          "direction alphabets of tree and automaton disagree");
  GameBuilder gb(*a, t, limits);
  gb.build(node < 0 ? t.root : node, a->initial_state());
  if (game_positions) *game_positions = gb.game.size();
  GameSolution sol = solve_zielonka(gb.game);
  return sol.winner[gb.game.initial] == 0;
}

// --- projection oracle --------------------------------------------------------------------

bool accepts_exists_labeling(const NtaWitness& n, const RegularTree& t, const std::string& atom,
                             int node, const Limits* limits) {
  const AtaP& a = n.ata;
  int pb = -1;
  for (std::size_t i = 0; i < a->atoms.size(); ++i)
    if (a->atoms[i] == atom) pb = static_cast<int>(i);
  require(pb >= 0, errc::input, "labeling atom unknown to the automaton");

  std::vector<int> tree_bit(t.atoms.size(), -1);
  for (std::size_t i = 0; i < t.atoms.size(); ++i)
    for (std::size_t j = 0; j < a->atoms.size(); ++j)
      if (a->atoms[j] == t.atoms[i]) tree_bit[i] = static_cast<int>(j);
  std::vector<Letter> base(t.num_nodes(), 0);
  for (int m = 0; m < t.num_nodes(); ++m)
    for (int at : t.label[m]) {
      require(tree_bit[at] >= 0, errc::input, "tree atom unknown to the automaton");
      base[m] |= Letter{1} << tree_bit[at];
    }

  ParityGame game;
  std::vector<int> colors;
  std::map<std::tuple<int, int, const Tf*, int>, int> ids;
  std::vector<TfP> keepalive;
  std::deque<std::tuple<int, int, TfP, int, int>> work;  // node,q,f,id,phase

  auto intern = [&](int nd, int q, const TfP& f, int phase) {
    auto key = std::make_tuple(nd, q, f.get(), phase);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(game.owner.size());
    ids.emplace(key, id);
    keepalive.push_back(f);
    game.owner.push_back(0);
    game.moves.emplace_back();
    colors.push_back(0);
    if (limits) limits->charge_game();
    work.emplace_back(nd, q, f, id, phase);
    return id;
  };

  int start = node < 0 ? t.root : node;
  game.initial = intern(start, a->initial_state(), nullptr, 1);
  while (!work.empty()) {
    auto [nd, q, f, id, phase] = work.front();
    work.pop_front();
    if (phase == 1) {
      // Eve chooses the label bit of `atom` at this node
      game.owner[id] = 0;
      colors[id] = a->color(q);
      for (int b = 0; b < 2; ++b) {
        Letter l = b ? (base[nd] | (Letter{1} << pb)) : (base[nd] & ~(Letter{1} << pb));
        TfP g = a->delta(q, l);
        game.moves[id].push_back(intern(nd, q, g, 0));
      }
      continue;
    }
    switch (f->k) {
      case Tf::True:
        game.owner[id] = 1;
        colors[id] = 0;
        game.moves[id].push_back(id);
        break;
      case Tf::False:
        game.owner[id] = 0;
        colors[id] = 1;
        game.moves[id].push_back(id);
        break;
      case Tf::Or:
      case Tf::And:
        game.owner[id] = f->k == Tf::Or ? 0 : 1;
        colors[id] = a->color(q);
        game.moves[id].push_back(intern(nd, q, f->a, 0));
        game.moves[id].push_back(intern(nd, q, f->b, 0));
        break;
      case Tf::Atom:
        game.owner[id] = 0;
        colors[id] = a->color(q);
        game.moves[id].push_back(intern(t.succ[nd][f->dir], f->state, nullptr, 1));
        break;
    }
  }
  game.color = compress_colors(colors);
  GameSolution sol = solve_zielonka(game);
  return sol.winner[game.initial] == 0;
}

// --- misc -------------------------------------------------------------------------------

std::string dump_ata(const AtaP& a, int max_states) {
  std::ostringstream o;
  o << "ATA (" << a->construction << ")\n";
  o << "directions:";
  for (const auto& t : a->dirs.tuples) {
    o << " (";
    for (std::size_t i = 0; i < t.size(); ++i) o << (i ? "," : "") << t[i];
    o << ")";
  }
  o << "\natoms:";
  for (const auto& p : a->atoms) o << " " << p;
  o << "\ninitial: " << a->initial_state() << "\n";
  int n = std::min(a->num_states(), max_states);
  Letter letters = a->atoms.size() <= 8 ? (Letter{1} << a->atoms.size()) : 1;
  for (int q = 0; q < n; ++q) {
    o << "state " << q << " colour " << a->color(q) << "\n";
    for (Letter l = 0; l < letters; ++l)
      o << "  [" << l << "] " << tf_to_string(a->delta(q, l)) << "\n";
  }
  return o.str();
}

DirAlphabet synthetic_alphabet(const std::vector<int>& component_sizes) {
  DirAlphabet d;
  for (std::size_t i = 0; i < component_sizes.size(); ++i)
    d.indices.push_back(static_cast<int>(i) + 1);
  std::vector<std::vector<int>> tuples{{}};
  for (int sz : component_sizes) {
    std::vector<std::vector<int>> next;
    for (const auto& t : tuples)
      for (int v = 0; v < sz; ++v) {
        auto t2 = t;
        t2.push_back(v);
        next.push_back(std::move(t2));
      }
    tuples = std::move(next);
  }
  std::sort(tuples.begin(), tuples.end());
  d.tuples = std::move(tuples);
  return d;
}

}  // namespace slimc
