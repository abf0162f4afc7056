#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "slimc/structures.hpp"
#include "slimc/support.hpp"

namespace slimc {

// Positive boolean transition formula over (direction, state) atoms.
struct Tf;
using TfP = std::shared_ptr<const Tf>;

struct Tf {
  enum K { True, False, Atom, And, Or } k;
  int dir = -1, state = -1;
  TfP a, b;
};

TfP tf_true();
TfP tf_false();
TfP tf_atom(int dir, int state);
TfP tf_and(TfP a, TfP b);
TfP tf_or(TfP a, TfP b);
TfP tf_and_all(const std::vector<TfP>& xs);
TfP tf_or_all(const std::vector<TfP>& xs);
TfP tf_dual(const TfP& f);
int tf_size(const TfP& f);
std::string tf_to_string(const TfP& f);

// Liberal disjunctive normal form: one disjunct per entry, at most one state
// per direction; -1 means the subtree in that direction is unconstrained.
// Returns nothing if the formula is not syntactically of that shape.
struct NtaDisjunct {
  std::vector<int> succ;  // per direction, state or -1
};
std::optional<std::vector<NtaDisjunct>> tf_read_dnf(const TfP& f, int ndirs);

// Alternating parity tree automaton over complete trees; min-even acceptance.
// Transition functions are evaluated lazily per letter and memoized; state
// spaces of derived automata may grow as transitions are materialized.
class Ata : public std::enable_shared_from_this<Ata> {
 public:
  std::vector<std::string> atoms;  // ≤ 64 read atoms
  DirAlphabet dirs;
  std::string construction = "explicit";
  mutable bool nd_certified = false;

  virtual ~Ata() = default;
  virtual int num_states() const = 0;
  virtual int initial_state() const = 0;
  virtual int color(int q) const = 0;

  TfP delta(int q, Letter a) const;  // memoized

  Letter restrict_letter(Letter a, const std::vector<int>& bit_of_child_atom) const;

 protected:
  virtual TfP delta_raw(int q, Letter a) const = 0;

 private:
  mutable std::map<std::pair<int, Letter>, TfP> memo_;
  mutable std::mutex mu_;
};

using AtaP = std::shared_ptr<const Ata>;

// Certified nondeterministic automaton: every materialized transition value
// must read off as a liberal DNF (checked on evaluation, not assumed).
struct NtaWitness {
  AtaP ata;
};

// Fully tabulated automaton, mainly for tests and tiny fixtures.
AtaP make_explicit_ata(DirAlphabet dirs, std::vector<std::string> atoms, int initial,
                       std::vector<int> colors,
                       std::function<TfP(int state, Letter letter)> delta);

// An always-accepting / always-rejecting single-state automaton.
AtaP make_const_ata(DirAlphabet dirs, std::vector<std::string> atoms, bool accept);

// Dualization: ∧↔∨, ⊤↔⊥, every colour +1. Complements the language.
AtaP dualize(const AtaP& a);

// Narrowing to a coarser alphabet X_J, J ⊆ I: accepts (t,u) iff `a` accepts
// the widening of t pointed at any lift of u. Linear; introduces alternation.
AtaP narrow(const AtaP& a, const IndexSet& J);

// Alternation removal. Language-preserving; fast path returns certified
// nondeterministic inputs unchanged.
NtaWitness simulate(const AtaP& a, const Limits* limits = nullptr);

// Existential projection of a quantified atom over a nondeterministic
// automaton.
NtaWitness project(const NtaWitness& n, const std::string& atom);

// Eager certification by exploring all letters (2^atoms) from the initial
// state; gives up (nullopt) beyond the exploration budget.
std::optional<NtaWitness> try_certify(const AtaP& a, int max_atoms = 12,
                                      long long state_budget = 50000);

// Union / intersection with a fresh initial state; both children must use the
// same direction alphabet.
AtaP ata_or(const AtaP& a, const AtaP& b);
AtaP ata_and(const AtaP& a, const AtaP& b);

// Intersection with a one-state deterministic safety automaton that checks a
// letter constraint at every node; keeps nondeterminism (the body must be
// certified). Used for the strategy-coding constraint of the reduction.
AtaP det_safety_intersect(const AtaP& body, std::function<bool(Letter)> constraint,
                          const std::string& tag);

// Acceptance of a pointed regular tree via the finite acceptance parity game.
// node = -1 means the root. Colours are compressed before solving.
bool accepts(const AtaP& a, const RegularTree& t, int node = -1, const Limits* limits = nullptr,
             long long* game_positions = nullptr);

// Test oracle for projection: does some labeling of `atom` (chosen per tree
// node by Eve inside the acceptance game) make the nondeterministic automaton
// accept? Exact for certified automata on regular inputs.
bool accepts_exists_labeling(const NtaWitness& n, const RegularTree& t, const std::string& atom,
                             int node = -1, const Limits* limits = nullptr);

// Debug dump of states, colours and per-letter transition formulas.
std::string dump_ata(const AtaP& a, int max_states = 32);

// Full product alphabet with component sizes (1-based synthetic indices), for
// tests: product({2,3}) has 6 tuple directions.
DirAlphabet synthetic_alphabet(const std::vector<int>& component_sizes);

}  // namespace slimc
