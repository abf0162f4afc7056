#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slimc/support.hpp"

namespace slimc {

// Equivalence relation on {0..n-1}, stored as a class id per element.
struct Partition {
  std::vector<int> class_of;
  int classes = 0;

  int size() const { return static_cast<int>(class_of.size()); }
  bool same(int a, int b) const { return class_of[a] == class_of[b]; }

  static Partition identity(int n);
  static Partition blind(int n);
  // From explicit blocks; elements not mentioned become singletons.
  static Partition from_blocks(int n, const std::vector<std::vector<int>>& blocks);

  // this ⊆ other as relations: every pair equivalent here is equivalent there.
  bool subset_of(const Partition& other) const;
  bool is_identity() const { return classes == size(); }
  bool operator==(const Partition& o) const { return canonical() == o.canonical(); }
  std::vector<int> canonical() const;  // class ids renumbered by first occurrence
};

// Concurrent game structure with imperfect information.
struct Cgs {
  std::vector<std::string> atoms;
  std::vector<std::string> agents;
  std::vector<std::string> actions;
  std::vector<std::string> positions;
  int initial = 0;
  // next[v][joint] with joint a mixed-radix encoding of one action per agent
  // (agent 0 least significant digit).
  std::vector<std::vector<int>> next;
  std::vector<std::set<int>> label;  // atom ids per position
  // Observation symbols, in declaration order. "perfect" is reserved and always
  // present, interpreted as the identity partition.
  std::vector<std::pair<std::string, Partition>> obs;

  int num_joint() const;
  int joint_encode(const std::vector<int>& per_agent) const;
  std::vector<int> joint_decode(int joint) const;
  int obs_index(const std::string& name) const;  // 0-based, -1 if absent
  const Partition& obs_part(const std::string& name) const;
  int atom_id(const std::string& name) const;   // -1 if absent
  int action_id(const std::string& name) const; // -1 if absent
  int agent_id(const std::string& name) const;  // -1 if absent
  int position_id(const std::string& name) const;
  std::vector<int> successors(int v) const;  // distinct, sorted

  // Adds the reserved "perfect" observation if missing.
  void ensure_perfect();
};

// Compound Kripke structure: states are tuples of local states.
struct Cks {
  std::vector<std::string> atoms;
  std::vector<std::vector<std::string>> locals;  // n components
  std::vector<std::string> state_names;
  std::vector<std::vector<int>> states;  // tuple of per-component local indices
  std::vector<std::vector<int>> succ;    // sorted adjacency
  std::vector<std::set<int>> label;
  int initial = 0;

  int components() const { return static_cast<int>(locals.size()); }
  int atom_id(const std::string& name) const;
  int state_id_by_name(const std::string& name) const;
};

// Sorted 1-based component indices, e.g. {1,3} ⊆ [n].
using IndexSet = std::vector<int>;

IndexSet full_index_set(int n);
IndexSet intersect(const IndexSet& a, const IndexSet& b);
bool subset(const IndexSet& a, const IndexSet& b);

// Direction alphabet X_I: tuples over a component index set. X_∅ is {blank},
// represented by a single empty tuple. Tuples are kept sorted so alphabets
// derived from the same CKS are identical objects.
struct DirAlphabet {
  IndexSet indices;
  std::vector<std::vector<int>> tuples;

  int size() const { return static_cast<int>(tuples.size()); }
  int id_of(const std::vector<int>& t) const;
  bool operator==(const DirAlphabet& o) const {
    return indices == o.indices && tuples == o.tuples;
  }

  // S_I for a CKS: projections of its reachable state tuples.
  static DirAlphabet for_cks(const Cks& k, const IndexSet& I);
  // Alphabet obtained by projecting every tuple onto J ⊆ indices.
  DirAlphabet narrowed(const IndexSet& J) const;
};

// proj of a tuple of alphabet `from` onto `to` (to.indices ⊆ from.indices).
// Returns per-direction ids in `to`.
std::vector<int> projection_map(const DirAlphabet& from, const DirAlphabet& to);

// Finite pointed structure whose unfolding is a complete labeled X-tree.
struct RegularTree {
  DirAlphabet dirs;
  std::vector<std::string> atoms;
  int root = 0;
  int root_dir = 0;  // the direction naming the root word
  std::vector<std::vector<int>> succ;  // [node][dir], total
  std::vector<std::set<int>> label;

  int num_nodes() const { return static_cast<int>(succ.size()); }
};

std::vector<std::string> validate(const RegularTree& t);

// Widening to a finer alphabet: node labels at u equal the label of proj_J(u).
// root_lift must project onto t.root_dir.
RegularTree widen(const RegularTree& t, const DirAlphabet& target, int root_lift);

using FinitePlay = std::vector<int>;  // nonempty, starts at initial

struct InfinitePlayLasso {
  std::vector<int> prefix;  // may be empty
  std::vector<int> loop;    // nonempty
};

std::vector<std::string> validate(const Cgs& g);
std::vector<std::string> validate(const Cks& k);
std::vector<std::string> validate_play(const Cgs& g, const FinitePlay& p);
std::vector<std::string> validate_lasso(const Cgs& g, const InfinitePlayLasso& p);

// Synchronous perfect recall: equal length and pointwise o-equivalent.
bool play_obs_equiv(const Cgs& g, const std::string& obs, const FinitePlay& a,
                    const FinitePlay& b);

}  // namespace slimc
