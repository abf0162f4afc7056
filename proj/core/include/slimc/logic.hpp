#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slimc/structures.hpp"

namespace slimc {

// One node type serves both logics; FormulaSL / FormulaQ wrappers enforce
// which constructors are allowed where. State and path strata share the
// boolean connectives.
enum class FK {
  True,
  False,
  Atom,
  Not,
  Or,
  And,
  Implies,
  // SLi state stratum
  ExistsStrat,  // <<x:o>> φ       name=x aux=o
  ForallStrat,  // [[x:o]] φ
  Bind,         // (a,x) φ         name=a aux=x
  Unbind,       // (a,?) φ         name=a
  EOut,         // E ψ (outcome quantifier)
  AOut,         // A ψ
  // QCTLsi state stratum
  Epath,       // E ψ (path quantifier)
  Apath,       // A ψ
  ExistsProp,  // exists p obs={..} . φ    name=p
  ForallProp,  // forall p obs={..} . φ
  // path stratum
  Next,
  Until,
  Finally,
  Globally,
};

struct FNode;
using FRef = std::shared_ptr<const FNode>;

struct FNode {
  FK k;
  std::string name;  // atom / variable / agent, depending on kind
  std::string aux;   // observation symbol / bound variable
  IndexSet cobs;     // concrete observation for ExistsProp/ForallProp
  FRef a, b;
  int span_begin = -1, span_end = -1;

  // Set by the SLi→QCTLsi translation on the conjunction φ_str ∧ tr(φ): the
  // left side is a strategy-coding safety constraint checkable by a две-state
  // deterministic automaton, so the checker intersects instead of alternating.
  bool det_intersect = false;
  std::vector<std::string> det_atoms;  // the p_m^x family of the constraint
  bool det_exactly_one = false;        // deterministic-strategy variant
};

FRef f_true();
FRef f_false();
FRef f_atom(const std::string& p);
FRef f_not(FRef a);
FRef f_or(FRef a, FRef b);
FRef f_and(FRef a, FRef b);
FRef f_implies(FRef a, FRef b);
FRef f_exists_strat(const std::string& var, const std::string& obs, FRef a);
FRef f_forall_strat(const std::string& var, const std::string& obs, FRef a);
FRef f_bind(const std::string& agent, const std::string& var, FRef a);
FRef f_unbind(const std::string& agent, FRef a);
FRef f_eout(FRef a);
FRef f_aout(FRef a);
FRef f_epath(FRef a);
FRef f_apath(FRef a);
FRef f_exists_prop(const std::string& atom, const IndexSet& cobs, FRef a);
FRef f_forall_prop(const std::string& atom, const IndexSet& cobs, FRef a);
FRef f_next(FRef a);
FRef f_until(FRef a, FRef b);
FRef f_finally(FRef a);
FRef f_globally(FRef a);

struct FormulaSL {
  FRef root;
};
struct FormulaQ {
  FRef root;
};

// Parsers. Both alpha-rename duplicate quantified variables/atoms apart and
// reject badly stratified input with a source location.
FormulaSL parse_sl(const std::string& text);
FormulaQ parse_q(const std::string& text);

std::string to_string_sl(const FRef& f);
std::string to_string_q(const FRef& f);

// --- analyses -------------------------------------------------------------

std::set<std::string> free_vars(const FormulaSL& f);
bool is_sentence(const FormulaSL& f);

struct HierarchyViolation {
  std::string outer, inner;  // printable quantifier descriptions
};

std::optional<HierarchyViolation> hierarchy_violation_q(const FormulaQ& f);
bool check_hierarchical_q(const FormulaQ& f);

std::optional<HierarchyViolation> hierarchy_violation_instance(const Cgs& g, const FormulaSL& f);
bool check_hierarchical_instance(const Cgs& g, const FormulaSL& f);

// Intersection of all concrete observations occurring in f; [n] if none.
IndexSet i_phi(const FormulaQ& f, int n);
IndexSet i_phi_node(const FRef& f, int n);

// Largest component index mentioned in quantifiers (0 if none); used by the
// CLI to infer n when no model is given.
int max_obs_index_q(const FormulaQ& f);

enum class Flavor { nd, alt };

struct SimDepth {
  int depth = 0;
  Flavor flavor = Flavor::nd;
  bool operator==(const SimDepth& o) const { return depth == o.depth && flavor == o.flavor; }
};

std::string to_string(const SimDepth& d);

SimDepth sim_depth_q(const FormulaQ& f, int n);
SimDepth sim_depth_sl(const FormulaSL& f, const Cgs& g);

struct Subsentence {
  std::string text;
  SimDepth depth;
};

struct SimNumber {
  int number = 0;
  std::vector<Subsentence> subsentences;
};

SimNumber sim_number_q(const FormulaQ& f, int n);
SimNumber sim_number_sl(const FormulaSL& f, const Cgs& g);

// Syntactic LTL test for a path formula: no strategy/outcome/propositional
// quantifier and no state-stratum operator other than atoms.
bool path_is_ltl(const FRef& psi);

// Maximal state subformulas of a path formula, left to right, deduplicated
// structurally.
std::vector<FRef> max_state_subformulas(const FRef& psi);

// Number of nested Epath/Apath (QCTL) quantifiers / nested ExistsProp
// quantifiers; used for the size-bound sanity checks.
int e_depth(const FRef& f);
int ex_depth(const FRef& f);
int formula_size(const FRef& f);

// Temporal X-nesting; error if U/F/G occur (used by the bounded oracle).
std::optional<int> x_only_depth(const FRef& f);

// The set {j | O(o_i) ⊆ O(o_j)} of 1-based observation indices, plus index
// n+1 when O(o_i) is the identity (the CKS position component observes
// exactly as much in that case). Defined here because the simulation-depth
// measure for SLi mirrors the translation's quantifier observations.
IndexSet obs_tilde(const Cgs& g, const std::string& obs);

}  // namespace slimc
