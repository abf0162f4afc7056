#pragma once

#include <string>
#include <vector>

#include "slimc/logic.hpp"
#include "slimc/support.hpp"

namespace slimc {

// Guarded transition of a nondeterministic Büchi/parity word automaton.
// A letter (valuation of `atoms`) enables the edge iff it contains all bits
// of `req` and none of `forb`.
struct NbwEdge {
  Letter req = 0;
  Letter forb = 0;
  int dst = 0;
};

// Nondeterministic Büchi word automaton in min-even parity form: exactly the
// colours {0,1}, colour 0 accepting.
struct Nbw {
  std::vector<std::string> atoms;
  int initial = 0;
  std::vector<int> color;
  std::vector<std::vector<NbwEdge>> edges;

  int num_states() const { return static_cast<int>(color.size()); }
  bool edge_enabled(const NbwEdge& e, Letter a) const {
    return (a & e.req) == e.req && (a & e.forb) == 0;
  }
};

// Tableau translation of an LTL path formula (atoms may be placeholders for
// maximal state subformulas). Rejects non-LTL input.
Nbw ltl_to_nbw(const FRef& psi, const std::vector<std::string>& atoms);

// Does some run over prefix·loop^ω visit colour 0 infinitely often?
bool nbw_membership(const Nbw& a, const std::vector<Letter>& prefix,
                    const std::vector<Letter>& loop);

// Debug dump in a HOA-like textual form (non-normative).
std::string dump_hoa(const Nbw& a);

}  // namespace slimc
