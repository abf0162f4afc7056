#pragma once

#include <string>
#include <vector>

#include "slimc/support.hpp"

namespace slimc {

// Finite two-player min-even parity game. A play is won by Eve iff the least
// colour seen infinitely often is even. Every position has at least one move.
struct ParityGame {
  std::vector<uint8_t> owner;  // 0 = Eve, 1 = Adam
  std::vector<int> color;
  std::vector<std::vector<int>> moves;
  int initial = 0;

  int size() const { return static_cast<int>(owner.size()); }
};

std::vector<std::string> validate(const ParityGame& g);

struct GameSolution {
  std::vector<uint8_t> winner;        // per position, 0 = Eve
  std::vector<int> strategy_eve;      // per position, move target or -1
  std::vector<int> strategy_adam;
};

// Recursive Zielonka solver with positional strategy extraction.
GameSolution solve_zielonka(const ParityGame& g);

// Independent cross-check: small progress measures (regions only).
std::vector<uint8_t> solve_progress_measures(const ParityGame& g);

// Verifies that `strategy` is positional and winning for `player` on its
// region: the region is closed under the opponent's moves and under the
// strategy, and every cycle of the restricted subgraph inside the region has
// minimal colour of the player's parity.
bool verify_strategy(const ParityGame& g, int player, const std::vector<uint8_t>& winner,
                     const std::vector<int>& strategy);

std::string to_dot(const ParityGame& g);

// Order- and parity-preserving colour compression (gap removal).
std::vector<int> compress_colors(const std::vector<int>& colors);

}  // namespace slimc
