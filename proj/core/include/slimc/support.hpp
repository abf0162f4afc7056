#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slimc {

// Failure categories; the CLI maps these onto exit codes.
enum class errc {
  input,             // malformed model/formula/options
  not_hierarchical,  // instance or formula outside the decidable fragment
  precondition,      // application-level precondition violated
  ceiling,           // resource ceiling hit (states / game positions / enumeration)
  internal,          // invariant broken inside the tool
};

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw error(kind, msg); }

inline void require(bool cond, errc kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

// Letters are valuations of an automaton's atom list, as a bitmask.
// Automata in this tool never read more than 64 quantified atoms.
using Letter = std::uint64_t;

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct VecIntHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h = hash_mix(h, static_cast<std::size_t>(x));
    return h;
  }
};

// Shared resource ceilings, adjustable via the CLI / environment.
struct Limits {
  long long max_automaton_states = 2'000'000;
  long long max_game_positions = 10'000'000;
  long long max_enumeration = 1'000'000;  // strategies per quantifier (oracle)

  mutable long long automaton_states = 0;
  mutable long long game_positions = 0;

  void charge_states(long long n = 1) const {
    automaton_states += n;
    if (automaton_states > max_automaton_states)
      fail(errc::ceiling, "automaton state ceiling exceeded (" +
                              std::to_string(max_automaton_states) + ")");
  }
  void charge_game(long long n = 1) const {
    game_positions += n;
    if (game_positions > max_game_positions)
      fail(errc::ceiling,
           "parity game position ceiling exceeded (" + std::to_string(max_game_positions) + ")");
  }
};

}  // namespace slimc
