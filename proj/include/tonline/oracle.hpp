#pragma once

// Exact game values by exhaustive minimax search on tiny instances.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tonline/engine.hpp"
#include "tonline/hypotheses.hpp"

namespace tonline {

struct OracleBudget {
  std::uint64_t max_hypotheses = std::uint64_t{1} << 12;
  std::size_t max_domain = 64;
  std::size_t max_rounds = 8;
  std::uint64_t max_nodes = 100'000'000;
};

struct OracleStats {
  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;
};

/// Value of the transductive game on a fixed announced sequence:
///   V(H, i) = min_yhat max_{feasible y} [yhat != y] + V(H|x_i=y, i+1).
int trans_value_fixed_seq(const ClassPtr& cls, std::span<const NodeId> seq, const OracleBudget& budget = {},
                          OracleStats* stats = nullptr, bool memo = true);

/// max over all sequences in domain^n of trans_value_fixed_seq.
int trans_value(const ClassPtr& cls, std::size_t n, const OracleBudget& budget = {}, OracleStats* stats = nullptr);

/// Value of the standard game with n rounds: the adversary picks each point adaptively.
int std_value(const ClassPtr& cls, std::size_t n, const OracleBudget& budget = {}, OracleStats* stats = nullptr,
              bool memo = true);

/// min over prediction sequences of the mistakes against a deterministic adversary,
/// by DFS over its copies (memoized on state_key() when available).
std::size_t forced_mistakes(const TransductiveAdversary& adv, const OracleBudget& budget = {},
                            OracleStats* stats = nullptr);

}  // namespace tonline
