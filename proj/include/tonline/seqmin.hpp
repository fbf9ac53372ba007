#pragma once

// Rigid adversaries, their decision tables, essential indices and the minimal
// adversary on the essential subsequence.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tonline/adversaries.hpp"
#include "tonline/engine.hpp"

namespace tonline {

/// Middle-man around a deterministic adversary A. Per round it asks a copy of A
/// for its label under prediction 0, then 1; f = 0 or 1 when A accepts that
/// prediction, otherwise * and the learner's own prediction is relayed.
class RigidAdversary final : public TransductiveAdversary {
 public:
  explicit RigidAdversary(std::unique_ptr<TransductiveAdversary> inner);
  RigidAdversary(const RigidAdversary& o);
  RigidAdversary& operator=(const RigidAdversary& o);

  std::string name() const override { return "rigid(" + inner_->name() + ")"; }
  const std::vector<NodeId>& sequence() const override { return inner_->sequence(); }
  Bit label(std::size_t t, Bit y_hat) override;
  std::unique_ptr<TransductiveAdversary> clone() const override { return std::make_unique<RigidAdversary>(*this); }
  std::optional<std::string> state_key() const override;

  /// f at the current history; does not advance.
  Symbol peek(std::size_t t) const;
  const std::string& history() const { return history_; }

 private:
  std::unique_ptr<TransductiveAdversary> inner_;
  std::string history_;
};

/// Label A gives at round t under prediction y_hat, on a copy; checks a second copy agrees.
Bit probe_label(const TransductiveAdversary& adv, std::size_t t, Bit y_hat);

struct RigidifyResult {
  RigidAdversary adversary;
  RigidTable table;
};

/// Extracts f over every reachable history with fewer than `star_budget` stars.
/// Throws ProbeNondeterminism when A is not a function of its inputs, BudgetExceeded
/// past `max_entries`.
RigidifyResult rigidify(const TransductiveAdversary& adv, std::size_t star_budget,
                        std::size_t max_entries = std::size_t{1} << 22);

/// 0-based rounds t having a reachable history of length t with f = * and fewer
/// than M stars before it.
std::vector<std::size_t> essential_indices(const RigidTable& f, std::size_t M);

/// Plays the rigid adversary on the essential rounds only; in between it feeds
/// prediction 0 to the rigid adversary.
class MinimalAdversary final : public TransductiveAdversary {
 public:
  MinimalAdversary(RigidAdversary rigid, std::vector<std::size_t> essential);

  std::string name() const override { return "minimal"; }
  const std::vector<NodeId>& sequence() const override { return sub_; }
  Bit label(std::size_t t, Bit y_hat) override;
  std::unique_ptr<TransductiveAdversary> clone() const override {
    return std::make_unique<MinimalAdversary>(*this);
  }
  std::optional<std::string> state_key() const override;

  const std::vector<std::size_t>& essential() const { return essential_; }

 private:
  RigidAdversary rigid_;
  std::vector<std::size_t> essential_;
  std::vector<NodeId> sub_;
  std::size_t inner_t_ = 0;
  std::size_t t_ = 0;
};

struct MinimalizeResult {
  RigidTable table;
  std::vector<std::size_t> essential;
  std::vector<NodeId> subsequence;
  std::shared_ptr<MinimalAdversary> adversary;
};

MinimalizeResult minimalize(const TransductiveAdversary& adv, std::size_t M);

}  // namespace tonline
