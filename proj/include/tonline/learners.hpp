#pragma once

// Learner strategies: Halving, SOA, the splitting-experts transductive learner, baselines.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tonline/dyadic.hpp"
#include "tonline/engine.hpp"
#include "tonline/hypotheses.hpp"

namespace tonline {

/// 1 iff at least half of the live members label x with 1; 0 on an empty set.
Bit halving_predict(const VersionSpace& vs, NodeId x);
VersionSpace halving_update(const VersionSpace& vs, NodeId x, Bit y);

/// argmax_y ldim(vs | x -> y), ties to 1.
Bit soa_predict(const VersionSpace& vs, std::span<const NodeId> domain, NodeId x, const LdimBudget& budget = {});

class HalvingLearner final : public Learner {
 public:
  explicit HalvingLearner(ClassPtr cls) : vs_(std::move(cls)) {}
  explicit HalvingLearner(VersionSpace vs) : vs_(std::move(vs)) {}
  std::string name() const override { return "halving"; }
  Bit predict(std::size_t, NodeId x) override { return halving_predict(vs_, x); }
  void observe(std::size_t, NodeId x, Bit y) override { vs_ = halving_update(vs_, x, y); }
  std::unique_ptr<Learner> clone() const override { return std::make_unique<HalvingLearner>(*this); }
  const VersionSpace& version_space() const { return vs_; }

 private:
  VersionSpace vs_;
};

class SoaLearner final : public Learner {
 public:
  explicit SoaLearner(ClassPtr cls, LdimBudget budget = {});
  std::string name() const override { return "soa"; }
  Bit predict(std::size_t, NodeId x) override { return soa_predict(vs_, domain_, x, budget_); }
  void observe(std::size_t, NodeId x, Bit y) override { vs_ = vs_.restrict(x, y); }
  std::unique_ptr<Learner> clone() const override { return std::make_unique<SoaLearner>(*this); }

 private:
  VersionSpace vs_;
  std::vector<NodeId> domain_;
  LdimBudget budget_;
};

enum class BaselineKind { AlwaysZero, AlwaysOne, SeededRandom, LazyConsistent };

std::unique_ptr<Learner> make_baseline(BaselineKind kind, const ClassPtr& cls, std::uint64_t seed = 0);

// ---- splitting experts ----

/// An assumption made when an expert split: whether x_round is on the target's path.
struct Assumption {
  std::size_t round = 0;
  bool on_path = false;
  friend bool operator==(const Assumption&, const Assumption&) = default;
};

struct ExpertState {
  std::vector<NodeId> S;  ///< danger zone, sorted by code
  NodeId u;               ///< deepest node known or assumed on-path
  VersionSpace H;
  Dyadic w = Dyadic::one();
  std::uint64_t id = 0;
  std::uint64_t parent = 0;
  std::size_t mistakes = 0;  ///< mistakes along the ancestry
  std::vector<Assumption> trace;
};

/// Which branch of the expert rule produced a prediction.
enum class PredictBranch { Halving, OnPathDescendant, Majority };

struct ExpertPrediction {
  Bit label = 0;
  PredictBranch branch = PredictBranch::Majority;
};

ExpertPrediction expert_predict_detail(const ExpertState& e, NodeId x, std::uint64_t halving_threshold);
Bit expert_prediction(const ExpertState& e, NodeId x, std::uint64_t halving_threshold);
ExpertState expert_basic_update(const ExpertState& e, NodeId x, Bit y);

enum class UpdateCase { Halving, ShrinkS, Split };

struct ExtendedUpdate {
  UpdateCase which = UpdateCase::Halving;
  std::vector<ExpertState> experts;  ///< one (A, B) or two (C: off then on)
};

/// Weights, ids and traces of the returned experts are copied from e; the caller reassigns them.
ExtendedUpdate expert_extended_update(const ExpertState& e, NodeId x, Bit y, std::uint64_t halving_threshold);

struct TransductiveParams {
  std::optional<std::size_t> tmax;                  ///< default min(n, 2 * 2^{ceil sqrt d})
  std::optional<std::uint64_t> halving_threshold;  ///< default 2^{ceil sqrt d}
  std::size_t expert_cap = std::size_t{1} << 20;
};

std::uint64_t default_halving_threshold(int d);
std::size_t default_tmax(int d, std::size_t n);

/// Per-round record of an instrumented run.
struct ExpertRoundStats {
  std::size_t round = 0;
  std::size_t pool_before = 0;
  std::size_t pool_after = 0;
  Dyadic weight_before;
  Dyadic weight_after;
  Bit y_hat = 0;
  Bit y = 0;
  std::size_t splits = 0;
  std::size_t shrinks = 0;
  // only with a target path
  std::size_t consistent = 0;
  bool consistent_u_on_path = false;
  bool consistent_s_ok = false;
};

class TransductiveLearner final : public Learner {
 public:
  TransductiveLearner(ClassPtr cls, TransductiveParams params = {});

  std::string name() const override { return "transductive"; }
  void on_sequence(std::span<const NodeId> sequence) override;
  Bit predict(std::size_t t, NodeId x) override;
  void observe(std::size_t t, NodeId x, Bit y) override;
  std::unique_ptr<Learner> clone() const override { return std::make_unique<TransductiveLearner>(*this); }

  /// Records per-round stats; with a target path also checks the assumption-consistent expert.
  void instrument(std::optional<std::vector<NodeId>> target_path = std::nullopt);
  const std::vector<ExpertRoundStats>& stats() const { return stats_; }

  const std::vector<ExpertState>& pool() const { return pool_; }
  Dyadic total_weight() const;
  /// The expert of maximal weight (lowest id on ties).
  const ExpertState& best_expert() const;
  std::uint64_t halving_threshold() const { return threshold_; }
  std::size_t tmax() const { return tmax_; }
  std::size_t max_pool() const { return max_pool_; }

  /// Whether e's assumptions all agree with the target path.
  static bool assumption_consistent(const ExpertState& e, std::span<const NodeId> sequence,
                                    std::span<const NodeId> target_path);

 private:
  ClassPtr cls_;
  TransductiveParams params_;
  std::uint64_t threshold_ = 0;
  std::size_t tmax_ = 0;
  std::vector<NodeId> seq_;
  std::vector<ExpertState> pool_;
  std::vector<Bit> preds_;
  std::optional<std::size_t> predicted_round_;
  Bit last_y_hat_ = 0;
  std::uint64_t next_id_ = 1;
  std::size_t max_pool_ = 1;

  bool instrumented_ = false;
  std::optional<std::vector<NodeId>> target_path_;
  std::vector<ExpertRoundStats> stats_;
};

/// Post-hoc multiplicative-weights bound: (4/3)^m <= W0 / w_best, checked exactly as
/// 4^m * w_best <= 3^m * W0.
bool mw_bound_holds(std::size_t mistakes, const Dyadic& w_best, const Dyadic& w0 = Dyadic::one());

/// Learner by CLI name: halving | soa | transductive | zero | one | random | lazy.
std::unique_ptr<Learner> make_learner(const std::string& name, const ClassPtr& cls, std::uint64_t seed,
                                      const TransductiveParams& params = {});

}  // namespace tonline
