#pragma once

// Adversary strategies: the balanced-ratio lower-bound adversary and its sequence
// constructor, the Littlestone-tree adversary, scripted and greedy adversaries.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tonline/engine.hpp"
#include "tonline/hypotheses.hpp"

namespace tonline {

/// Balance threshold epsilon, exact when rational.
class Epsilon {
 public:
  static Epsilon rational(std::uint64_t num, std::uint64_t den);
  static Epsilon real(long double value);
  /// 2^{-sqrt(d)/2}; falls back to 1/4 when that is not below 1/2.
  static Epsilon default_for(int d);

  bool is_rational() const { return den_ != 0; }
  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  long double value() const { return value_; }

  /// count >= eps * size
  bool at_least(std::uint64_t count, std::uint64_t size) const;
  /// ones/size lies in [eps, 1 - eps]
  bool balanced(std::uint64_t ones, std::uint64_t size) const {
    return at_least(ones, size) && at_least(size - ones, size);
  }
  /// count >= (1 - eps) * size
  bool at_least_complement(std::uint64_t count, std::uint64_t size) const;

  std::string to_string() const;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 0;
  long double value_ = 0;
};

struct BalancedRatioParams {
  Epsilon epsilon = Epsilon::rational(1, 4);
  int M = 1;
  double lower_bound_factor = 2.0;  ///< c in M = ceil(sqrt(d) / c)
};

BalancedRatioParams default_balanced_params(int d, double c = 2.0);

/// A tracked class of the constructor, indexed by the labels chosen at balanced splits.
struct TrackedClass {
  std::string index;
  VersionSpace H;
};

struct SequenceConstruction {
  std::vector<NodeId> sequence;
  /// tracked[t] = the collection after step t (tracked[0] = {class}); only when recorded.
  std::vector<std::vector<TrackedClass>> tracked;
  std::size_t max_tracked = 0;
};

SequenceConstruction construct_sequence(const ClassPtr& cls, const BalancedRatioParams& params,
                                        bool record_tracked = false);

/// length n, ancestry closure of every prefix.
bool ancestry_closed(std::span<const NodeId> sequence);

struct BalancedRoundLog {
  std::uint64_t size_before = 0;
  std::uint64_t ones = 0;
  bool forced = false;
  Bit y = 0;
  std::uint64_t size_after = 0;
  bool x_on_path = false;  ///< x_t on the path of every member of H_{t-1} (when recorded)
  bool in_tracked = false;  ///< H_t among the constructor's tracked classes (when recorded)
};

class BalancedRatioAdversary final : public TransductiveAdversary {
 public:
  struct Options {
    bool record_on_path = false;
    bool record_tracked = false;  ///< tiny d only: keeps every tracked collection
  };

  BalancedRatioAdversary(ClassPtr cls, BalancedRatioParams params);
  BalancedRatioAdversary(ClassPtr cls, BalancedRatioParams params, Options options);

  std::string name() const override { return "balanced"; }
  const std::vector<NodeId>& sequence() const override { return construction_->sequence; }
  Bit label(std::size_t t, Bit y_hat) override;
  std::unique_ptr<TransductiveAdversary> clone() const override {
    return std::make_unique<BalancedRatioAdversary>(*this);
  }
  std::optional<std::size_t> forced_count() const override { return forced_; }

  const std::vector<BalancedRoundLog>& log() const { return log_; }
  const VersionSpace& version_space() const { return vs_; }
  const BalancedRatioParams& params() const { return params_; }
  const SequenceConstruction& construction() const { return *construction_; }
  std::optional<std::string> state_key() const override;

 private:
  ClassPtr cls_;
  BalancedRatioParams params_;
  Options options_;
  std::shared_ptr<const SequenceConstruction> construction_;
  VersionSpace vs_;
  std::size_t forced_ = 0;
  std::vector<BalancedRoundLog> log_;
};

/// Per-round shrinkage: forced rounds keep >= eps, others >= (1 - eps) of the live set.
bool shrinkage_holds_per_round(const std::vector<BalancedRoundLog>& log, const Epsilon& eps);
/// |H_final| >= eps^F (1 - eps)^{n - F} |H_0|; exact for rational eps.
bool shrinkage_holds_total(const std::vector<BalancedRoundLog>& log, const Epsilon& eps, std::uint64_t initial);

/// Standard-game adversary walking a maximal shattered tree; once the live set has
/// dimension 0 it echoes the prediction whenever that stays realizable.
class LittlestoneTreeAdversary final : public StandardAdversary {
 public:
  LittlestoneTreeAdversary(ClassPtr cls, LdimBudget budget = {});
  std::string name() const override { return "littlestone"; }
  NodeId next_instance(std::size_t t) override;
  Bit label(std::size_t t, Bit y_hat) override;
  std::unique_ptr<StandardAdversary> clone() const override {
    return std::make_unique<LittlestoneTreeAdversary>(*this);
  }

 private:
  ClassPtr cls_;
  LdimBudget budget_;
  std::vector<NodeId> domain_;
  VersionSpace vs_;
  NodeId x_;
  bool flip_ = false;
};

enum class Symbol : std::uint8_t { Zero = 0, One = 1, Star = 2 };
char symbol_char(Symbol s);
Symbol symbol_from_char(char c);

/// f: label history -> {0, 1, *}. Histories are bit strings over the labels so far.
struct RigidTable {
  std::size_t n = 0;
  std::map<std::string, Symbol> entries;
  std::optional<Symbol> fallback;

  Symbol at(const std::string& history) const;
  bool has(const std::string& history) const { return entries.count(history) != 0 || fallback.has_value(); }
  std::string to_string() const;
};

/// Scripted adversaries over a fixed sequence.
class ScriptedAdversary final : public TransductiveAdversary {
 public:
  enum class Kind { FixedLabels, FlipFirstK, Rigid };

  static ScriptedAdversary fixed(std::vector<NodeId> seq, std::vector<Bit> labels);
  /// 1 - y_hat for the first k rounds, then `labels[t]`.
  static ScriptedAdversary flip_first_k(std::vector<NodeId> seq, std::size_t k, std::vector<Bit> labels);
  static ScriptedAdversary rigid(std::vector<NodeId> seq, RigidTable table);

  std::string name() const override;
  const std::vector<NodeId>& sequence() const override { return seq_; }
  Bit label(std::size_t t, Bit y_hat) override;
  std::unique_ptr<TransductiveAdversary> clone() const override {
    return std::make_unique<ScriptedAdversary>(*this);
  }
  std::optional<std::string> state_key() const override;

  Kind kind() const { return kind_; }
  const std::vector<Bit>& labels() const { return labels_; }
  const RigidTable& table() const { return table_; }
  const std::string& history() const { return history_; }

 private:
  ScriptedAdversary() = default;
  Kind kind_ = Kind::FixedLabels;
  std::vector<NodeId> seq_;
  std::vector<Bit> labels_;
  std::size_t k_ = 0;
  RigidTable table_;
  std::string history_;
};

/// Scripted file: line 1 comma-separated node bit strings; line 2 label bits, or
/// "f:" then space-separated history=symbol tokens (empty history "=*", default=<sym>).
ScriptedAdversary parse_scripted(std::istream& in);
ScriptedAdversary load_scripted(const std::string& path);
void write_scripted(std::ostream& out, const ScriptedAdversary& adv);

/// Flips the prediction whenever both labels are realizable; otherwise the forced label.
class GreedyAdversary final : public TransductiveAdversary {
 public:
  GreedyAdversary(ClassPtr cls, std::vector<NodeId> seq);
  std::string name() const override { return "greedy"; }
  const std::vector<NodeId>& sequence() const override { return seq_; }
  Bit label(std::size_t t, Bit y_hat) override;
  std::unique_ptr<TransductiveAdversary> clone() const override { return std::make_unique<GreedyAdversary>(*this); }
  std::optional<std::size_t> forced_count() const override { return forced_; }
  std::optional<std::string> state_key() const override;

 private:
  std::vector<NodeId> seq_;
  VersionSpace vs_;
  std::size_t t_ = 0;
  std::size_t forced_ = 0;
};

/// Rigid table for `seq` over the class: * at the given rounds when both labels are
/// realizable after the history, otherwise the label of the lowest live member.
RigidTable realizable_rigid_table(const ClassPtr& cls, const std::vector<NodeId>& seq,
                                  const std::vector<std::size_t>& star_rounds);

/// Labels of member i on seq.
std::vector<Bit> labels_of(const HypothesisClass& cls, std::uint64_t i, const std::vector<NodeId>& seq);

/// Adversary by CLI name: balanced | greedy | scripted:<file>.
std::unique_ptr<TransductiveAdversary> make_transductive_adversary(const std::string& name, const ClassPtr& cls,
                                                                   const BalancedRatioParams& params,
                                                                   std::uint64_t seed, std::size_t n_hint);

}  // namespace tonline
