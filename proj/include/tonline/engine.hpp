#pragma once

// Referee for the standard and transductive online games.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tonline/hypotheses.hpp"

namespace tonline {

enum class Setting { Standard, Transductive };

/// Realizability checking: Strict restricts a version space every round.
enum class Mode { Strict, Trusted };

struct Round {
  NodeId x;
  Bit y_hat = 0;
  Bit y = 0;
  friend bool operator==(const Round&, const Round&) = default;
};

struct Transcript {
  Setting setting = Setting::Standard;
  int depth = 0;
  std::optional<std::vector<NodeId>> sequence;
  std::vector<Round> rounds;
  std::string class_descriptor;

  std::size_t mistakes() const;
  friend bool operator==(const Transcript&, const Transcript&) = default;
};

std::size_t count_mistakes(const Transcript& t);

/// A learner is a deterministic state machine driven by the referee.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  /// Transductive games only: the whole instance sequence, before round 1.
  virtual void on_sequence(std::span<const NodeId> sequence) { (void)sequence; }
  /// Round t (0-based) prediction for instance x.
  virtual Bit predict(std::size_t t, NodeId x) = 0;
  /// The true label of round t.
  virtual void observe(std::size_t t, NodeId x, Bit y) = 0;
  virtual std::unique_ptr<Learner> clone() const = 0;
};

/// Transductive adversary: a fixed sequence, then labels in response to predictions.
class TransductiveAdversary {
 public:
  virtual ~TransductiveAdversary() = default;
  virtual std::string name() const = 0;
  virtual const std::vector<NodeId>& sequence() const = 0;
  /// Label for round t given the learner's prediction. Advances the state.
  virtual Bit label(std::size_t t, Bit y_hat) = 0;
  virtual std::unique_ptr<TransductiveAdversary> clone() const = 0;
  /// Mistakes this strategy guarantees by construction, if it knows.
  virtual std::optional<std::size_t> forced_count() const { return std::nullopt; }
  /// Canonical encoding of the state that determines all future behavior, when cheap.
  virtual std::optional<std::string> state_key() const { return std::nullopt; }
};

/// Standard adversary: chooses each instance adaptively.
class StandardAdversary {
 public:
  virtual ~StandardAdversary() = default;
  virtual std::string name() const = 0;
  virtual NodeId next_instance(std::size_t t) = 0;
  virtual Bit label(std::size_t t, Bit y_hat) = 0;
  virtual std::unique_ptr<StandardAdversary> clone() const = 0;
};

/// Plays a transductive adversary in the standard game (instances revealed one at a time).
class SequenceAsStandard final : public StandardAdversary {
 public:
  explicit SequenceAsStandard(std::unique_ptr<TransductiveAdversary> inner) : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }
  NodeId next_instance(std::size_t t) override { return inner_->sequence().at(t); }
  Bit label(std::size_t t, Bit y_hat) override { return inner_->label(t, y_hat); }
  std::unique_ptr<StandardAdversary> clone() const override {
    return std::make_unique<SequenceAsStandard>(inner_->clone());
  }

 private:
  std::unique_ptr<TransductiveAdversary> inner_;
};

/// Game 1. Throws RealizabilityViolation (strict mode) with the 1-based round.
Transcript play_standard(const ClassPtr& cls, Learner& learner, StandardAdversary& adversary, std::size_t n,
                         Mode mode = Mode::Strict);

/// Game 2. Throws SequenceLengthMismatch when the announced sequence is not of length n.
Transcript play_transductive(const ClassPtr& cls, Learner& learner, TransductiveAdversary& adversary,
                             std::size_t n, Mode mode = Mode::Strict);

/// Version space after replaying the transcript's labels.
VersionSpace replay_version_space(const ClassPtr& cls, const Transcript& t);

std::string to_json(const Transcript& t, int indent = -1);
Transcript transcript_from_json(const std::string& text);
void write_json(std::ostream& out, const Transcript& t);

std::string setting_name(Setting s);

}  // namespace tonline
