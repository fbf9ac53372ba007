#pragma once

// Sweep runner, configuration and result emission.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tonline/adversaries.hpp"
#include "tonline/engine.hpp"
#include "tonline/learners.hpp"

namespace tonline {

/// Class from a generator spec:
///   lemma:d=<d>[,bias=<s>][,seed=<n>]   random construction (default bias round(sqrt d))
///   full:k=<k>                           all functions on k points
///   random:k=<k>,size=<m>[,seed=<n>]     m distinct functions on k points
///   table:<path>                         explicit table file
/// `default_seed` fills a missing seed.
ClassPtr parse_class_spec(const std::string& spec, std::uint64_t default_seed = 0);

/// Comma-separated list; integer items may be ranges "a..b".
std::vector<std::uint64_t> parse_uint_list(const std::string& text);
std::vector<std::string> parse_name_list(const std::string& text);

/// Flat key=value file; '#' starts a comment, blank lines are ignored.
std::map<std::string, std::string> read_config(std::istream& in);
std::map<std::string, std::string> read_config_file(const std::string& path);

struct SweepSpec {
  std::vector<int> d_values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> learners{"transductive"};
  std::vector<std::string> adversaries{"balanced"};
  std::size_t repetitions = 1;
  std::size_t parallelism = 1;
  Mode mode = Mode::Trusted;
  TransductiveParams learner_params;
  double lower_bound_factor = 2.0;
  /// Rounds for adversaries without their own sequence length (greedy, littlestone); 0 = d + 1.
  std::size_t n = 0;
  /// Write one JSON transcript per cell into this directory.
  std::optional<std::string> transcript_dir;

  /// Keys: d, seeds, learners, adversaries, repetitions, parallelism, mode (strict|trusted),
  /// tmax, halving_threshold, expert_cap, c, n, transcripts. Unknown keys throw.
  void apply(const std::map<std::string, std::string>& kv);
  void validate() const;
};

struct ResultRow {
  int d = 0;
  std::uint64_t seed = 0;
  std::string learner;
  std::string adversary;
  std::size_t repetition = 0;
  std::size_t n = 0;
  std::size_t mistakes = 0;
  std::optional<std::size_t> forced;
  double wall_ms = 0;
  std::string error;

  double sqrt_d() const;
  double ratio() const;
};

/// One cell: class lemma(d, seed), the named learner and adversary.
ResultRow run_cell(const SweepSpec& spec, int d, std::uint64_t seed, const std::string& learner,
                   const std::string& adversary, std::size_t repetition = 0, Transcript* transcript = nullptr);

/// Every (d, seed, learner, adversary, repetition) cell, sorted by that key. Cell failures
/// become rows with the error column set.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

inline constexpr const char* kCsvHeader = "d,seed,learner,adversary,n,mistakes,forced,sqrt_d,ratio,wall_ms,error";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
void emit_transcript_json(const Transcript& t, const std::string& path);

}  // namespace tonline
