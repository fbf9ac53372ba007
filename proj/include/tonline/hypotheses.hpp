#pragma once

// Hypothesis classes over B_d: the randomized sparse-label construction
// (evaluated lazily through a keyed hash), explicit label tables, version
// spaces, and the Littlestone dimension.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tonline/index_set.hpp"
#include "tonline/treebits.hpp"

namespace tonline {

/// SplitMix64 finalizer: z ^= z>>30; z *= 0xbf58476d1ce4e5b9; z ^= z>>27;
/// z *= 0x94d049bb133111eb; z ^= z>>31.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Keyed hash behind the off-path labels:
///   k = mix64(seed + G); k = mix64(k ^ branch_code); prf = mix64((k + G) ^ node_code)
/// with G = 0x9e3779b97f4a7c15 and codes in sentinel form ((1 << len) | bits).
constexpr std::uint64_t prf_key(std::uint64_t seed) { return mix64(seed + kGolden); }
constexpr std::uint64_t prf_keyed(std::uint64_t key, std::uint64_t branch_code, std::uint64_t node_code) {
  return mix64((mix64(key ^ branch_code) + kGolden) ^ node_code);
}
constexpr std::uint64_t prf(std::uint64_t seed, std::uint64_t branch_code, std::uint64_t node_code) {
  return prf_keyed(prf_key(seed), branch_code, node_code);
}

/// Off-path label rule: 1 iff the low `bias_exp` bits of the hash are zero,
/// so P[label = 1] = 2^-bias_exp exactly.
constexpr Bit biased_bit(std::uint64_t hash, int bias_exp) {
  const std::uint64_t mask = bias_exp >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bias_exp) - 1;
  return (hash & mask) == 0 ? 1 : 0;
}

/// Default bias exponent round(sqrt(d)).
int default_bias_exp(int d);
/// ceil(sqrt(d)) computed exactly on integers.
int ceil_sqrt(int d);

/// A label for each of the 2^{d+1}-1 nodes of B_d, indexed by BFS order.
class ExplicitHypothesis {
 public:
  ExplicitHypothesis(int depth, std::vector<std::uint64_t> label_words);
  /// All-zero table.
  explicit ExplicitHypothesis(int depth);

  int depth() const { return depth_; }
  Bit eval(NodeId x) const;
  void set(NodeId x, Bit y);
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const ExplicitHypothesis&, const ExplicitHypothesis&) = default;

 private:
  int depth_;
  std::vector<std::uint64_t> words_;
};

/// h_b: on-path labels follow the branch b in {0,1}^{d+1}; off-path labels come
/// from the keyed hash with bias 2^-bias_exp.
struct LazyHypothesis {
  int depth = 0;
  std::uint64_t branch = 0;  ///< b_1 is bit d (most significant of d+1 bits)
  std::uint64_t seed = 0;
  int bias_exp = 1;

  Bit eval(NodeId x) const;
  /// b_{i}, 1-based, i in [1, d+1].
  Bit branch_bit(int i) const { return static_cast<Bit>((branch >> (depth + 1 - i)) & 1U); }
  /// The prefix b_{<=i} as a node, i in [0, d].
  NodeId branch_prefix(int i) const { return NodeId::from_bits(i, branch >> (depth + 1 - i)); }
  std::string branch_string() const;
  std::uint64_t branch_code() const { return (std::uint64_t{1} << (depth + 1)) | branch; }
};

using Hypothesis = std::variant<ExplicitHypothesis, LazyHypothesis>;

Bit eval(const Hypothesis& h, NodeId x);
int depth_of(const Hypothesis& h);
/// (u_0, ..., u_d) with u_i = u_{i-1} ∘ h(u_{i-1}).
std::vector<NodeId> path_of(const Hypothesis& h);
/// Labels of h along its own path, as a d+1 bit string.
std::string path_labels(const Hypothesis& h);
/// Full label table; refuses d > 20.
ExplicitHypothesis materialize(const Hypothesis& h);

struct RandomClassSpec {
  int depth = 0;
  int bias_exp = 1;
  std::uint64_t seed = 0;
};

class HypothesisClass;
using ClassPtr = std::shared_ptr<const HypothesisClass>;

/// An ordered, immutable collection of hypotheses over B_d. Members of the
/// random construction are generated on demand from their index.
class HypothesisClass {
 public:
  /// {h_b : b in {0,1}^{d+1}} in lexicographic branch order (index = b).
  static ClassPtr random(int depth, int bias_exp, std::uint64_t seed);
  /// Explicit members; `domain` lists the points of interest (default: all of B_d).
  static ClassPtr explicit_class(int depth, std::vector<ExplicitHypothesis> members,
                                 std::optional<std::vector<NodeId>> domain = std::nullopt);
  /// Functions on the first k BFS nodes of B_depth; function `mask` labels node i with bit i of mask.
  /// Nodes outside the domain are labeled 0.
  static ClassPtr from_point_functions(int depth, int k, std::span<const std::uint32_t> masks);
  /// All 2^k functions on k points.
  static ClassPtr full_on_points(int k);

  int depth() const { return depth_; }
  std::uint64_t size() const { return size_; }
  bool is_lazy() const { return generator_.has_value(); }
  const std::optional<RandomClassSpec>& generator() const { return generator_; }

  Hypothesis member(std::uint64_t i) const;
  Bit eval(std::uint64_t i, NodeId x) const {
    if (generator_) return eval_lazy(i, x);
    return explicit_[i].eval(x);
  }
  /// Labels of members 64w .. 64w+63 on x as a bit mask (bits past size() are unspecified).
  std::uint64_t label_word(std::uint64_t w, NodeId x) const;
  /// x lies on the path of member i.
  bool on_path(std::uint64_t i, NodeId x) const;

  /// Points of interest; for the random construction this is all of B_d (d <= 20).
  std::vector<NodeId> domain() const;

  /// Compact text descriptor, e.g. "lemma:d=4,bias=2,seed=7" or "explicit:d=2,size=8".
  std::string descriptor() const;

 private:
  HypothesisClass() = default;
  Bit eval_lazy(std::uint64_t i, NodeId x) const {
    const int d = depth_;
    const int k = x.depth();
    if ((i >> (d + 1 - k)) == x.bits()) return static_cast<Bit>((i >> (d - k)) & 1U);
    const std::uint64_t branch_code = (std::uint64_t{1} << (d + 1)) | i;
    return biased_bit(prf_keyed(key_, branch_code, x.code()), generator_->bias_exp);
  }

  int depth_ = 0;
  std::uint64_t size_ = 0;
  std::optional<RandomClassSpec> generator_;
  std::uint64_t key_ = 0;
  std::vector<ExplicitHypothesis> explicit_;
  std::vector<NodeId> leaves_;  // end of each explicit member's path
  std::optional<std::vector<NodeId>> domain_;
};

/// The random construction. Throws DepthOverflow for d outside [1, 62].
ClassPtr build_random_class(int depth, int bias_exp, std::uint64_t seed);

/// The live members of a class during a game.
class VersionSpace {
 public:
  VersionSpace() = default;
  /// All members alive. Throws BudgetExceeded when the class is too large to index.
  explicit VersionSpace(ClassPtr cls);
  VersionSpace(ClassPtr cls, IndexSet alive);

  const ClassPtr& cls() const { return cls_; }
  const HypothesisClass& hypothesis_class() const { return *cls_; }
  const IndexSet& alive() const { return *alive_; }
  std::uint64_t size() const { return alive_->size(); }
  bool empty() const { return alive_->empty(); }

  /// Number of live members labeling x with 1.
  std::uint64_t count_ones(NodeId x) const;

  /// Members with h(x) = y. Shares storage with *this when nothing is removed.
  VersionSpace restrict(NodeId x, Bit y) const;
  /// (restrict(x, 0), restrict(x, 1)) with one evaluation pass.
  std::pair<VersionSpace, VersionSpace> split(NodeId x) const;
  /// Members whose path contains x (on = true) or avoids it (on = false).
  VersionSpace restrict_path(NodeId x, bool on) const;

  /// Every live member has x on its path (vacuously true when empty).
  bool all_on_path(NodeId x) const;

  friend bool operator==(const VersionSpace& a, const VersionSpace& b) {
    return a.cls_ == b.cls_ && *a.alive_ == *b.alive_;
  }

 private:
  ClassPtr cls_;
  std::shared_ptr<const IndexSet> alive_;
};

/// Free-function form of VersionSpace::restrict.
VersionSpace restrict(const VersionSpace& vs, NodeId x, Bit y);

struct LdimBudget {
  std::uint64_t max_alive = std::uint64_t{1} << 14;
  std::size_t max_domain = std::size_t{1} << 10;
};

/// Littlestone dimension of the live set over `domain`:
///   L(H) = max over x splitting H of 1 + min(L(H|x=0), L(H|x=1)), else 0.
/// The empty set has dimension -1. Throws BudgetExceeded outside the guards.
int ldim(const VersionSpace& vs, std::span<const NodeId> domain, const LdimBudget& budget = {});
int ldim(const ClassPtr& cls, const LdimBudget& budget = {});

struct Counterexample {
  std::vector<std::uint64_t> hypotheses;
  std::vector<NodeId> points;
};

/// Re-checks that every (h, x) pair has x off the path of h and h(x) = target.
bool verify_counterexample(const HypothesisClass& cls, const Counterexample& cx, Bit target);

/// Randomized search for |H_sub| = size_h members and |X| = size_x nodes with
/// every x off-path for every h and labeled `target`. A returned witness has
/// been re-verified exhaustively; nullopt proves nothing.
std::optional<Counterexample> falsify_class_properties(const HypothesisClass& cls, std::size_t size_h,
                                                        std::size_t size_x, Bit target, std::size_t trials,
                                                        std::uint64_t seed);

/// Size thresholds for the two sparse-label properties of the random class.
struct ClassPropertyThresholds {
  std::size_t theta_h = 0;  ///< default 2^{ceil(sqrt d)}
  std::size_t theta_x = 0;  ///< default ceil(sqrt d)
};
ClassPropertyThresholds default_thresholds(int d);

/// Explicit-table file: "d=<d>" then one line per member: its path-label
/// string, a space, and 2^{d+1}-1 label bits in BFS order.
void write_explicit_table(std::ostream& out, const HypothesisClass& cls);
ClassPtr read_explicit_table(std::istream& in);

}  // namespace tonline
