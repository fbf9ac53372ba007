#include "tonline/oracle.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "tonline/errors.hpp"
#include "tonline/seqmin.hpp"

namespace tonline {

namespace {

void check_class(const ClassPtr& cls, const OracleBudget& budget) {
  if (cls->size() > budget.max_hypotheses) {
    throw BudgetExceeded("oracle: class has " + std::to_string(cls->size()) + " members, budget " +
                         std::to_string(budget.max_hypotheses));
  }
}

void check_rounds(std::size_t n, const OracleBudget& budget) {
  if (n > budget.max_rounds) {
    throw BudgetExceeded("oracle: " + std::to_string(n) + " rounds, budget " + std::to_string(budget.max_rounds));
  }
}

struct KeyHash {
  std::size_t operator()(const std::pair<std::size_t, IndexSet>& k) const {
    return k.second.hash() * 31 + k.first;
  }
};

class Counter {
 public:
  Counter(const OracleBudget& b, OracleStats* s) : budget_(b), stats_(s) {}
  void node() {
    if (++nodes_ > budget_.max_nodes) throw BudgetExceeded("oracle: node budget exhausted");
    if (stats_) ++stats_->nodes;
  }
  void hit() {
    if (stats_) ++stats_->memo_hits;
  }

 private:
  const OracleBudget& budget_;
  OracleStats* stats_;
  std::uint64_t nodes_ = 0;
};

// One round of the inner game: the learner predicts, the adversary picks a feasible label.
template <class Next>
int round_value(const VersionSpace& vs, NodeId x, Next&& next) {
  auto [h0, h1] = vs.split(x);
  if (h0.empty() && h1.empty()) throw std::logic_error("oracle: empty version space");
  if (h0.empty()) return next(h1);
  if (h1.empty()) return next(h0);
  // both feasible: whichever yhat, the adversary can take the other label
  const int v0 = next(h0);
  const int v1 = next(h1);
  return std::min(std::max(v0, 1 + v1), std::max(1 + v0, v1));
}

class FixedSeqSolver {
 public:
  FixedSeqSolver(std::span<const NodeId> seq, Counter& c, bool memo) : seq_(seq), c_(c), memo_on_(memo) {}

  int solve(const VersionSpace& vs, std::size_t i) {
    if (i >= seq_.size()) return 0;
    std::pair<std::size_t, IndexSet> key{i, IndexSet{}};
    if (memo_on_) {
      key.second = vs.alive();
      if (auto it = memo_.find(key); it != memo_.end()) {
        c_.hit();
        return it->second;
      }
    }
    c_.node();
    const int v = round_value(vs, seq_[i], [&](const VersionSpace& next) { return solve(next, i + 1); });
    if (memo_on_) memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  std::span<const NodeId> seq_;
  Counter& c_;
  bool memo_on_;
  std::unordered_map<std::pair<std::size_t, IndexSet>, int, KeyHash> memo_;
};

}  // namespace

int trans_value_fixed_seq(const ClassPtr& cls, std::span<const NodeId> seq, const OracleBudget& budget,
                          OracleStats* stats, bool memo) {
  check_class(cls, budget);
  check_rounds(seq.size(), budget);
  for (NodeId x : seq) {
    if (x.depth() > cls->depth()) throw DepthOverflow("sequence point deeper than the tree");
  }
  Counter c(budget, stats);
  FixedSeqSolver s(seq, c, memo);
  return s.solve(VersionSpace(cls), 0);
}

namespace {

// V(H, suffix) shared across all sequences; the suffix is encoded by domain positions.
class SuffixSolver {
 public:
  SuffixSolver(const std::vector<NodeId>& domain, Counter& c) : domain_(domain), c_(c) {}

  int solve(const VersionSpace& vs, const std::vector<std::uint16_t>& seq, std::size_t i) {
    if (i >= seq.size()) return 0;
    Key key{std::vector<std::uint16_t>(seq.begin() + static_cast<std::ptrdiff_t>(i), seq.end()), vs.alive()};
    if (auto it = memo_.find(key); it != memo_.end()) {
      c_.hit();
      return it->second;
    }
    c_.node();
    const int v =
        round_value(vs, domain_[seq[i]], [&](const VersionSpace& next) { return solve(next, seq, i + 1); });
    memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  struct Key {
    std::vector<std::uint16_t> suffix;
    IndexSet alive;
    bool operator==(const Key&) const = default;
  };
  struct Hash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = k.alive.hash();
      for (std::uint16_t p : k.suffix) h = h * 1000003u + p;
      return h;
    }
  };
  const std::vector<NodeId>& domain_;
  Counter& c_;
  std::unordered_map<Key, int, Hash> memo_;
};

}  // namespace

int trans_value(const ClassPtr& cls, std::size_t n, const OracleBudget& budget, OracleStats* stats) {
  check_class(cls, budget);
  check_rounds(n, budget);
  if (n == 0) return 0;
  const std::vector<NodeId> domain = cls->domain();
  if (domain.size() > budget.max_domain) throw BudgetExceeded("oracle: domain exceeds budget");
  if (domain.empty()) return 0;
  Counter c(budget, stats);
  SuffixSolver s(domain, c);
  const VersionSpace root(cls);
  std::vector<std::uint16_t> seq(n, 0);
  int best = 0;
  // odometer over domain^n
  while (true) {
    best = std::max(best, s.solve(root, seq, 0));
    if (best == static_cast<int>(n)) break;
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++seq[k] < domain.size()) break;
      seq[k] = 0;
      if (k == 0) return best;
    }
  }
  return best;
}

namespace {

class StdSolver {
 public:
  StdSolver(const std::vector<NodeId>& domain, Counter& c, bool memo) : domain_(domain), c_(c), memo_on_(memo) {}

  int solve(const VersionSpace& vs, std::size_t left) {
    if (left == 0 || vs.size() <= 1) return 0;
    std::pair<std::size_t, IndexSet> key{left, IndexSet{}};
    if (memo_on_) {
      key.second = vs.alive();
      if (auto it = memo_.find(key); it != memo_.end()) {
        c_.hit();
        return it->second;
      }
    }
    c_.node();
    int best = 0;
    for (NodeId x : domain_) {
      best = std::max(best, round_value(vs, x, [&](const VersionSpace& next) { return solve(next, left - 1); }));
      if (best == static_cast<int>(left)) break;
    }
    if (memo_on_) memo_.emplace(std::move(key), best);
    return best;
  }

 private:
  const std::vector<NodeId>& domain_;
  Counter& c_;
  bool memo_on_;
  std::unordered_map<std::pair<std::size_t, IndexSet>, int, KeyHash> memo_;
};

}  // namespace

int std_value(const ClassPtr& cls, std::size_t n, const OracleBudget& budget, OracleStats* stats, bool memo) {
  check_class(cls, budget);
  check_rounds(n, budget);
  const std::vector<NodeId> domain = cls->domain();
  if (domain.size() > budget.max_domain) throw BudgetExceeded("oracle: domain exceeds budget");
  Counter c(budget, stats);
  StdSolver s(domain, c, memo);
  return s.solve(VersionSpace(cls), n);
}

namespace {

class ForcedSolver {
 public:
  ForcedSolver(std::size_t n, Counter& c) : n_(n), c_(c) {}

  std::size_t solve(const TransductiveAdversary& a, std::size_t t) {
    if (t >= n_) return 0;
    std::optional<std::string> key = a.state_key();
    if (key) {
      key = std::to_string(t) + "|" + *key;
      if (auto it = memo_.find(*key); it != memo_.end()) {
        c_.hit();
        return it->second;
      }
    }
    c_.node();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (Bit yh : {Bit{0}, Bit{1}}) {
      auto next = a.clone();
      const Bit y = next->label(t, yh);
      if (probe_label(a, t, yh) != y) throw ProbeNondeterminism("adversary answered inconsistently");
      const std::size_t here = yh != y ? 1 : 0;
      if (here >= best) continue;
      best = std::min(best, here + solve(*next, t + 1));
    }
    if (key) memo_.emplace(std::move(*key), best);
    return best;
  }

 private:
  std::size_t n_;
  Counter& c_;
  std::unordered_map<std::string, std::size_t> memo_;
};

}  // namespace

std::size_t forced_mistakes(const TransductiveAdversary& adv, const OracleBudget& budget, OracleStats* stats) {
  Counter c(budget, stats);
  ForcedSolver s(adv.sequence().size(), c);
  return s.solve(adv, 0);
}

}  // namespace tonline
