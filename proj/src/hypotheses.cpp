#include "tonline/hypotheses.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

#include "tonline/errors.hpp"

namespace tonline {

namespace {

constexpr int kMaxMaterializeDepth = 20;

std::size_t table_words(int depth) {
  const std::uint64_t nodes = (std::uint64_t{1} << (depth + 1)) - 1;
  return static_cast<std::size_t>((nodes + 63) / 64);
}

void check_depth(int depth) {
  if (depth < 0 || depth > kMaxTreeDepth) {
    throw DepthOverflow("tree depth " + std::to_string(depth) + " outside [0, 62]");
  }
}

NodeId path_end(const ExplicitHypothesis& h) {
  NodeId u = NodeId::root();
  for (int i = 0; i < h.depth(); ++i) u = NodeId::from_code((u.code() << 1) | h.eval(u));
  return u;
}

}  // namespace

int ceil_sqrt(int d) {
  if (d <= 0) return 0;
  int r = static_cast<int>(std::sqrt(static_cast<double>(d)));
  while (r * r < d) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= d) --r;
  return r;
}

int default_bias_exp(int d) {
  const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
  return std::max(1, s);
}

ExplicitHypothesis::ExplicitHypothesis(int depth, std::vector<std::uint64_t> label_words)
    : depth_(depth), words_(std::move(label_words)) {
  check_depth(depth);
  if (depth > kMaxMaterializeDepth) throw BudgetExceeded("explicit table deeper than 20");
  if (words_.size() != table_words(depth)) throw ParseError("label table has the wrong size");
}

ExplicitHypothesis::ExplicitHypothesis(int depth) : depth_(depth) {
  check_depth(depth);
  if (depth > kMaxMaterializeDepth) throw BudgetExceeded("explicit table deeper than 20");
  words_.assign(table_words(depth), 0);
}

Bit ExplicitHypothesis::eval(NodeId x) const {
  const std::uint64_t i = x.bfs_index();
  return static_cast<Bit>((words_[i >> 6] >> (i & 63)) & 1U);
}

void ExplicitHypothesis::set(NodeId x, Bit y) {
  const std::uint64_t i = x.bfs_index();
  const std::uint64_t m = std::uint64_t{1} << (i & 63);
  if (y) {
    words_[i >> 6] |= m;
  } else {
    words_[i >> 6] &= ~m;
  }
}

Bit LazyHypothesis::eval(NodeId x) const {
  const int k = x.depth();
  if ((branch >> (depth + 1 - k)) == x.bits()) return branch_bit(k + 1);
  return biased_bit(prf(seed, branch_code(), x.code()), bias_exp);
}

std::string LazyHypothesis::branch_string() const {
  std::string s(static_cast<std::size_t>(depth + 1), '0');
  for (int i = 1; i <= depth + 1; ++i) {
    if (branch_bit(i)) s[static_cast<std::size_t>(i - 1)] = '1';
  }
  return s;
}

Bit eval(const Hypothesis& h, NodeId x) {
  return std::visit([x](const auto& v) { return v.eval(x); }, h);
}

int depth_of(const Hypothesis& h) {
  return std::visit(
      [](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, LazyHypothesis>) {
          return v.depth;
        } else {
          return v.depth();
        }
      },
      h);
}

std::vector<NodeId> path_of(const Hypothesis& h) {
  const int d = depth_of(h);
  std::vector<NodeId> path;
  path.reserve(static_cast<std::size_t>(d) + 1);
  NodeId u = NodeId::root();
  path.push_back(u);
  for (int i = 0; i < d; ++i) {
    u = NodeId::from_code((u.code() << 1) | eval(h, u));
    path.push_back(u);
  }
  return path;
}

std::string path_labels(const Hypothesis& h) {
  std::string s;
  for (NodeId u : path_of(h)) s.push_back(eval(h, u) ? '1' : '0');
  return s;
}

ExplicitHypothesis materialize(const Hypothesis& h) {
  if (const auto* e = std::get_if<ExplicitHypothesis>(&h)) return *e;
  const auto& lazy = std::get<LazyHypothesis>(h);
  if (lazy.depth > kMaxMaterializeDepth) throw BudgetExceeded("materialize refuses d > 20");
  ExplicitHypothesis out(lazy.depth);
  const std::uint64_t n = (std::uint64_t{1} << (lazy.depth + 1)) - 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    const NodeId x = NodeId::from_bfs_index(i);
    out.set(x, lazy.eval(x));
  }
  return out;
}

ClassPtr HypothesisClass::random(int depth, int bias_exp, std::uint64_t seed) {
  if (depth < 1 || depth > kMaxTreeDepth - 1) {
    throw DepthOverflow("random class depth must lie in [1, 61]");
  }
  if (bias_exp < 1) throw std::invalid_argument("bias exponent must be positive");
  auto cls = std::shared_ptr<HypothesisClass>(new HypothesisClass());
  cls->depth_ = depth;
  cls->size_ = std::uint64_t{1} << (depth + 1);
  cls->generator_ = RandomClassSpec{depth, bias_exp, seed};
  cls->key_ = prf_key(seed);
  return cls;
}

ClassPtr HypothesisClass::explicit_class(int depth, std::vector<ExplicitHypothesis> members,
                                         std::optional<std::vector<NodeId>> domain) {
  check_depth(depth);
  if (members.empty()) throw std::invalid_argument("a class needs at least one member");
  for (const auto& h : members) {
    if (h.depth() != depth) throw std::invalid_argument("member depth differs from class depth");
  }
  if (domain) {
    for (NodeId x : *domain) {
      if (x.depth() > depth) throw DepthOverflow("domain point deeper than the tree");
    }
  }
  auto cls = std::shared_ptr<HypothesisClass>(new HypothesisClass());
  cls->depth_ = depth;
  cls->size_ = members.size();
  cls->leaves_.reserve(members.size());
  for (const auto& h : members) cls->leaves_.push_back(path_end(h));
  cls->explicit_ = std::move(members);
  cls->domain_ = std::move(domain);
  return cls;
}

ClassPtr HypothesisClass::from_point_functions(int depth, int k, std::span<const std::uint32_t> masks) {
  check_depth(depth);
  if (k < 0 || k > 32 || static_cast<std::uint64_t>(k) > (std::uint64_t{1} << (depth + 1)) - 1) {
    throw std::invalid_argument("too many points for the tree");
  }
  std::vector<NodeId> domain;
  for (int i = 0; i < k; ++i) domain.push_back(NodeId::from_bfs_index(static_cast<std::uint64_t>(i)));
  std::vector<ExplicitHypothesis> members;
  members.reserve(masks.size());
  for (std::uint32_t m : masks) {
    ExplicitHypothesis h(depth);
    for (int i = 0; i < k; ++i) h.set(domain[static_cast<std::size_t>(i)], static_cast<Bit>((m >> i) & 1U));
    members.push_back(std::move(h));
  }
  return explicit_class(depth, std::move(members), std::move(domain));
}

ClassPtr HypothesisClass::full_on_points(int k) {
  if (k < 0 || k > 16) throw std::invalid_argument("full class limited to 16 points");
  int depth = 0;
  while ((std::uint64_t{1} << (depth + 1)) - 1 < static_cast<std::uint64_t>(k)) ++depth;
  std::vector<std::uint32_t> masks(std::size_t{1} << k);
  for (std::size_t m = 0; m < masks.size(); ++m) masks[m] = static_cast<std::uint32_t>(m);
  return from_point_functions(depth, k, masks);
}

Hypothesis HypothesisClass::member(std::uint64_t i) const {
  if (i >= size_) throw std::out_of_range("member index out of range");
  if (generator_) return LazyHypothesis{depth_, i, generator_->seed, generator_->bias_exp};
  return explicit_[i];
}

namespace {

// 64 off-path labels for branch codes top|(base..base+63): 1 iff the low bits of the hash vanish.
std::uint64_t hash_word_scalar(std::uint64_t key, std::uint64_t top, std::uint64_t base, std::uint64_t node_code,
                               std::uint64_t low_mask) {
  std::uint64_t out = 0;
  for (std::uint64_t b = 0; b < 64; ++b) {
    const std::uint64_t h = prf_keyed(key, top | (base + b), node_code);
    out |= static_cast<std::uint64_t>((h & low_mask) == 0) << b;
  }
  return out;
}

#if defined(__x86_64__) && defined(__GNUC__)
__attribute__((target("avx512f,avx512dq"))) inline __m512i mix64_x8(__m512i z) {
  z = _mm512_mullo_epi64(_mm512_xor_si512(z, _mm512_srli_epi64(z, 30)),
                         _mm512_set1_epi64(static_cast<long long>(0xbf58476d1ce4e5b9ULL)));
  z = _mm512_mullo_epi64(_mm512_xor_si512(z, _mm512_srli_epi64(z, 27)),
                         _mm512_set1_epi64(static_cast<long long>(0x94d049bb133111ebULL)));
  return _mm512_xor_si512(z, _mm512_srli_epi64(z, 31));
}

__attribute__((target("avx512f,avx512dq"))) std::uint64_t hash_word_avx512(std::uint64_t key, std::uint64_t top,
                                                                            std::uint64_t base,
                                                                            std::uint64_t node_code,
                                                                            std::uint64_t low_mask) {
  const __m512i lane = _mm512_set_epi64(7, 6, 5, 4, 3, 2, 1, 0);
  const __m512i k = _mm512_set1_epi64(static_cast<long long>(key));
  const __m512i g = _mm512_set1_epi64(static_cast<long long>(kGolden));
  const __m512i nc = _mm512_set1_epi64(static_cast<long long>(node_code));
  const __m512i lm = _mm512_set1_epi64(static_cast<long long>(low_mask));
  const __m512i t = _mm512_set1_epi64(static_cast<long long>(top));
  std::uint64_t out = 0;
  for (int j = 0; j < 8; ++j) {
    const __m512i idx =
        _mm512_or_si512(t, _mm512_add_epi64(_mm512_set1_epi64(static_cast<long long>(base + 8 * j)), lane));
    const __m512i h = mix64_x8(_mm512_xor_si512(_mm512_add_epi64(mix64_x8(_mm512_xor_si512(k, idx)), g), nc));
    out |= static_cast<std::uint64_t>(_mm512_testn_epi64_mask(h, lm)) << (8 * j);
  }
  return out;
}

const bool kHaveAvx512 = __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512dq");
#else
const bool kHaveAvx512 = false;
#endif

std::uint64_t hash_word(std::uint64_t key, std::uint64_t top, std::uint64_t base, std::uint64_t node_code,
                        std::uint64_t low_mask) {
#if defined(__x86_64__) && defined(__GNUC__)
  if (kHaveAvx512) return hash_word_avx512(key, top, base, node_code, low_mask);
#endif
  return hash_word_scalar(key, top, base, node_code, low_mask);
}

// Bits of word w (indices 64w..64w+63) inside [lo, hi).
std::uint64_t range_mask(std::uint64_t w, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t a = w * 64;
  const std::uint64_t b = a + 64;
  if (hi <= a || lo >= b) return 0;
  const std::uint64_t from = std::max(lo, a) - a;
  const std::uint64_t to = std::min(hi, b) - a;
  const std::uint64_t upto = to == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << to) - 1;
  return upto & ~((std::uint64_t{1} << from) - 1);
}

}  // namespace

std::uint64_t HypothesisClass::label_word(std::uint64_t w, NodeId x) const {
  if (!generator_) {
    std::uint64_t out = 0;
    const std::uint64_t end = std::min<std::uint64_t>(64, size_ > w * 64 ? size_ - w * 64 : 0);
    for (std::uint64_t b = 0; b < end; ++b) out |= static_cast<std::uint64_t>(explicit_[w * 64 + b].eval(x)) << b;
    return out;
  }
  const int d = depth_;
  const int s = generator_->bias_exp;
  const std::uint64_t low_mask = s >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << s) - 1;
  std::uint64_t out = hash_word(key_, std::uint64_t{1} << (d + 1), w * 64, x.code(), low_mask);
  const int shift = d + 1 - x.depth();
  const std::uint64_t lo = x.bits() << shift;
  const std::uint64_t len = std::uint64_t{1} << shift;
  const std::uint64_t path = range_mask(w, lo, lo + len);
  if (path != 0) out = (out & ~path) | range_mask(w, lo + len / 2, lo + len);
  return out;
}

bool HypothesisClass::on_path(std::uint64_t i, NodeId x) const {
  if (x.depth() > depth_) return false;
  if (generator_) return (i >> (depth_ + 1 - x.depth())) == x.bits();
  return is_ancestor(x, leaves_[i]);
}

std::vector<NodeId> HypothesisClass::domain() const {
  if (domain_) return *domain_;
  if (depth_ > kMaxMaterializeDepth) throw BudgetExceeded("domain of B_d too large to list");
  return Tree(depth_).nodes();
}

std::string HypothesisClass::descriptor() const {
  std::ostringstream os;
  if (generator_) {
    os << "lemma:d=" << depth_ << ",bias=" << generator_->bias_exp << ",seed=" << generator_->seed;
  } else {
    os << "explicit:d=" << depth_ << ",size=" << size_;
    if (domain_) os << ",points=" << domain_->size();
  }
  return os.str();
}

ClassPtr build_random_class(int depth, int bias_exp, std::uint64_t seed) {
  return HypothesisClass::random(depth, bias_exp, seed);
}

VersionSpace::VersionSpace(ClassPtr cls) : cls_(std::move(cls)) {
  if (cls_->size() > (std::uint64_t{1} << 32)) throw BudgetExceeded("class too large for a version space");
  alive_ = std::make_shared<const IndexSet>(IndexSet::full(cls_->size()));
}

VersionSpace::VersionSpace(ClassPtr cls, IndexSet alive)
    : cls_(std::move(cls)), alive_(std::make_shared<const IndexSet>(std::move(alive))) {
  if (alive_->universe() != cls_->size()) throw std::invalid_argument("alive set universe mismatch");
}

namespace {

// Sparse words are cheaper bit by bit than a full 64-lane label word.
constexpr int kWordThreshold = 12;

std::uint64_t labels_in(const HypothesisClass& c, std::uint64_t w, std::uint64_t word, NodeId x) {
  if (std::popcount(word) >= kWordThreshold) return c.label_word(w, x);
  std::uint64_t out = 0;
  for (std::uint64_t rest = word; rest != 0; rest &= rest - 1) {
    const int b = std::countr_zero(rest);
    if (c.eval(w * 64 + static_cast<std::uint64_t>(b), x)) out |= std::uint64_t{1} << b;
  }
  return out;
}

IndexSet label_filter(const HypothesisClass& c, const IndexSet& alive, NodeId x, Bit y) {
  if (alive.is_dense()) {
    return alive.filter_words([&](std::size_t w, std::uint64_t word) {
      const std::uint64_t ones = labels_in(c, w, word, x);
      return y ? ones : ~ones;
    });
  }
  return alive.filter([&](std::uint64_t i) { return c.eval(i, x) == y; });
}

// Lazy members with x on their path form the index range [lo, lo + len).
std::pair<std::uint64_t, std::uint64_t> lazy_path_range(int d, NodeId x) {
  const int shift = d + 1 - x.depth();
  return {x.bits() << shift, std::uint64_t{1} << shift};
}

}  // namespace

std::uint64_t VersionSpace::count_ones(NodeId x) const {
  const HypothesisClass& c = *cls_;
  const IndexSet& a = *alive_;
  if (a.is_dense()) {
    std::uint64_t n = 0;
    const auto& words = a.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (words[w] != 0) n += static_cast<std::uint64_t>(std::popcount(labels_in(c, w, words[w], x) & words[w]));
    }
    return n;
  }
  return a.count_if([&](std::uint64_t i) { return c.eval(i, x) == 1; });
}

VersionSpace VersionSpace::restrict(NodeId x, Bit y) const {
  IndexSet next = label_filter(*cls_, *alive_, x, y);
  if (next.size() == alive_->size()) return *this;
  return VersionSpace(cls_, std::move(next));
}

std::pair<VersionSpace, VersionSpace> VersionSpace::split(NodeId x) const {
  IndexSet ones = label_filter(*cls_, *alive_, x, 1);
  if (ones.size() == alive_->size()) return {VersionSpace(cls_, IndexSet::none(alive_->universe())), *this};
  if (ones.empty()) return {*this, VersionSpace(cls_, std::move(ones))};
  IndexSet zeros = alive_->minus(ones);
  return {VersionSpace(cls_, std::move(zeros)), VersionSpace(cls_, std::move(ones))};
}

VersionSpace VersionSpace::restrict_path(NodeId x, bool on) const {
  const HypothesisClass& c = *cls_;
  IndexSet next = alive_->filter([&](std::uint64_t i) { return c.on_path(i, x) == on; });
  if (next.size() == alive_->size()) return *this;
  return VersionSpace(cls_, std::move(next));
}

bool VersionSpace::all_on_path(NodeId x) const {
  const HypothesisClass& c = *cls_;
  if (alive_->empty()) return true;
  if (c.is_lazy()) {
    const auto [lo, len] = lazy_path_range(c.depth(), x);
    return alive_->first() >= lo && alive_->last() < lo + len;
  }
  return alive_->count_if([&](std::uint64_t i) { return !c.on_path(i, x); }) == 0;
}

VersionSpace restrict(const VersionSpace& vs, NodeId x, Bit y) { return vs.restrict(x, y); }

namespace {

class LdimSolver {
 public:
  LdimSolver(const HypothesisClass& cls, std::span<const NodeId> domain) : cls_(cls), domain_(domain) {}

  int solve(const IndexSet& h) {
    const std::uint64_t n = h.size();
    if (n == 0) return -1;
    if (n == 1) return 0;
    if (auto it = memo_.find(h); it != memo_.end()) return it->second;
    const int upper = std::bit_width(n) - 1;
    int best = 0;
    for (NodeId x : domain_) {
      const std::uint64_t ones = h.count_if([&](std::uint64_t i) { return cls_.eval(i, x) == 1; });
      if (ones == 0 || ones == n) continue;
      const std::uint64_t small = std::min(ones, n - ones);
      if (static_cast<int>(std::bit_width(small)) <= best) continue;  // 1 + floor(log2 small) cannot beat best
      const IndexSet h0 = h.filter([&](std::uint64_t i) { return cls_.eval(i, x) == 0; });
      const IndexSet h1 = h.filter([&](std::uint64_t i) { return cls_.eval(i, x) == 1; });
      const int l0 = solve(h0);
      if (l0 + 1 <= best) continue;
      const int l1 = solve(h1);
      best = std::max(best, 1 + std::min(l0, l1));
      if (best == upper) break;
    }
    memo_.emplace(h, best);
    return best;
  }

 private:
  const HypothesisClass& cls_;
  std::span<const NodeId> domain_;
  std::unordered_map<IndexSet, int> memo_;
};

}  // namespace

int ldim(const VersionSpace& vs, std::span<const NodeId> domain, const LdimBudget& budget) {
  if (vs.size() > budget.max_alive) throw BudgetExceeded("ldim: too many live hypotheses");
  if (domain.size() > budget.max_domain) throw BudgetExceeded("ldim: domain too large");
  LdimSolver solver(vs.hypothesis_class(), domain);
  return solver.solve(vs.alive());
}

int ldim(const ClassPtr& cls, const LdimBudget& budget) {
  if (cls->size() > budget.max_alive) throw BudgetExceeded("ldim: too many live hypotheses");
  const std::vector<NodeId> dom = cls->domain();
  return ldim(VersionSpace(cls), dom, budget);
}

bool verify_counterexample(const HypothesisClass& cls, const Counterexample& cx, Bit target) {
  for (std::uint64_t i : cx.hypotheses) {
    if (i >= cls.size()) return false;
    for (NodeId x : cx.points) {
      if (x.depth() > cls.depth()) return false;
      if (cls.on_path(i, x) || cls.eval(i, x) != target) return false;
    }
  }
  return true;
}

std::optional<Counterexample> falsify_class_properties(const HypothesisClass& cls, std::size_t size_h,
                                                        std::size_t size_x, Bit target, std::size_t trials,
                                                        std::uint64_t seed) {
  if (size_h > cls.size()) return std::nullopt;
  std::mt19937_64 rng(seed);
  const int d = cls.depth();
  std::optional<std::vector<NodeId>> listed;
  if (!cls.is_lazy() || d <= 12) listed = cls.domain();

  auto random_node = [&]() {
    if (listed) {
      std::uniform_int_distribution<std::size_t> pick(0, listed->size() - 1);
      return (*listed)[pick(rng)];
    }
    std::uniform_int_distribution<int> depth(0, d);
    const int k = depth(rng);
    return NodeId::from_bits(k, rng());
  };

  for (std::size_t t = 0; t < trials; ++t) {
    std::unordered_set<std::uint64_t> chosen;
    std::uniform_int_distribution<std::uint64_t> pick(0, cls.size() - 1);
    while (chosen.size() < size_h) chosen.insert(pick(rng));
    Counterexample cx;
    cx.hypotheses.assign(chosen.begin(), chosen.end());
    std::sort(cx.hypotheses.begin(), cx.hypotheses.end());

    std::unordered_set<std::uint64_t> seen;
    const std::size_t attempts = 64 * (size_x + 1);
    for (std::size_t a = 0; a < attempts && cx.points.size() < size_x; ++a) {
      const NodeId x = random_node();
      if (!seen.insert(x.code()).second) continue;
      bool ok = true;
      for (std::uint64_t i : cx.hypotheses) {
        if (cls.on_path(i, x) || cls.eval(i, x) != target) {
          ok = false;
          break;
        }
      }
      if (ok) cx.points.push_back(x);
    }
    if (cx.points.size() == size_x && verify_counterexample(cls, cx, target)) {
      std::sort(cx.points.begin(), cx.points.end());
      return cx;
    }
  }
  return std::nullopt;
}

ClassPropertyThresholds default_thresholds(int d) {
  const int r = ceil_sqrt(d);
  return {std::size_t{1} << r, static_cast<std::size_t>(r)};
}

void write_explicit_table(std::ostream& out, const HypothesisClass& cls) {
  const int d = cls.depth();
  if (d > kMaxMaterializeDepth) throw BudgetExceeded("table export refuses d > 20");
  const std::uint64_t nodes = (std::uint64_t{1} << (d + 1)) - 1;
  out << "d=" << d << '\n';
  std::string row;
  for (std::uint64_t i = 0; i < cls.size(); ++i) {
    const Hypothesis h = cls.member(i);
    row = path_labels(h);
    row.push_back(' ');
    for (std::uint64_t k = 0; k < nodes; ++k) row.push_back(eval(h, NodeId::from_bfs_index(k)) ? '1' : '0');
    out << row << '\n';
  }
}

ClassPtr read_explicit_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("d=", 0) != 0) throw ParseError("table: missing 'd=<d>' header");
  int d = 0;
  try {
    d = std::stoi(line.substr(2));
  } catch (const std::exception&) {
    throw ParseError("table: bad depth '" + line + "'");
  }
  check_depth(d);
  if (d > kMaxMaterializeDepth) throw BudgetExceeded("table depth above 20");
  const std::uint64_t nodes = (std::uint64_t{1} << (d + 1)) - 1;
  std::vector<ExplicitHypothesis> members;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw ParseError("table line " + std::to_string(lineno) + ": missing label bits");
    const std::string branch = line.substr(0, sp);
    const std::string labels = line.substr(sp + 1);
    if (labels.size() != nodes) {
      throw ParseError("table line " + std::to_string(lineno) + ": expected " + std::to_string(nodes) + " labels");
    }
    ExplicitHypothesis h(d);
    for (std::uint64_t k = 0; k < nodes; ++k) {
      const char c = labels[k];
      if (c != '0' && c != '1') throw ParseError("table line " + std::to_string(lineno) + ": bad label");
      h.set(NodeId::from_bfs_index(k), static_cast<Bit>(c - '0'));
    }
    if (path_labels(Hypothesis{h}) != branch) {
      throw ParseError("table line " + std::to_string(lineno) + ": branch string disagrees with labels");
    }
    members.push_back(std::move(h));
  }
  if (members.empty()) throw ParseError("table has no members");
  return HypothesisClass::explicit_class(d, std::move(members));
}

}  // namespace tonline
