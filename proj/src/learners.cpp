#include "tonline/learners.hpp"

#include <algorithm>

#include "tonline/errors.hpp"

namespace tonline {

Bit halving_predict(const VersionSpace& vs, NodeId x) {
  const std::uint64_t n = vs.size();
  if (n == 0) return 0;
  return 2 * vs.count_ones(x) >= n ? 1 : 0;
}

VersionSpace halving_update(const VersionSpace& vs, NodeId x, Bit y) { return vs.restrict(x, y); }

Bit soa_predict(const VersionSpace& vs, std::span<const NodeId> domain, NodeId x, const LdimBudget& budget) {
  const int l0 = ldim(vs.restrict(x, 0), domain, budget);
  const int l1 = ldim(vs.restrict(x, 1), domain, budget);
  return l1 >= l0 ? 1 : 0;
}

SoaLearner::SoaLearner(ClassPtr cls, LdimBudget budget) : vs_(cls), domain_(cls->domain()), budget_(budget) {}

namespace {

class ConstantLearner final : public Learner {
 public:
  explicit ConstantLearner(Bit b) : b_(b) {}
  std::string name() const override { return b_ ? "one" : "zero"; }
  Bit predict(std::size_t, NodeId) override { return b_; }
  void observe(std::size_t, NodeId, Bit) override {}
  std::unique_ptr<Learner> clone() const override { return std::make_unique<ConstantLearner>(*this); }

 private:
  Bit b_;
};

class RandomLearner final : public Learner {
 public:
  explicit RandomLearner(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  Bit predict(std::size_t, NodeId) override { return static_cast<Bit>(rng_() >> 63); }
  void observe(std::size_t, NodeId, Bit) override {}
  std::unique_ptr<Learner> clone() const override { return std::make_unique<RandomLearner>(*this); }

 private:
  std::mt19937_64 rng_;
};

class LazyConsistentLearner final : public Learner {
 public:
  explicit LazyConsistentLearner(ClassPtr cls) : vs_(std::move(cls)) {}
  std::string name() const override { return "lazy"; }
  Bit predict(std::size_t, NodeId x) override { return halving_predict(vs_, x); }
  void observe(std::size_t, NodeId x, Bit y) override { vs_ = vs_.restrict(x, y); }
  std::unique_ptr<Learner> clone() const override { return std::make_unique<LazyConsistentLearner>(*this); }

 private:
  VersionSpace vs_;
};

}  // namespace

std::unique_ptr<Learner> make_baseline(BaselineKind kind, const ClassPtr& cls, std::uint64_t seed) {
  switch (kind) {
    case BaselineKind::AlwaysZero:
      return std::make_unique<ConstantLearner>(0);
    case BaselineKind::AlwaysOne:
      return std::make_unique<ConstantLearner>(1);
    case BaselineKind::SeededRandom:
      return std::make_unique<RandomLearner>(seed);
    case BaselineKind::LazyConsistent:
      return std::make_unique<LazyConsistentLearner>(cls);
  }
  throw std::invalid_argument("unknown baseline");
}

// ---- experts ----

namespace {

std::size_t count_b_desc(const std::vector<NodeId>& S, NodeId x, Bit b) {
  return static_cast<std::size_t>(
      std::count_if(S.begin(), S.end(), [&](NodeId v) { return is_b_descendant(x, b, v); }));
}

}  // namespace

ExpertPrediction expert_predict_detail(const ExpertState& e, NodeId x, std::uint64_t halving_threshold) {
  if (e.H.size() <= halving_threshold) return {halving_predict(e.H, x), PredictBranch::Halving};
  if (x != e.u && is_ancestor(x, e.u)) return {e.u.bit(x.depth() + 1), PredictBranch::OnPathDescendant};
  const std::size_t ones = count_b_desc(e.S, x, 1);
  return {static_cast<Bit>(3 * ones > e.S.size() ? 1 : 0), PredictBranch::Majority};
}

Bit expert_prediction(const ExpertState& e, NodeId x, std::uint64_t halving_threshold) {
  return expert_predict_detail(e, x, halving_threshold).label;
}

ExpertState expert_basic_update(const ExpertState& e, NodeId x, Bit y) {
  ExpertState out = e;
  out.H = halving_update(e.H, x, y);
  return out;
}

ExtendedUpdate expert_extended_update(const ExpertState& e, NodeId x, Bit y, std::uint64_t halving_threshold) {
  ExtendedUpdate r;
  if (e.H.size() <= halving_threshold) {
    r.which = UpdateCase::Halving;
    r.experts.push_back(e);
    return r;
  }
  const Bit wrong = static_cast<Bit>(1 - y);
  const std::size_t n_wrong = count_b_desc(e.S, x, wrong);
  if (3 * n_wrong > e.S.size()) {
    r.which = UpdateCase::ShrinkS;
    ExpertState s = e;
    std::erase_if(s.S, [&](NodeId v) { return is_b_descendant(x, wrong, v); });
    r.experts.push_back(std::move(s));
    return r;
  }
  r.which = UpdateCase::Split;
  ExpertState off = e;
  off.H = e.H.restrict_path(x, false);
  ExpertState on = e;
  std::erase_if(on.S, [&](NodeId v) { return !(is_b_descendant(x, 0, v) || is_b_descendant(x, 1, v)); });
  if (is_ancestor(e.u, x)) on.u = x;
  on.H = e.H.restrict_path(x, true);
  r.experts.push_back(std::move(off));
  r.experts.push_back(std::move(on));
  return r;
}

std::uint64_t default_halving_threshold(int d) { return std::uint64_t{1} << ceil_sqrt(d); }

std::size_t default_tmax(int d, std::size_t n) {
  return std::min<std::size_t>(n, std::size_t{2} << ceil_sqrt(d));
}

TransductiveLearner::TransductiveLearner(ClassPtr cls, TransductiveParams params)
    : cls_(std::move(cls)), params_(params) {
  threshold_ = params_.halving_threshold.value_or(default_halving_threshold(cls_->depth()));
}

void TransductiveLearner::on_sequence(std::span<const NodeId> sequence) {
  seq_.assign(sequence.begin(), sequence.end());
  tmax_ = params_.tmax ? std::min(*params_.tmax, seq_.size()) : default_tmax(cls_->depth(), seq_.size());
  ExpertState e;
  e.S.assign(seq_.begin(), seq_.begin() + static_cast<std::ptrdiff_t>(tmax_));
  std::sort(e.S.begin(), e.S.end());
  e.S.erase(std::unique(e.S.begin(), e.S.end()), e.S.end());
  e.u = NodeId::root();
  e.H = VersionSpace(cls_);
  e.w = Dyadic::one();
  e.id = 0;
  e.parent = 0;
  pool_.clear();
  pool_.push_back(std::move(e));
  next_id_ = 1;
  max_pool_ = 1;
  predicted_round_.reset();
  stats_.clear();
}

Bit TransductiveLearner::predict(std::size_t t, NodeId x) {
  preds_.resize(pool_.size());
  Dyadic total, ones;
  for (std::size_t i = 0; i < pool_.size(); ++i) {
    preds_[i] = expert_prediction(pool_[i], x, threshold_);
    total += pool_[i].w;
    if (preds_[i]) ones += pool_[i].w;
  }
  predicted_round_ = t;
  last_y_hat_ = (ones * 2 >= total) ? 1 : 0;
  return last_y_hat_;
}

void TransductiveLearner::observe(std::size_t t, NodeId x, Bit y) {
  if (predicted_round_ != t) predict(t, x);
  ExpertRoundStats st;
  if (instrumented_) {
    st.round = t;
    st.pool_before = pool_.size();
    st.weight_before = total_weight();
    st.y_hat = last_y_hat_;
    st.y = y;
  }
  std::vector<ExpertState> next;
  next.reserve(pool_.size() + 4);
  for (std::size_t i = 0; i < pool_.size(); ++i) {
    ExpertState e = expert_basic_update(pool_[i], x, y);
    if (preds_[i] == y) {
      next.push_back(std::move(e));
      continue;
    }
    ExtendedUpdate up = expert_extended_update(e, x, y, threshold_);
    const std::int64_t shift = up.experts.size() == 1 ? 1 : 2;
    for (std::size_t k = 0; k < up.experts.size(); ++k) {
      ExpertState& ne = up.experts[k];
      ne.w = pool_[i].w.shifted(shift);
      ne.mistakes = pool_[i].mistakes + 1;
      if (up.which == UpdateCase::Split) {
        ne.parent = pool_[i].id;
        ne.id = next_id_++;
        ne.trace.push_back({t, k == 1});
      }
      next.push_back(std::move(ne));
    }
    if (instrumented_) {
      st.splits += up.which == UpdateCase::Split ? 1 : 0;
      st.shrinks += up.which == UpdateCase::ShrinkS ? 1 : 0;
    }
  }
  if (next.size() > params_.expert_cap) {
    throw ExpertCapExceeded("expert pool reached " + std::to_string(next.size()) + " at round " +
                            std::to_string(t + 1));
  }
  pool_ = std::move(next);
  max_pool_ = std::max(max_pool_, pool_.size());
  predicted_round_.reset();

  if (!instrumented_) return;
  st.pool_after = pool_.size();
  st.weight_after = total_weight();
  if (target_path_) {
    const auto& path = *target_path_;
    const ExpertState* star = nullptr;
    for (const ExpertState& e : pool_) {
      if (assumption_consistent(e, seq_, path)) {
        ++st.consistent;
        star = &e;
      }
    }
    if (st.consistent == 1) {
      const NodeId leaf = path.back();
      st.consistent_u_on_path = is_ancestor(star->u, leaf);
      bool ok = true;
      for (std::size_t s = t + 1; s < tmax_; ++s) {
        const NodeId v = seq_[s];
        if (!is_ancestor(v, leaf) || is_ancestor(v, star->u)) continue;
        if (!std::binary_search(star->S.begin(), star->S.end(), v)) ok = false;
      }
      st.consistent_s_ok = ok;
    }
  }
  stats_.push_back(std::move(st));
}

void TransductiveLearner::instrument(std::optional<std::vector<NodeId>> target_path) {
  instrumented_ = true;
  target_path_ = std::move(target_path);
}

Dyadic TransductiveLearner::total_weight() const {
  Dyadic w;
  for (const ExpertState& e : pool_) w += e.w;
  return w;
}

const ExpertState& TransductiveLearner::best_expert() const {
  const ExpertState* best = &pool_.front();
  for (const ExpertState& e : pool_) {
    if (e.w > best->w || (e.w == best->w && e.id < best->id)) best = &e;
  }
  return *best;
}

bool TransductiveLearner::assumption_consistent(const ExpertState& e, std::span<const NodeId> sequence,
                                                std::span<const NodeId> target_path) {
  const NodeId leaf = target_path.back();
  for (const Assumption& a : e.trace) {
    if (is_ancestor(sequence[a.round], leaf) != a.on_path) return false;
  }
  return true;
}

bool mw_bound_holds(std::size_t mistakes, const Dyadic& w_best, const Dyadic& w0) {
  using Int = Dyadic::Int;
  const Int four = boost::multiprecision::pow(Int(4), static_cast<unsigned>(mistakes));
  const Int three = boost::multiprecision::pow(Int(3), static_cast<unsigned>(mistakes));
  return Dyadic(w_best.numerator() * four, w_best.exponent()) <= Dyadic(w0.numerator() * three, w0.exponent());
}

std::unique_ptr<Learner> make_learner(const std::string& name, const ClassPtr& cls, std::uint64_t seed,
                                      const TransductiveParams& params) {
  if (name == "halving") return std::make_unique<HalvingLearner>(cls);
  if (name == "soa") return std::make_unique<SoaLearner>(cls);
  if (name == "transductive") return std::make_unique<TransductiveLearner>(cls, params);
  if (name == "zero") return make_baseline(BaselineKind::AlwaysZero, cls, seed);
  if (name == "one") return make_baseline(BaselineKind::AlwaysOne, cls, seed);
  if (name == "random") return make_baseline(BaselineKind::SeededRandom, cls, seed);
  if (name == "lazy") return make_baseline(BaselineKind::LazyConsistent, cls, seed);
  throw std::invalid_argument("unknown learner '" + name + "'");
}

}  // namespace tonline
