#include "doctest.h"

#include <random>

#include "tonline/adversaries.hpp"
#include "tonline/errors.hpp"
#include "tonline/learners.hpp"
#include "tonline/oracle.hpp"
#include "tonline/seqmin.hpp"

using namespace tonline;

namespace {

std::vector<NodeId> points(std::size_t n) {
  std::vector<NodeId> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(NodeId::from_bfs_index(i % 31));
  return v;
}

std::size_t stars_in(const RigidTable& f, const std::string& h) {
  std::size_t s = 0;
  for (std::size_t k = 0; k < h.size(); ++k) s += f.at(h.substr(0, k)) == Symbol::Star ? 1 : 0;
  return s;
}

RigidTable random_table(std::mt19937_64& rng, std::size_t n, double p_star) {
  RigidTable f;
  f.n = n;
  std::vector<std::string> frontier{""};
  while (!frontier.empty()) {
    std::string h = frontier.back();
    frontier.pop_back();
    if (h.size() >= n) continue;
    const double u = static_cast<double>(rng() % 1000) / 1000.0;
    const Symbol s = u < p_star ? Symbol::Star : static_cast<Symbol>(rng() & 1U);
    f.entries[h] = s;
    if (s == Symbol::Star) {
      frontier.push_back(h + '0');
      frontier.push_back(h + '1');
    } else {
      frontier.push_back(h + symbol_char(s));
    }
  }
  return f;
}

// Adversary that answers differently each time it is copied.
class Flaky final : public TransductiveAdversary {
 public:
  explicit Flaky(std::vector<NodeId> s) : seq_(std::move(s)) {}
  std::string name() const override { return "flaky"; }
  const std::vector<NodeId>& sequence() const override { return seq_; }
  Bit label(std::size_t, Bit) override { return static_cast<Bit>((++*counter_) & 1U); }
  std::unique_ptr<TransductiveAdversary> clone() const override { return std::make_unique<Flaky>(*this); }

 private:
  std::vector<NodeId> seq_;
  std::shared_ptr<int> counter_ = std::make_shared<int>(0);
};

}  // namespace

TEST_CASE("rigidify examples") {
  auto seq = points(5);
  {
    ScriptedAdversary adv = ScriptedAdversary::fixed(seq, {1, 0, 0, 1, 1});
    RigidifyResult r = rigidify(adv, 3);
    CHECK(r.table.entries.size() == 5);
    const std::string h = "10011";
    for (std::size_t t = 0; t < 5; ++t) CHECK(r.table.at(h.substr(0, t)) == static_cast<Symbol>(h[t] - '0'));
  }
  {
    ScriptedAdversary adv = ScriptedAdversary::flip_first_k(seq, 1, {0, 0, 0, 0, 0});
    RigidifyResult r = rigidify(adv, 3);
    CHECK(r.table.at("") == Symbol::Star);
    CHECK(r.table.at("0") == Symbol::Zero);
    CHECK(r.table.at("1") == Symbol::Zero);
  }
  CHECK_THROWS_AS(rigidify(Flaky(seq), 2), ProbeNondeterminism);
  CHECK_THROWS_AS(forced_mistakes(Flaky(seq)), ProbeNondeterminism);
}

TEST_CASE("rigid wrapper: label depends only on history and prediction") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    auto cls = HypothesisClass::random(3, 1, rng());
    auto inner = make_transductive_adversary("greedy", cls, {}, rng(), 7);
    RigidifyResult r = rigidify(*inner, 8);
    // walk every reachable history with a live wrapper
    std::vector<RigidAdversary> stack{r.adversary};
    while (!stack.empty()) {
      RigidAdversary a = stack.back();
      stack.pop_back();
      const std::size_t t = a.history().size();
      if (t >= a.sequence().size()) continue;
      const Symbol f = r.table.at(a.history());
      for (Bit yh : {Bit{0}, Bit{1}}) {
        RigidAdversary b = a;
        const Bit y = b.label(t, yh);
        CHECK(y == (f == Symbol::Star ? 1 - yh : static_cast<Bit>(f)));
        if (f == Symbol::Star || yh == 0) stack.push_back(b);
      }
    }
    // same forced count as the inner adversary
    CHECK(forced_mistakes(r.adversary) == forced_mistakes(*inner));
  }
}

TEST_CASE("essential indices examples") {
  RigidTable star;
  star.n = 6;
  star.fallback = Symbol::Star;
  CHECK(essential_indices(star, 2) == std::vector<std::size_t>{0, 1});
  CHECK(essential_indices(star, 3) == std::vector<std::size_t>{0, 1, 2});
  RigidTable none;
  none.n = 4;
  none.fallback = Symbol::One;
  CHECK(essential_indices(none, 3).empty());
  // M = 1: only the first star on the forced path
  RigidTable f;
  f.n = 5;
  f.entries = {{"", Symbol::Zero}, {"0", Symbol::One}, {"01", Symbol::Star}, {"010", Symbol::Star},
               {"011", Symbol::Star}};
  f.fallback = Symbol::Zero;
  CHECK(essential_indices(f, 1) == std::vector<std::size_t>{2});
}

TEST_CASE("essential indices stay within 2^M - 1") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    RigidTable f = random_table(rng, n, 0.5);
    for (std::size_t M = 1; M <= 4; ++M) {
      auto I = essential_indices(f, M);
      CHECK(I.size() <= (std::size_t{1} << M) - 1);
      // direct check of the definition over every stored history
      std::set<std::size_t> direct;
      for (const auto& [h, s] : f.entries) {
        if (s == Symbol::Star && stars_in(f, h) < M) direct.insert(h.size());
      }
      CHECK(std::vector<std::size_t>(direct.begin(), direct.end()) == I);
    }
  }
}

TEST_CASE("minimalize") {
  SUBCASE("star table truncated at three stars on 20 rounds") {
    RigidTable f;
    f.n = 20;
    f.entries = {{"", Symbol::Star}};
    for (const char* h : {"0", "1"}) f.entries[h] = Symbol::Star;
    for (const char* h : {"00", "01", "10", "11"}) f.entries[h] = Symbol::Star;
    f.fallback = Symbol::Zero;
    ScriptedAdversary adv = ScriptedAdversary::rigid(points(20), f);
    REQUIRE(forced_mistakes(adv) == 3);
    MinimalizeResult m = minimalize(adv, 3);
    CHECK(m.subsequence.size() <= 7);
    CHECK(m.subsequence.size() == 3);
    CHECK(forced_mistakes(*m.adversary) >= 3);
  }
  SUBCASE("one forcing round") {
    ScriptedAdversary adv = ScriptedAdversary::rigid(points(10), [] {
      RigidTable f;
      f.entries = {{"0000", Symbol::Star}};
      f.fallback = Symbol::Zero;
      return f;
    }());
    REQUIRE(forced_mistakes(adv) == 1);
    MinimalizeResult m = minimalize(adv, 1);
    CHECK(m.essential == std::vector<std::size_t>{4});
    CHECK(m.subsequence.size() == 1);
    CHECK(forced_mistakes(*m.adversary) == 1);
  }
  SUBCASE("random rigid adversaries") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t n = 4 + rng() % 9;
      RigidTable f = random_table(rng, n, 0.35);
      ScriptedAdversary adv = ScriptedAdversary::rigid(points(n), f);
      const std::size_t forced = forced_mistakes(adv);
      for (std::size_t M = 1; M <= std::min<std::size_t>(forced, 4); ++M) {
        MinimalizeResult m = minimalize(adv, M);
        CHECK(m.subsequence.size() <= (std::size_t{1} << M) - 1);
        CHECK(forced_mistakes(*m.adversary) >= M);
      }
    }
  }
  SUBCASE("minimal adversary stays realizable") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
      auto cls = HypothesisClass::random(4, 1, rng());
      auto seq = cls->domain();
      seq.resize(16);
      ScriptedAdversary adv = ScriptedAdversary::rigid(seq, realizable_rigid_table(cls, seq, {1, 3, 6, 9}));
      const std::size_t forced = forced_mistakes(adv);
      if (forced == 0) continue;
      const std::size_t M = std::min<std::size_t>(forced, 3);
      MinimalizeResult m = minimalize(adv, M);
      for (const char* name : {"zero", "one", "halving"}) {
        MinimalAdversary a = *m.adversary;
        auto l = make_learner(name, cls, 0);
        CHECK_NOTHROW(play_transductive(cls, *l, a, m.subsequence.size()));
      }
    }
  }
}
