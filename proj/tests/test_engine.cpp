#include "doctest.h"

#include <sstream>

#include "tonline/adversaries.hpp"
#include "tonline/engine.hpp"
#include "tonline/errors.hpp"
#include "tonline/learners.hpp"

using namespace tonline;

namespace {

std::vector<NodeId> nodes(std::initializer_list<const char*> xs) {
  std::vector<NodeId> out;
  for (const char* s : xs) out.push_back(NodeId::parse(s));
  return out;
}

// Records the order of calls it receives.
class ProbeLearner final : public Learner {
 public:
  explicit ProbeLearner(std::vector<std::string>* log) : log_(log) {}
  std::string name() const override { return "probe"; }
  void on_sequence(std::span<const NodeId> s) override { log_->push_back("seq" + std::to_string(s.size())); }
  Bit predict(std::size_t t, NodeId) override {
    log_->push_back("p" + std::to_string(t));
    return 0;
  }
  void observe(std::size_t t, NodeId, Bit) override { log_->push_back("o" + std::to_string(t)); }
  std::unique_ptr<Learner> clone() const override { return std::make_unique<ProbeLearner>(*this); }

 private:
  std::vector<std::string>* log_;
};

class ProbeStandardAdversary final : public StandardAdversary {
 public:
  explicit ProbeStandardAdversary(std::vector<std::string>* log) : log_(log) {}
  std::string name() const override { return "probe"; }
  NodeId next_instance(std::size_t t) override {
    log_->push_back("x" + std::to_string(t));
    return NodeId::root();
  }
  Bit label(std::size_t t, Bit) override {
    log_->push_back("y" + std::to_string(t));
    return 0;
  }
  std::unique_ptr<StandardAdversary> clone() const override { return std::make_unique<ProbeStandardAdversary>(*this); }

 private:
  std::vector<std::string>* log_;
};

}  // namespace

TEST_CASE("count_mistakes") {
  Transcript t;
  CHECK(count_mistakes(t) == 0);
  for (int i = 0; i < 5; ++i) t.rounds.push_back({NodeId::root(), 0, 0});
  CHECK(count_mistakes(t) == 0);
  t.rounds[1].y = 1;
  t.rounds[3].y_hat = 1;
  CHECK(count_mistakes(t) == 2);
  CHECK(t.mistakes() == 2);
}

TEST_CASE("standard game: constant-0 labels against always-1") {
  auto cls = HypothesisClass::full_on_points(3);
  auto seq = cls->domain();
  SequenceAsStandard adv(std::make_unique<ScriptedAdversary>(ScriptedAdversary::fixed(seq, {0, 0, 0})));
  auto one = make_baseline(BaselineKind::AlwaysOne, cls);
  Transcript tr = play_standard(cls, *one, adv, 3);
  CHECK(tr.mistakes() == 3);
  CHECK(tr.setting == Setting::Standard);
  CHECK_FALSE(tr.sequence.has_value());
}

TEST_CASE("standard game: the Littlestone adversary forces min(n, d)") {
  for (int k = 1; k <= 4; ++k) {
    auto cls = HypothesisClass::full_on_points(k);
    for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{6}}) {
      for (const char* name : {"zero", "one", "halving", "soa", "random", "lazy"}) {
        auto learner = make_learner(name, cls, 7);
        LittlestoneTreeAdversary adv(cls);
        Transcript tr = play_standard(cls, *learner, adv, n);
        CHECK(tr.mistakes() >= std::min<std::size_t>(n, static_cast<std::size_t>(k)));
      }
    }
  }
}

TEST_CASE("strict mode rejects unrealizable labels") {
  std::vector<ExplicitHypothesis> one{ExplicitHypothesis(2)};
  auto cls = HypothesisClass::explicit_class(2, one);
  auto seq = nodes({"", "0", "01"});
  {
    ScriptedAdversary adv = ScriptedAdversary::fixed(seq, {0, 1, 0});
    HalvingLearner l(cls);
    try {
      play_transductive(cls, l, adv, 3);
      FAIL("expected a realizability violation");
    } catch (const RealizabilityViolation& e) {
      CHECK(e.round() == 2);
    }
  }
  {
    ScriptedAdversary adv = ScriptedAdversary::fixed(seq, {0, 1, 0});
    HalvingLearner l(cls);
    CHECK(play_transductive(cls, l, adv, 3, Mode::Trusted).rounds.size() == 3);
  }
  {
    SequenceAsStandard adv(std::make_unique<ScriptedAdversary>(ScriptedAdversary::fixed(seq, {1, 0, 0})));
    HalvingLearner l(cls);
    CHECK_THROWS_AS(play_standard(cls, l, adv, 3), RealizabilityViolation);
  }
}

TEST_CASE("transductive game: flipping every prediction on the full class") {
  for (int k = 1; k <= 6; ++k) {
    auto cls = HypothesisClass::full_on_points(k);
    for (const char* name : {"zero", "one", "halving", "transductive", "random"}) {
      auto learner = make_learner(name, cls, 3);
      GreedyAdversary adv(cls, cls->domain());
      Transcript tr = play_transductive(cls, *learner, adv, static_cast<std::size_t>(k));
      CHECK(tr.mistakes() == static_cast<std::size_t>(k));
      CHECK(adv.forced_count() == std::optional<std::size_t>(k));
    }
  }
}

TEST_CASE("transductive game: halving on 8 members makes at most 3 mistakes") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint32_t> masks;
    while (masks.size() < 8) {
      const std::uint32_t m = static_cast<std::uint32_t>(rng() & 0x7F);
      if (std::find(masks.begin(), masks.end(), m) == masks.end()) masks.push_back(m);
    }
    auto cls = HypothesisClass::from_point_functions(2, 7, masks);
    auto adv = make_transductive_adversary("greedy", cls, {}, rng(), 10);
    HalvingLearner l(cls);
    Transcript tr = play_transductive(cls, l, *adv, 10);
    CHECK(tr.mistakes() <= 3);
  }
}

TEST_CASE("singleton class gives the consistent learner no mistakes") {
  ExplicitHypothesis h(3);
  h.set(NodeId::parse("1"), 1);
  h.set(NodeId::parse("10"), 1);
  auto cls = HypothesisClass::explicit_class(3, {h});
  auto seq = nodes({"", "1", "10", "101", "0"});
  ScriptedAdversary adv = ScriptedAdversary::fixed(seq, labels_of(*cls, 0, seq));
  auto lazy = make_baseline(BaselineKind::LazyConsistent, cls);
  CHECK(play_transductive(cls, *lazy, adv, seq.size()).mistakes() == 0);
}

TEST_CASE("sequence length and depth guards") {
  auto cls = HypothesisClass::full_on_points(3);
  ScriptedAdversary adv = ScriptedAdversary::fixed(cls->domain(), {0, 0, 0});
  HalvingLearner l(cls);
  CHECK_THROWS_AS(play_transductive(cls, l, adv, 4), SequenceLengthMismatch);
  ScriptedAdversary deep = ScriptedAdversary::fixed(nodes({"", "010"}), {0, 0});
  CHECK_THROWS_AS(play_transductive(cls, l, deep, 2), DepthOverflow);
}

TEST_CASE("message order") {
  auto cls = HypothesisClass::full_on_points(3);
  {
    std::vector<std::string> log;
    ProbeLearner l(&log);
    ProbeStandardAdversary adv(&log);
    play_standard(cls, l, adv, 2);
    CHECK(log == std::vector<std::string>{"x0", "p0", "y0", "o0", "x1", "p1", "y1", "o1"});
  }
  {
    std::vector<std::string> log;
    ProbeLearner l(&log);
    ScriptedAdversary adv = ScriptedAdversary::fixed(cls->domain(), {0, 0, 0});
    play_transductive(cls, l, adv, 3);
    CHECK(log == std::vector<std::string>{"seq3", "p0", "o0", "p1", "o1", "p2", "o2"});
  }
}

TEST_CASE("strict-mode soundness and determinism") {
  auto cls = HypothesisClass::random(6, 2, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto a1 = make_transductive_adversary("greedy", cls, {}, seed, 12);
    auto a2 = make_transductive_adversary("greedy", cls, {}, seed, 12);
    auto l1 = make_learner("transductive", cls, seed);
    auto l2 = make_learner("transductive", cls, seed);
    Transcript t1 = play_transductive(cls, *l1, *a1, 12);
    Transcript t2 = play_transductive(cls, *l2, *a2, 12);
    CHECK(to_json(t1) == to_json(t2));
    VersionSpace final_vs = replay_version_space(cls, t1);
    CHECK_FALSE(final_vs.empty());
    for (std::uint64_t i : final_vs.alive().to_vector()) {
      for (const Round& r : t1.rounds) CHECK(cls->eval(i, r.x) == r.y);
    }
  }
}

TEST_CASE("json transcript round trip and field order") {
  auto cls = HypothesisClass::random(4, 2, 9);
  BalancedRatioAdversary adv(cls, BalancedRatioParams{});
  HalvingLearner l(cls);
  Transcript t = play_transductive(cls, l, adv, adv.sequence().size());
  const std::string js = to_json(t);
  CHECK(js.rfind("{\"setting\":\"transductive\",\"d\":4,\"sequence\":[\"\",", 0) == 0);
  CHECK(js.find("\"rounds\"") < js.find("\"mistakes\""));
  CHECK(js.find("\"mistakes\"") < js.find("\"class\""));
  CHECK(js.find("\"kind\":\"lemma\"") != std::string::npos);
  CHECK(js.find("\"seed\":9") != std::string::npos);
  Transcript back = transcript_from_json(js);
  CHECK(back == t);
  std::ostringstream os;
  write_json(os, t);
  CHECK(transcript_from_json(os.str()) == t);

  Transcript s;
  s.setting = Setting::Standard;
  s.depth = 2;
  s.rounds = {{NodeId::parse("01"), 1, 0}};
  s.class_descriptor = "explicit:d=2,size=3";
  const std::string sj = to_json(s);
  CHECK(sj.find("sequence") == std::string::npos);
  CHECK(transcript_from_json(sj) == s);

  CHECK_THROWS_AS(transcript_from_json("{"), ParseError);
  CHECK_THROWS_AS(transcript_from_json(R"({"setting":"x","d":1,"rounds":[]})"), ParseError);
  CHECK_THROWS_AS(transcript_from_json(R"({"setting":"standard","d":1,"rounds":[{"x":"0","yhat":2,"y":0}]})"),
                  ParseError);
  CHECK_THROWS_AS(
      transcript_from_json(R"({"setting":"standard","d":1,"rounds":[{"x":"0","yhat":1,"y":0}],"mistakes":0})"),
      ParseError);
}
