#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "tonline/adversaries.hpp"
#include "tonline/errors.hpp"
#include "tonline/learners.hpp"

using namespace tonline;

namespace {

ClassPtr root_votes(std::initializer_list<int> votes) {
  std::vector<std::uint32_t> masks;
  std::uint32_t tag = 0;
  for (int v : votes) masks.push_back(static_cast<std::uint32_t>(v) | (tag++ << 1));
  return HypothesisClass::from_point_functions(3, 15, masks);
}

std::vector<NodeId> nodes(std::initializer_list<const char*> xs) {
  std::vector<NodeId> out;
  for (const char* s : xs) out.push_back(NodeId::parse(s));
  return out;
}

}  // namespace

TEST_CASE("epsilon") {
  CHECK(Epsilon::default_for(4).to_string() == "1/4");
  CHECK(Epsilon::default_for(1).to_string() == "1/4");
  CHECK(Epsilon::default_for(16).to_string() == "1/4");
  CHECK(Epsilon::default_for(36).to_string() == "1/8");
  const Epsilon e9 = Epsilon::default_for(9);
  CHECK_FALSE(e9.is_rational());
  CHECK(std::fabs(static_cast<double>(e9.value()) - std::pow(2.0, -1.5)) < 1e-15);
  const Epsilon q = Epsilon::rational(1, 4);
  CHECK(q.balanced(1, 4));
  CHECK(q.balanced(3, 4));
  CHECK_FALSE(q.balanced(0, 4));
  CHECK_FALSE(q.balanced(4, 4));
  CHECK_FALSE(q.balanced(2, 9));
  CHECK(q.at_least_complement(3, 4));
  CHECK_FALSE(q.at_least_complement(5, 7));
  CHECK_THROWS(Epsilon::rational(1, 2));
  CHECK_THROWS(Epsilon::real(0.0L));
  CHECK(default_balanced_params(4).M == 1);
  CHECK(default_balanced_params(9).M == 2);
  CHECK(default_balanced_params(16).M == 2);
  CHECK(default_balanced_params(25).M == 3);
  CHECK(default_balanced_params(25, 1.0).M == 5);
}

TEST_CASE("construct_sequence basics") {
  for (int d = 1; d <= 10; ++d) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto cls = HypothesisClass::random(d, default_bias_exp(d), seed);
      for (int M = 1; M <= 3; ++M) {
        BalancedRatioParams p{Epsilon::rational(1, 4), M, 2.0};
        SequenceConstruction c = construct_sequence(cls, p);
        REQUIRE_FALSE(c.sequence.empty());
        CHECK(c.sequence.front().is_root());
        CHECK(ancestry_closed(c.sequence));
        std::set<NodeId> seen(c.sequence.begin(), c.sequence.end());
        CHECK(seen.size() == c.sequence.size());
        CHECK(c.sequence.size() < static_cast<std::size_t>(d + 1) << (M + 1));
        CHECK(c.max_tracked <= (std::size_t{1} << M));
        for (NodeId x : c.sequence) CHECK(x.depth() <= d);
      }
    }
  }
  CHECK(ancestry_closed(nodes({"", "0", "01"})));
  CHECK_FALSE(ancestry_closed(nodes({"", "01"})));
  CHECK_FALSE(ancestry_closed(nodes({"0", ""})));
}

TEST_CASE("balanced adversary label rule") {
  SUBCASE("lopsided ratio takes the majority") {
    auto cls = root_votes({1, 1, 1, 1, 1, 1, 1, 1, 1, 0});
    for (Bit yh : {Bit{0}, Bit{1}}) {
      BalancedRatioAdversary adv(cls, BalancedRatioParams{});
      REQUIRE(adv.sequence().front().is_root());
      CHECK(adv.label(0, yh) == 1);
      CHECK_FALSE(adv.log()[0].forced);
    }
  }
  SUBCASE("ratio 1/2 flips the prediction") {
    auto cls = root_votes({1, 0, 1, 0});
    BalancedRatioAdversary adv(cls, BalancedRatioParams{});
    CHECK(adv.label(0, 1) == 0);
    CHECK(adv.log()[0].forced);
    CHECK(adv.forced_count() == std::optional<std::size_t>(1));
    BalancedRatioAdversary adv2(cls, BalancedRatioParams{});
    CHECK(adv2.label(0, 0) == 1);
  }
}

TEST_CASE("balanced adversary transcripts: shrinkage, coverage, tracking") {
  for (int d : {3, 4, 5, 6, 9}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto cls = HypothesisClass::random(d, default_bias_exp(d), seed);
      const BalancedRatioParams p =
          d <= 4 ? BalancedRatioParams{Epsilon::rational(1, 4), 1, 2.0} : default_balanced_params(d);
      for (const char* name : {"zero", "one", "halving", "transductive", "random"}) {
        BalancedRatioAdversary adv(cls, p, {.record_on_path = true, .record_tracked = true});
        auto learner = make_learner(name, cls, seed);
        Transcript tr = play_transductive(cls, *learner, adv, adv.sequence().size());
        const auto& log = adv.log();
        CHECK(shrinkage_holds_per_round(log, p.epsilon));
        CHECK(shrinkage_holds_total(log, p.epsilon, cls->size()));
        std::size_t forced = 0;
        for (const auto& r : log) forced += r.forced;
        CHECK(tr.mistakes() >= forced);
        CHECK(adv.forced_count() == std::optional<std::size_t>(forced));
        CHECK(replay_version_space(cls, tr) == adv.version_space());
        if (forced <= static_cast<std::size_t>(p.M)) {
          std::vector<bool> depth_hit(static_cast<std::size_t>(d) + 1, false);
          for (std::size_t t = 0; t < log.size(); ++t) {
            if (log[t].x_on_path) depth_hit[static_cast<std::size_t>(tr.rounds[t].x.depth())] = true;
          }
          for (int k = 0; k <= d; ++k) CHECK(depth_hit[static_cast<std::size_t>(k)]);
        }
        std::size_t running = 0;
        for (const auto& r : log) {
          running += r.forced;
          if (running <= static_cast<std::size_t>(p.M)) CHECK(r.in_tracked);
        }
      }
    }
  }
}

TEST_CASE("shrinkage checks reject violations") {
  std::vector<BalancedRoundLog> log(1);
  log[0].size_before = 8;
  log[0].ones = 1;
  log[0].forced = false;
  log[0].size_after = 5;
  CHECK_FALSE(shrinkage_holds_per_round(log, Epsilon::rational(1, 4)));
  CHECK_FALSE(shrinkage_holds_total(log, Epsilon::rational(1, 4), 8));
  log[0].size_after = 6;
  CHECK(shrinkage_holds_per_round(log, Epsilon::rational(1, 4)));
  CHECK(shrinkage_holds_total(log, Epsilon::rational(1, 4), 8));
  CHECK(shrinkage_holds_total(log, Epsilon::real(0.25L), 8));
}

TEST_CASE("Littlestone tree adversary") {
  auto full3 = HypothesisClass::full_on_points(3);
  {
    SoaLearner soa(full3);
    LittlestoneTreeAdversary adv(full3);
    CHECK(play_standard(full3, soa, adv, 5).mistakes() == 3);
  }
  {
    std::vector<std::uint32_t> one{1};
    auto flat = HypothesisClass::from_point_functions(1, 3, one);
    CHECK(ldim(flat) == 0);
    auto h = make_learner("halving", flat, 0);
    LittlestoneTreeAdversary adv(flat);
    CHECK(play_standard(flat, *h, adv, 4).mistakes() == 0);
    auto z = make_baseline(BaselineKind::AlwaysZero, flat);
    LittlestoneTreeAdversary adv0(flat);
    CHECK(play_standard(flat, *z, adv0, 3).mistakes() == 1);  // only the root is labeled 1
  }
  {
    auto full2 = HypothesisClass::full_on_points(2);
    auto z = make_baseline(BaselineKind::AlwaysZero, full2);
    LittlestoneTreeAdversary adv(full2);
    CHECK(play_standard(full2, *z, adv, 2).mistakes() == 2);
    LittlestoneTreeAdversary adv4(full2);
    CHECK(play_standard(full2, *z, adv4, 4).mistakes() >= 2);
  }
}

TEST_CASE("scripted adversaries") {
  auto cls = HypothesisClass::full_on_points(4);
  auto seq = cls->domain();
  SUBCASE("fixed labels ignore predictions") {
    for (const char* name : {"zero", "one", "random"}) {
      ScriptedAdversary adv = ScriptedAdversary::fixed(seq, {1, 0, 1, 1});
      auto l = make_learner(name, cls, 3);
      Transcript tr = play_transductive(cls, *l, adv, 4);
      std::vector<Bit> ys;
      for (const Round& r : tr.rounds) ys.push_back(r.y);
      CHECK(ys == std::vector<Bit>{1, 0, 1, 1});
    }
  }
  SUBCASE("f = star everywhere flips every prediction") {
    RigidTable f;
    f.fallback = Symbol::Star;
    for (const char* name : {"zero", "one", "halving", "random"}) {
      ScriptedAdversary adv = ScriptedAdversary::rigid(seq, f);
      auto l = make_learner(name, cls, 5);
      CHECK(play_transductive(cls, *l, adv, 4).mistakes() == 4);
    }
  }
  SUBCASE("f = 0 everywhere against AlwaysZero") {
    RigidTable f;
    f.fallback = Symbol::Zero;
    ScriptedAdversary adv = ScriptedAdversary::rigid(seq, f);
    auto l = make_baseline(BaselineKind::AlwaysZero, cls);
    CHECK(play_transductive(cls, *l, adv, 4).mistakes() == 0);
  }
  SUBCASE("flip first k") {
    ScriptedAdversary adv = ScriptedAdversary::flip_first_k(seq, 2, {0, 0, 0, 0});
    auto l = make_baseline(BaselineKind::AlwaysZero, cls);
    CHECK(play_transductive(cls, *l, adv, 4).mistakes() == 2);
  }
  SUBCASE("length mismatch") { CHECK_THROWS_AS(ScriptedAdversary::fixed(seq, {0}), SequenceLengthMismatch); }
}

TEST_CASE("scripted file format") {
  {
    std::istringstream in(",0,01\n101\n");
    ScriptedAdversary a = parse_scripted(in);
    CHECK(a.sequence() == nodes({"", "0", "01"}));
    CHECK(a.kind() == ScriptedAdversary::Kind::FixedLabels);
    CHECK(a.labels() == std::vector<Bit>{1, 0, 1});
    std::ostringstream out;
    write_scripted(out, a);
    CHECK(out.str() == ",0,01\n101\n");
  }
  {
    std::istringstream in(",1\nf: =* 0=1 1=0\n");
    ScriptedAdversary a = parse_scripted(in);
    CHECK(a.kind() == ScriptedAdversary::Kind::Rigid);
    CHECK(a.table().at("") == Symbol::Star);
    CHECK(a.table().at("0") == Symbol::One);
    CHECK_THROWS(a.table().at("11"));
    std::ostringstream out;
    write_scripted(out, a);
    std::istringstream back(out.str());
    ScriptedAdversary b = parse_scripted(back);
    CHECK(b.table().entries == a.table().entries);
    CHECK(b.sequence() == a.sequence());
    CHECK(a.label(0, 1) == 0);
    CHECK(a.label(1, 1) == 1);
  }
  {
    std::istringstream in("0,1\nf: default=*\n");
    ScriptedAdversary a = parse_scripted(in);
    CHECK(a.table().fallback == Symbol::Star);
  }
  {
    std::istringstream in("0,1,\nflip:2:001\n");
    ScriptedAdversary a = parse_scripted(in);
    CHECK(a.kind() == ScriptedAdversary::Kind::FlipFirstK);
    CHECK(a.sequence().size() == 3);
    std::ostringstream out;
    write_scripted(out, a);
    CHECK(out.str() == "0,1,\nflip:2:001\n");
  }
  for (const char* bad : {"", "0,1\n", "0,1\n0\n", "0,x\n01\n", "0,1\n0a\n", "0\nf: =2\n", "0\nf: 0=1\n",
                          "0\nf: a=1\n", "0\nflip:x:0\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_scripted(in), Error);
  }
  CHECK_THROWS_AS(load_scripted("/nonexistent/adv.txt"), Error);
}

TEST_CASE("greedy adversary and realizable rigid tables") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto cls = HypothesisClass::random(5, 2, rng());
    auto seq = make_transductive_adversary("greedy", cls, {}, rng(), 10)->sequence();
    {
      GreedyAdversary g(cls, seq);
      auto l = make_learner("halving", cls, 0);
      Transcript tr = play_transductive(cls, *l, g, seq.size());
      CHECK(tr.mistakes() == *g.forced_count());
    }
    RigidTable f = realizable_rigid_table(cls, seq, {0, 2, 4});
    for (const char* name : {"zero", "one", "halving", "random"}) {
      ScriptedAdversary adv = ScriptedAdversary::rigid(seq, f);
      auto l = make_learner(name, cls, 1);
      CHECK_NOTHROW(play_transductive(cls, *l, adv, seq.size()));
    }
  }
  auto cls = HypothesisClass::random(4, 2, 1);
  CHECK_THROWS(make_transductive_adversary("nope", cls, {}, 0, 3));
  CHECK(make_transductive_adversary("balanced", cls, {}, 0, 0)->name() == "balanced");
}
