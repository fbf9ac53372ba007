#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tonline/adversaries.hpp"
#include "tonline/engine.hpp"
#include "tonline/errors.hpp"
#include "tonline/harness.hpp"
#include "tonline/hypotheses.hpp"
#include "tonline/learners.hpp"
#include "tonline/oracle.hpp"
#include "tonline/seqmin.hpp"

using namespace tonline;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitAcceptance = 3;

struct Globals {
  std::uint64_t seed = 0;
  bool strict = false;
  bool trusted = false;
  std::string out;
  std::string config;
};

// config file first, CLI on top
std::map<std::string, std::string> merged_config(const Globals& g, const std::map<std::string, std::string>& cli) {
  std::map<std::string, std::string> kv;
  if (!g.config.empty()) kv = read_config_file(g.config);
  for (const auto& [k, v] : cli) kv[k] = v;
  return kv;
}

std::string get(const std::map<std::string, std::string>& kv, const std::string& key, const std::string& dflt) {
  auto it = kv.find(key);
  return it == kv.end() ? dflt : it->second;
}

Mode mode_of(const Globals& g, Mode dflt) {
  if (g.strict) return Mode::Strict;
  if (g.trusted) return Mode::Trusted;
  return dflt;
}

std::vector<NodeId> parse_sequence(const std::string& text) {
  std::vector<NodeId> seq;
  if (text.empty()) return seq;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) seq.push_back(NodeId::parse(item));
  if (!text.empty() && text.back() == ',') seq.push_back(NodeId::root());
  return seq;
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("write failed: " + path);
}

struct PlayOpts {
  std::string cls, learner, adversary, setting;
  std::optional<std::size_t> n, tmax, expert_cap;
  std::optional<std::uint64_t> halving_threshold;
  std::optional<double> c;
};

int run_play(const Globals& g, const PlayOpts& o) {
  std::map<std::string, std::string> cli;
  if (!o.cls.empty()) cli["class"] = o.cls;
  if (!o.learner.empty()) cli["learner"] = o.learner;
  if (!o.adversary.empty()) cli["adversary"] = o.adversary;
  if (!o.setting.empty()) cli["setting"] = o.setting;
  if (o.n) cli["n"] = std::to_string(*o.n);
  if (o.tmax) cli["tmax"] = std::to_string(*o.tmax);
  if (o.expert_cap) cli["expert_cap"] = std::to_string(*o.expert_cap);
  if (o.halving_threshold) cli["halving_threshold"] = std::to_string(*o.halving_threshold);
  if (o.c) cli["c"] = std::to_string(*o.c);
  const auto kv = merged_config(g, cli);

  auto cls = parse_class_spec(get(kv, "class", "lemma:d=4"), g.seed);
  TransductiveParams params;
  if (kv.count("tmax")) params.tmax = std::stoull(kv.at("tmax"));
  if (kv.count("halving_threshold")) params.halving_threshold = std::stoull(kv.at("halving_threshold"));
  if (kv.count("expert_cap")) params.expert_cap = std::stoull(kv.at("expert_cap"));
  const double c = kv.count("c") ? std::stod(kv.at("c")) : 2.0;
  const std::string setting = get(kv, "setting", "transductive");
  const std::string adv_name = get(kv, "adversary", setting == "standard" ? "littlestone" : "balanced");
  const std::size_t n = kv.count("n") ? std::stoull(kv.at("n")) : static_cast<std::size_t>(cls->depth()) + 1;
  auto learner = make_learner(get(kv, "learner", "transductive"), cls, g.seed, params);
  const Mode mode = mode_of(g, Mode::Strict);

  Transcript t;
  std::optional<std::size_t> forced;
  if (setting == "standard") {
    if (adv_name == "littlestone") {
      LittlestoneTreeAdversary adv(cls);
      t = play_standard(cls, *learner, adv, n, mode);
    } else {
      auto inner = make_transductive_adversary(adv_name, cls, default_balanced_params(cls->depth(), c), g.seed, n);
      const std::size_t len = inner->sequence().size();
      SequenceAsStandard adv(std::move(inner));
      t = play_standard(cls, *learner, adv, len, mode);
    }
  } else if (setting == "transductive") {
    auto adv = make_transductive_adversary(adv_name, cls, default_balanced_params(cls->depth(), c), g.seed, n);
    t = play_transductive(cls, *learner, *adv, adv->sequence().size(), mode);
    forced = adv->forced_count();
  } else {
    throw ParseError("unknown setting: " + setting);
  }
  std::cout << "class=" << cls->descriptor() << " learner=" << learner->name() << " adversary=" << adv_name
            << " n=" << t.rounds.size() << " mistakes=" << t.mistakes();
  if (forced) std::cout << " forced=" << *forced;
  std::cout << '\n';
  if (!g.out.empty()) emit_transcript_json(t, g.out);
  return 0;
}

struct SweepOpts {
  std::string d, seeds, learners, adversaries, transcripts, mode;
  std::optional<std::size_t> repetitions, parallelism, n;
};

int run_sweep_cmd(const Globals& g, const SweepOpts& o) {
  std::map<std::string, std::string> cli;
  if (!o.d.empty()) cli["d"] = o.d;
  if (!o.seeds.empty()) cli["seeds"] = o.seeds;
  if (!o.learners.empty()) cli["learners"] = o.learners;
  if (!o.adversaries.empty()) cli["adversaries"] = o.adversaries;
  if (!o.transcripts.empty()) cli["transcripts"] = o.transcripts;
  if (o.repetitions) cli["repetitions"] = std::to_string(*o.repetitions);
  if (o.parallelism) cli["parallelism"] = std::to_string(*o.parallelism);
  if (o.n) cli["n"] = std::to_string(*o.n);
  if (g.strict) cli["mode"] = "strict";
  if (g.trusted) cli["mode"] = "trusted";
  auto kv = merged_config(g, cli);
  if (!kv.count("seeds")) kv["seeds"] = std::to_string(g.seed);
  std::string out = g.out;
  if (kv.count("out")) {
    if (out.empty()) out = kv.at("out");
    kv.erase("out");
  }
  SweepSpec spec;
  spec.apply(kv);
  spec.validate();
  if (spec.transcript_dir) std::filesystem::create_directories(*spec.transcript_dir);
  const auto rows = run_sweep(spec);
  if (out.empty()) {
    write_csv(std::cout, rows);
  } else {
    emit_csv(rows, out);
  }
  std::size_t errors = 0;
  for (const auto& r : rows) errors += r.error.empty() ? 0 : 1;
  if (errors) std::cerr << errors << " cell(s) failed\n";
  return 0;
}

struct OracleOpts {
  std::string mode = "std", cls, sequence, adversary;
  std::size_t n = 3;
  OracleBudget budget;
  bool no_memo = false;
};

int run_oracle(const Globals& g, const OracleOpts& o) {
  OracleStats stats;
  long long value = 0;
  if (o.mode == "forced") {
    if (o.adversary.empty()) throw ParseError("--adversary is required for --mode forced");
    ClassPtr cls = o.cls.empty() ? nullptr : parse_class_spec(o.cls, g.seed);
    if (!cls && o.adversary.rfind("scripted:", 0) != 0) throw ParseError("--class is required for " + o.adversary);
    const int d = cls ? cls->depth() : 1;
    auto adv = make_transductive_adversary(o.adversary, cls, default_balanced_params(d), g.seed, o.n);
    value = static_cast<long long>(forced_mistakes(*adv, o.budget, &stats));
  } else {
    if (o.cls.empty()) throw ParseError("--class is required");
    auto cls = parse_class_spec(o.cls, g.seed);
    if (o.mode == "std") {
      value = std_value(cls, o.n, o.budget, &stats, !o.no_memo);
    } else if (o.mode == "trans") {
      value = trans_value(cls, o.n, o.budget, &stats);
    } else if (o.mode == "trans-fixed") {
      const auto seq = parse_sequence(o.sequence);
      if (seq.empty()) throw ParseError("--sequence is required for --mode trans-fixed");
      value = trans_value_fixed_seq(cls, seq, o.budget, &stats, !o.no_memo);
    } else {
      throw ParseError("unknown oracle mode: " + o.mode);
    }
  }
  std::ostringstream os;
  os << value << '\n' << "nodes=" << stats.nodes << " memo_hits=" << stats.memo_hits << '\n';
  write_out(g.out, os.str());
  return 0;
}

int run_minseq(const Globals& g, const std::string& adversary, std::size_t M, const OracleBudget& budget) {
  if (adversary.rfind("scripted:", 0) != 0) throw ParseError("minseq expects --adversary scripted:<file>");
  auto adv = load_scripted(adversary.substr(9));
  const auto res = minimalize(adv, M);
  const std::size_t forced = forced_mistakes(*res.adversary, budget);
  const std::size_t cap = (std::size_t{1} << M) - 1;
  const bool ok = res.subsequence.size() <= cap && res.essential.size() <= cap && forced >= M;
  std::ostringstream os;
  os << "table:\n" << res.table.to_string();
  os << "essential:";
  for (auto i : res.essential) os << ' ' << (i + 1);
  os << "\nsubsequence:";
  for (auto x : res.subsequence) os << ' ' << (x.to_string().empty() ? "()" : x.to_string());
  os << "\nforced=" << forced << " length=" << res.subsequence.size() << " bound=" << cap << '\n';
  os << (ok ? "verified" : "FAILED") << '\n';
  write_out(g.out, os.str());
  return ok ? 0 : kExitAcceptance;
}

int run_gen_class(const Globals& g, int d, std::optional<int> bias, const std::string& emit) {
  auto cls = HypothesisClass::random(d, bias ? *bias : default_bias_exp(d), g.seed);
  std::cout << cls->descriptor() << " size=" << cls->size() << '\n';
  if (emit != "none") {
    std::ofstream f(emit, std::ios::binary);
    if (!f) throw Error("cannot open " + emit + " for writing");
    write_explicit_table(f, *cls);
    if (!f) throw Error("write failed: " + emit);
  }
  return 0;
}

int run_ldim(const Globals& g, const std::string& spec, const LdimBudget& budget) {
  auto cls = parse_class_spec(spec, g.seed);
  std::ostringstream os;
  os << ldim(cls, budget) << '\n';
  write_out(g.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online learning on binary trees: games, oracles and sweeps"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed for generated classes, learners and adversaries");
  auto* strict = app.add_flag("--strict", g.strict, "check every label for realizability");
  app.add_flag("--trusted", g.trusted, "skip realizability checks")->excludes(strict);
  app.add_option("--out", g.out, "output file");
  app.add_option("--config", g.config, "key=value config file")->check(CLI::ExistingFile);

  PlayOpts po;
  auto* play = app.add_subcommand("play", "play one game");
  play->add_option("--class", po.cls, "class spec (lemma:d=..|full:k=..|random:k=..,size=..|table:<file>)");
  play->add_option("--learner", po.learner, "halving|soa|transductive|zero|one|random|lazy");
  play->add_option("--adversary", po.adversary, "balanced|greedy|littlestone|scripted:<file>");
  play->add_option("--setting", po.setting, "standard|transductive");
  play->add_option("--n", po.n, "rounds (greedy/littlestone)");
  play->add_option("--tmax", po.tmax);
  play->add_option("--halving-threshold", po.halving_threshold);
  play->add_option("--expert-cap", po.expert_cap);
  play->add_option("--c", po.c, "M = ceil(sqrt(d)/c)");

  SweepOpts so;
  auto* sweep = app.add_subcommand("sweep", "run a grid of games and emit CSV");
  sweep->add_option("--d", so.d, "depths, e.g. 9,16,25 or 4..8");
  sweep->add_option("--seeds", so.seeds);
  sweep->add_option("--learners", so.learners);
  sweep->add_option("--adversaries", so.adversaries);
  sweep->add_option("--repetitions", so.repetitions);
  sweep->add_option("--parallelism", so.parallelism);
  sweep->add_option("--n", so.n);
  sweep->add_option("--transcripts", so.transcripts, "directory for JSON transcripts");

  OracleOpts oo;
  auto* oracle = app.add_subcommand("oracle", "exact game values");
  oracle->add_option("--mode", oo.mode)->check(CLI::IsMember({"std", "trans", "trans-fixed", "forced"}));
  oracle->add_option("--class", oo.cls);
  oracle->add_option("--n", oo.n);
  oracle->add_option("--sequence", oo.sequence, "comma-separated node bitstrings");
  oracle->add_option("--adversary", oo.adversary);
  oracle->add_option("--max-nodes", oo.budget.max_nodes);
  oracle->add_option("--max-rounds", oo.budget.max_rounds);
  oracle->add_option("--max-hypotheses", oo.budget.max_hypotheses);
  oracle->add_option("--max-domain", oo.budget.max_domain);
  oracle->add_flag("--no-memo", oo.no_memo);

  std::string ms_adv;
  std::size_t ms_M = 1;
  OracleBudget ms_budget;
  auto* minseq = app.add_subcommand("minseq", "minimalize a scripted adversary");
  minseq->add_option("--adversary", ms_adv)->required();
  minseq->add_option("--M", ms_M)->required()->check(CLI::Range(1, 20));
  minseq->add_option("--max-nodes", ms_budget.max_nodes);

  int gc_d = 4;
  std::optional<int> gc_bias;
  std::string gc_emit = "none";
  auto* gen = app.add_subcommand("gen-class", "generate a random tree class");
  gen->add_option("--d", gc_d)->check(CLI::Range(1, 62));
  gen->add_option("--bias-exp", gc_bias)->check(CLI::Range(0, 63));
  gen->add_option("--emit", gc_emit, "none or an explicit-table file");

  std::string ld_class;
  LdimBudget ld_budget;
  auto* ld = app.add_subcommand("ldim", "Littlestone dimension of a class");
  ld->add_option("--class", ld_class)->required();
  ld->add_option("--max-alive", ld_budget.max_alive);
  ld->add_option("--max-domain", ld_budget.max_domain);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*play) return run_play(g, po);
    if (*sweep) return run_sweep_cmd(g, so);
    if (*oracle) return run_oracle(g, oo);
    if (*minseq) return run_minseq(g, ms_adv, ms_M, ms_budget);
    if (*gen) return run_gen_class(g, gc_d, gc_bias, gc_emit);
    if (*ld) return run_ldim(g, ld_class, ld_budget);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
