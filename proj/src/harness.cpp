#include "tonline/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "tonline/errors.hpp"

namespace tonline {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::uint64_t to_uint(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size() || s.empty() || s[0] == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad " + what + " '" + s + "'");
  }
}

std::map<std::string, std::string> parse_kv(const std::string& body) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("class spec: expected key=value, got '" + item + "'");
    kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return kv;
}

}  // namespace

ClassPtr parse_class_spec(const std::string& spec, std::uint64_t default_seed) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("class spec '" + spec + "' lacks a kind");
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (kind == "table") {
    std::ifstream in(body);
    if (!in) throw Error("cannot open class table '" + body + "'");
    try {
      return read_explicit_table(in);
    } catch (const ParseError& e) {
      throw ParseError(body + ": " + e.what());
    }
  }
  auto kv = parse_kv(body);
  auto take = [&](const std::string& key) -> std::optional<std::uint64_t> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    const std::uint64_t v = to_uint(it->second, key);
    kv.erase(it);
    return v;
  };
  ClassPtr cls;
  if (kind == "lemma") {
    const auto d = take("d");
    if (!d) throw ParseError("lemma class needs d");
    if (*d < 1 || *d > 61) throw DepthOverflow("lemma class depth must lie in [1, 61]");
    const int depth = static_cast<int>(*d);
    const auto bias = take("bias");
    const auto seed = take("seed");
    cls = HypothesisClass::random(depth, bias ? static_cast<int>(*bias) : default_bias_exp(depth),
                                  seed.value_or(default_seed));
  } else if (kind == "full") {
    const auto k = take("k");
    if (!k) throw ParseError("full class needs k");
    cls = HypothesisClass::full_on_points(static_cast<int>(*k));
  } else if (kind == "random") {
    const auto k = take("k");
    const auto size = take("size");
    if (!k || !size) throw ParseError("random class needs k and size");
    if (*k < 1 || *k > 16) throw ParseError("random class: k must lie in [1, 16]");
    if (*size < 1 || *size > (std::uint64_t{1} << *k)) throw ParseError("random class: size out of range");
    std::mt19937_64 rng(take("seed").value_or(default_seed));
    std::set<std::uint32_t> masks;
    while (masks.size() < *size) masks.insert(static_cast<std::uint32_t>(rng() & ((std::uint64_t{1} << *k) - 1)));
    int depth = 0;
    while ((std::uint64_t{1} << (depth + 1)) - 1 < *k) ++depth;
    std::vector<std::uint32_t> v(masks.begin(), masks.end());
    cls = HypothesisClass::from_point_functions(depth, static_cast<int>(*k), v);
  } else {
    throw ParseError("unknown class kind '" + kind + "'");
  }
  if (!kv.empty()) throw ParseError("class spec: unknown key '" + kv.begin()->first + "'");
  return cls;
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const std::string& item : parse_name_list(text)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_uint(item, "integer"));
      continue;
    }
    const std::uint64_t a = to_uint(item.substr(0, dots), "range start");
    const std::uint64_t b = to_uint(item.substr(dots + 2), "range end");
    if (b < a || b - a > 1000000) throw ParseError("bad range '" + item + "'");
    for (std::uint64_t v = a; v <= b; ++v) out.push_back(v);
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::map<std::string, std::string> read_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  try {
    return read_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void SweepSpec::apply(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "d") {
      d_values.clear();
      for (std::uint64_t d : parse_uint_list(value)) d_values.push_back(static_cast<int>(d));
    } else if (key == "seeds") {
      seeds = parse_uint_list(value);
    } else if (key == "learners") {
      learners = parse_name_list(value);
    } else if (key == "adversaries") {
      adversaries = parse_name_list(value);
    } else if (key == "repetitions") {
      repetitions = to_uint(value, key);
    } else if (key == "parallelism") {
      parallelism = to_uint(value, key);
    } else if (key == "mode") {
      if (value == "strict") {
        mode = Mode::Strict;
      } else if (value == "trusted") {
        mode = Mode::Trusted;
      } else {
        throw ParseError("mode must be strict or trusted");
      }
    } else if (key == "tmax") {
      learner_params.tmax = to_uint(value, key);
    } else if (key == "halving_threshold") {
      learner_params.halving_threshold = to_uint(value, key);
    } else if (key == "expert_cap") {
      learner_params.expert_cap = to_uint(value, key);
    } else if (key == "c") {
      try {
        lower_bound_factor = std::stod(value);
      } catch (const std::exception&) {
        throw ParseError("bad c '" + value + "'");
      }
    } else if (key == "n") {
      n = to_uint(value, key);
    } else if (key == "transcripts") {
      transcript_dir = value;
    } else {
      throw ParseError("unknown config key '" + key + "'");
    }
  }
}

void SweepSpec::validate() const {
  if (d_values.empty()) throw ParseError("sweep needs at least one d");
  if (seeds.empty()) throw ParseError("sweep needs at least one seed");
  if (learners.empty() || adversaries.empty()) throw ParseError("sweep needs learners and adversaries");
  if (repetitions == 0 || parallelism == 0) throw ParseError("repetitions and parallelism must be positive");
  if (!(lower_bound_factor > 0)) throw ParseError("c must be positive");
  static const std::set<std::string> known_learners{"halving", "soa",  "transductive", "zero",
                                                    "one",     "random", "lazy"};
  for (const auto& l : learners) {
    if (!known_learners.count(l)) throw ParseError("unknown learner '" + l + "'");
  }
  for (const auto& a : adversaries) {
    if (a != "balanced" && a != "greedy" && a != "littlestone" && a.rfind("scripted:", 0) != 0) {
      throw ParseError("unknown adversary '" + a + "'");
    }
  }
  for (int d : d_values) {
    if (d < 1 || d > 61) throw ParseError("d must lie in [1, 61]");
  }
}

double ResultRow::sqrt_d() const { return std::sqrt(static_cast<double>(d)); }
double ResultRow::ratio() const { return static_cast<double>(mistakes) / sqrt_d(); }

ResultRow run_cell(const SweepSpec& spec, int d, std::uint64_t seed, const std::string& learner,
                   const std::string& adversary, std::size_t repetition, Transcript* transcript) {
  ResultRow row;
  row.d = d;
  row.seed = seed;
  row.learner = learner;
  row.adversary = adversary;
  row.repetition = repetition;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto cls = HypothesisClass::random(d, default_bias_exp(d), seed);
    auto l = make_learner(learner, cls, seed, spec.learner_params);
    const std::size_t n_default = spec.n ? spec.n : static_cast<std::size_t>(d) + 1;
    Transcript tr;
    if (adversary == "littlestone") {
      LittlestoneTreeAdversary adv(cls);
      tr = play_standard(cls, *l, adv, n_default, spec.mode);
    } else {
      auto adv = make_transductive_adversary(adversary, cls, default_balanced_params(d, spec.lower_bound_factor),
                                             seed, n_default);
      tr = play_transductive(cls, *l, *adv, adv->sequence().size(), spec.mode);
      row.forced = adv->forced_count();
    }
    row.n = tr.rounds.size();
    row.mistakes = tr.mistakes();
    if (transcript) *transcript = std::move(tr);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

namespace {

auto row_key(const ResultRow& r) { return std::tie(r.d, r.seed, r.learner, r.adversary, r.repetition); }

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Cell {
    int d;
    std::uint64_t seed;
    std::string learner, adversary;
    std::size_t rep;
  };
  std::vector<Cell> cells;
  for (int d : spec.d_values) {
    for (std::uint64_t s : spec.seeds) {
      for (const auto& l : spec.learners) {
        for (const auto& a : spec.adversaries) {
          for (std::size_t r = 0; r < spec.repetitions; ++r) cells.push_back({d, s, l, a, r});
        }
      }
    }
  }
  if (spec.transcript_dir) std::filesystem::create_directories(*spec.transcript_dir);
  std::vector<ResultRow> rows;
  rows.reserve(cells.size());
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      Transcript tr;
      ResultRow row = run_cell(spec, c.d, c.seed, c.learner, c.adversary, c.rep, spec.transcript_dir ? &tr : nullptr);
      if (spec.transcript_dir && row.error.empty()) {
        const std::string name = "d" + std::to_string(c.d) + "_s" + std::to_string(c.seed) + "_" +
                                 file_safe(c.learner) + "_" + file_safe(c.adversary) + "_r" + std::to_string(c.rep) +
                                 ".json";
        try {
          emit_transcript_json(tr, (std::filesystem::path(*spec.transcript_dir) / name).string());
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      }
      std::lock_guard<std::mutex> lock(mu);
      rows.push_back(std::move(row));
    }
  };
  const std::size_t threads = std::min(spec.parallelism, std::max<std::size_t>(cells.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) { return row_key(a) < row_key(b); });
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += "\"\"";
    else if (c == '\n' || c == '\r') q += ' ';
    else q += c;
  }
  return q + "\"";
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.d << ',' << r.seed << ',' << csv_field(r.learner) << ',' << csv_field(r.adversary) << ',' << r.n << ','
        << r.mistakes << ',' << (r.forced ? std::to_string(*r.forced) : std::string()) << ',' << fixed(r.sqrt_d(), 6)
        << ',' << fixed(r.ratio(), 6) << ',' << fixed(r.wall_ms, 3) << ',' << csv_field(r.error) << '\n';
  }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV '" + path + "'");
  write_csv(out, rows);
  if (!out) throw Error("error writing CSV '" + path + "'");
}

void emit_transcript_json(const Transcript& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write transcript '" + path + "'");
  write_json(out, t);
  if (!out) throw Error("error writing transcript '" + path + "'");
}

}  // namespace tonline
