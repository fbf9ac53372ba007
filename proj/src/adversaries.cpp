#include "tonline/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "tonline/dyadic.hpp"
#include "tonline/errors.hpp"

namespace tonline {

// ---- epsilon ----

Epsilon Epsilon::rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0 || num == 0 || 2 * num >= den) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  if (den > (std::uint64_t{1} << 31)) throw std::invalid_argument("epsilon denominator too large");
  Epsilon e;
  e.num_ = num;
  e.den_ = den;
  e.value_ = static_cast<long double>(num) / static_cast<long double>(den);
  return e;
}

Epsilon Epsilon::real(long double value) {
  if (!(value > 0 && value < 0.5L)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  Epsilon e;
  e.value_ = value;
  return e;
}

Epsilon Epsilon::default_for(int d) {
  const long double half = std::sqrt(static_cast<long double>(d)) / 2;
  const long double v = std::exp2(-half);
  if (!(v < 0.5L)) return rational(1, 4);
  const long double rounded = std::round(half);
  if (std::fabs(half - rounded) < 1e-12L && rounded <= 30) {
    return rational(1, std::uint64_t{1} << static_cast<int>(rounded));
  }
  return real(v);
}

bool Epsilon::at_least(std::uint64_t count, std::uint64_t size) const {
  if (is_rational()) {
    return static_cast<unsigned __int128>(count) * den_ >= static_cast<unsigned __int128>(num_) * size;
  }
  return static_cast<long double>(count) >= value_ * static_cast<long double>(size);
}

bool Epsilon::at_least_complement(std::uint64_t count, std::uint64_t size) const {
  if (is_rational()) {
    return static_cast<unsigned __int128>(count) * den_ >= static_cast<unsigned __int128>(den_ - num_) * size;
  }
  return static_cast<long double>(count) >= (1.0L - value_) * static_cast<long double>(size);
}

std::string Epsilon::to_string() const {
  if (is_rational()) return std::to_string(num_) + "/" + std::to_string(den_);
  std::ostringstream os;
  os.precision(12);
  os << static_cast<double>(value_);
  return os.str();
}

BalancedRatioParams default_balanced_params(int d, double c) {
  BalancedRatioParams p;
  p.epsilon = Epsilon::default_for(d);
  p.lower_bound_factor = c;
  p.M = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d)) / c - 1e-12)));
  return p;
}

// ---- sequence construction ----

SequenceConstruction construct_sequence(const ClassPtr& cls, const BalancedRatioParams& params,
                                        bool record_tracked) {
  const int d = cls->depth();
  SequenceConstruction out;
  std::vector<TrackedClass> tracked{{"", VersionSpace(cls)}};
  if (record_tracked) out.tracked.push_back(tracked);
  std::deque<NodeId> queue{NodeId::root()};
  std::unordered_set<std::uint64_t> entered{NodeId::root().code()};
  while (!queue.empty()) {
    const NodeId x = queue.front();
    queue.pop_front();
    out.sequence.push_back(x);
    std::vector<TrackedClass> next;
    next.reserve(tracked.size() * 2);
    for (const TrackedClass& tc : tracked) {
      const std::uint64_t n = tc.H.size();
      auto [h0, h1] = tc.H.split(x);
      const std::uint64_t ones = h1.size();
      const bool both = params.epsilon.balanced(ones, n) && static_cast<int>(tc.index.size()) < params.M;
      const Bit maj = 2 * ones >= n ? 1 : 0;
      for (Bit y : {Bit{0}, Bit{1}}) {
        if (!both && y != maj) continue;
        TrackedClass child{both ? tc.index + static_cast<char>('0' + y) : tc.index, y ? h1 : h0};
        const bool dup = std::any_of(next.begin(), next.end(), [&](const TrackedClass& o) { return o.H == child.H; });
        if (x.depth() < d && child.H.all_on_path(x)) {
          const NodeId c = NodeId::from_code((x.code() << 1) | y);
          if (entered.insert(c.code()).second) queue.push_back(c);
        }
        if (!dup) next.push_back(std::move(child));
      }
    }
    tracked = std::move(next);
    out.max_tracked = std::max(out.max_tracked, tracked.size());
    if (record_tracked) out.tracked.push_back(tracked);
  }
  return out;
}

bool ancestry_closed(std::span<const NodeId> sequence) {
  std::unordered_set<std::uint64_t> seen;
  for (NodeId x : sequence) {
    seen.insert(x.code());
    for (NodeId a = x; !a.is_root();) {
      a = a.parent();
      if (!seen.count(a.code())) return false;
    }
  }
  return true;
}

// ---- balanced adversary ----

BalancedRatioAdversary::BalancedRatioAdversary(ClassPtr cls, BalancedRatioParams params)
    : BalancedRatioAdversary(std::move(cls), params, Options{}) {}

BalancedRatioAdversary::BalancedRatioAdversary(ClassPtr cls, BalancedRatioParams params, Options options)
    : cls_(std::move(cls)), params_(params), options_(options), vs_(cls_) {
  construction_ =
      std::make_shared<const SequenceConstruction>(construct_sequence(cls_, params_, options_.record_tracked));
}

Bit BalancedRatioAdversary::label(std::size_t t, Bit y_hat) {
  if (t != log_.size()) throw std::logic_error("balanced adversary: rounds out of order");
  const NodeId x = construction_->sequence.at(t);
  BalancedRoundLog rec;
  rec.size_before = vs_.size();
  if (options_.record_on_path) rec.x_on_path = vs_.all_on_path(x);
  auto [h0, h1] = vs_.split(x);
  rec.ones = h1.size();
  rec.forced = params_.epsilon.balanced(rec.ones, rec.size_before);
  rec.y = rec.forced ? static_cast<Bit>(1 - y_hat) : static_cast<Bit>(2 * rec.ones >= rec.size_before ? 1 : 0);
  vs_ = rec.y ? std::move(h1) : std::move(h0);
  if (vs_.empty()) throw std::logic_error("balanced adversary emptied its version space");
  rec.size_after = vs_.size();
  if (rec.forced) ++forced_;
  if (options_.record_tracked && t + 1 < construction_->tracked.size()) {
    const auto& coll = construction_->tracked[t + 1];
    rec.in_tracked = std::any_of(coll.begin(), coll.end(), [&](const TrackedClass& c) { return c.H == vs_; });
  }
  log_.push_back(rec);
  return rec.y;
}

namespace {

std::optional<std::string> alive_key(std::size_t t, const VersionSpace& vs) {
  if (vs.alive().universe() > (std::uint64_t{1} << 16)) return std::nullopt;
  std::string key = std::to_string(t) + ":";
  const auto v = vs.alive().to_vector();
  key.reserve(key.size() + v.size() * 3);
  for (std::uint64_t i : v) {
    key += std::to_string(i);
    key.push_back(',');
  }
  return key;
}

}  // namespace

std::optional<std::string> BalancedRatioAdversary::state_key() const { return alive_key(log_.size(), vs_); }

bool shrinkage_holds_per_round(const std::vector<BalancedRoundLog>& log, const Epsilon& eps) {
  for (const auto& r : log) {
    const bool ok = r.forced ? eps.at_least(r.size_after, r.size_before)
                             : eps.at_least_complement(r.size_after, r.size_before);
    if (!ok) return false;
  }
  return true;
}

bool shrinkage_holds_total(const std::vector<BalancedRoundLog>& log, const Epsilon& eps, std::uint64_t initial) {
  const std::uint64_t final_size = log.empty() ? initial : log.back().size_after;
  std::size_t forced = 0;
  for (const auto& r : log) forced += r.forced ? 1 : 0;
  const std::size_t n = log.size();
  if (eps.is_rational()) {
    using Int = Dyadic::Int;
    namespace mp = boost::multiprecision;
    const Int lhs = Int(final_size) * mp::pow(Int(eps.den()), static_cast<unsigned>(n));
    const Int rhs = mp::pow(Int(eps.num()), static_cast<unsigned>(forced)) *
                    mp::pow(Int(eps.den() - eps.num()), static_cast<unsigned>(n - forced)) * Int(initial);
    return lhs >= rhs;
  }
  const long double bound = static_cast<long double>(forced) * std::log2(eps.value()) +
                            static_cast<long double>(n - forced) * std::log2(1.0L - eps.value()) +
                            std::log2(static_cast<long double>(initial));
  return std::log2(static_cast<long double>(final_size)) >= bound;
}

// ---- Littlestone tree adversary ----

LittlestoneTreeAdversary::LittlestoneTreeAdversary(ClassPtr cls, LdimBudget budget)
    : cls_(std::move(cls)), budget_(budget), domain_(cls_->domain()), vs_(cls_) {
  if (domain_.empty()) throw std::invalid_argument("littlestone adversary needs a nonempty domain");
}

NodeId LittlestoneTreeAdversary::next_instance(std::size_t t) {
  const int L = ldim(vs_, domain_, budget_);
  flip_ = false;
  x_ = domain_[t % domain_.size()];
  if (L <= 0) return x_;
  for (NodeId x : domain_) {
    auto [h0, h1] = vs_.split(x);
    if (h0.empty() || h1.empty()) continue;
    if (std::min(ldim(h0, domain_, budget_), ldim(h1, domain_, budget_)) == L - 1) {
      x_ = x;
      flip_ = true;
      break;
    }
  }
  return x_;
}

Bit LittlestoneTreeAdversary::label(std::size_t, Bit y_hat) {
  Bit y = static_cast<Bit>(1 - y_hat);
  if (!flip_) {
    VersionSpace agree = vs_.restrict(x_, y_hat);
    if (!agree.empty()) {
      vs_ = std::move(agree);
      return y_hat;
    }
  }
  vs_ = vs_.restrict(x_, y);
  return y;
}

// ---- rigid tables and scripted adversaries ----

char symbol_char(Symbol s) {
  switch (s) {
    case Symbol::Zero:
      return '0';
    case Symbol::One:
      return '1';
    case Symbol::Star:
      return '*';
  }
  return '?';
}

Symbol symbol_from_char(char c) {
  if (c == '0') return Symbol::Zero;
  if (c == '1') return Symbol::One;
  if (c == '*') return Symbol::Star;
  throw ParseError(std::string("bad rigid symbol '") + c + "'");
}

Symbol RigidTable::at(const std::string& history) const {
  if (auto it = entries.find(history); it != entries.end()) return it->second;
  if (fallback) return *fallback;
  throw Error("rigid table has no entry for history '" + history + "'");
}

std::string RigidTable::to_string() const {
  // shortest histories first
  std::vector<std::pair<std::string, Symbol>> rows(entries.begin(), entries.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
  });
  std::string s;
  for (const auto& [h, v] : rows) {
    s += (h.empty() ? std::string("-") : h) + " -> " + symbol_char(v) + "\n";
  }
  if (fallback) s += std::string("default -> ") + symbol_char(*fallback) + "\n";
  return s;
}

ScriptedAdversary ScriptedAdversary::fixed(std::vector<NodeId> seq, std::vector<Bit> labels) {
  if (labels.size() != seq.size()) throw SequenceLengthMismatch("label script length differs from sequence");
  ScriptedAdversary a;
  a.kind_ = Kind::FixedLabels;
  a.seq_ = std::move(seq);
  a.labels_ = std::move(labels);
  return a;
}

ScriptedAdversary ScriptedAdversary::flip_first_k(std::vector<NodeId> seq, std::size_t k, std::vector<Bit> labels) {
  if (labels.size() != seq.size()) throw SequenceLengthMismatch("label script length differs from sequence");
  ScriptedAdversary a;
  a.kind_ = Kind::FlipFirstK;
  a.seq_ = std::move(seq);
  a.labels_ = std::move(labels);
  a.k_ = k;
  return a;
}

ScriptedAdversary ScriptedAdversary::rigid(std::vector<NodeId> seq, RigidTable table) {
  ScriptedAdversary a;
  a.kind_ = Kind::Rigid;
  table.n = seq.size();
  a.seq_ = std::move(seq);
  a.table_ = std::move(table);
  return a;
}

std::string ScriptedAdversary::name() const {
  switch (kind_) {
    case Kind::FixedLabels:
      return "scripted-fixed";
    case Kind::FlipFirstK:
      return "scripted-flip" + std::to_string(k_);
    case Kind::Rigid:
      return "scripted-rigid";
  }
  return "scripted";
}

Bit ScriptedAdversary::label(std::size_t t, Bit y_hat) {
  if (t != history_.size()) throw std::logic_error("scripted adversary: rounds out of order");
  if (t >= seq_.size()) throw std::out_of_range("scripted adversary: past the end of the sequence");
  Bit y = 0;
  switch (kind_) {
    case Kind::FixedLabels:
      y = labels_[t];
      break;
    case Kind::FlipFirstK:
      y = t < k_ ? static_cast<Bit>(1 - y_hat) : labels_[t];
      break;
    case Kind::Rigid: {
      const Symbol s = table_.at(history_);
      y = s == Symbol::Star ? static_cast<Bit>(1 - y_hat) : static_cast<Bit>(s);
      break;
    }
  }
  history_.push_back(static_cast<char>('0' + y));
  return y;
}

std::optional<std::string> ScriptedAdversary::state_key() const {
  if (kind_ == Kind::Rigid) return history_;
  return std::to_string(history_.size());
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<Bit> parse_bits(const std::string& text) {
  std::vector<Bit> out;
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.push_back(static_cast<Bit>(c - '0'));
    } else if (c != ' ' && c != ',' && c != '\t') {
      throw ParseError(std::string("bad label character '") + c + "'");
    }
  }
  return out;
}

}  // namespace

ScriptedAdversary parse_scripted(std::istream& in) {
  std::string line1, line2;
  if (!std::getline(in, line1)) throw ParseError("scripted file: missing sequence line");
  if (!std::getline(in, line2)) throw ParseError("scripted file: missing labeling line");
  if (!line1.empty() && line1.back() == '\r') line1.pop_back();
  line2 = trim(line2);
  std::vector<NodeId> seq;
  std::stringstream ss(line1);
  std::string tok;
  while (std::getline(ss, tok, ',')) seq.push_back(NodeId::parse(trim(tok)));
  if (!line1.empty() && line1.back() == ',') seq.push_back(NodeId::root());
  if (seq.empty()) throw ParseError("scripted file: empty sequence");

  if (line2.rfind("f:", 0) == 0) {
    RigidTable table;
    std::stringstream ts(line2.substr(2));
    while (ts >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq + 2 != tok.size()) throw ParseError("scripted file: bad token '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const Symbol sym = symbol_from_char(tok[eq + 1]);
      if (key == "default") {
        table.fallback = sym;
        continue;
      }
      for (char c : key) {
        if (c != '0' && c != '1') throw ParseError("scripted file: bad history '" + key + "'");
      }
      if (key.size() >= seq.size()) throw ParseError("scripted file: history longer than the sequence");
      table.entries[key] = sym;
    }
    return ScriptedAdversary::rigid(std::move(seq), std::move(table));
  }
  if (line2.rfind("flip:", 0) == 0) {
    const std::string rest = line2.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ParseError("scripted file: expected flip:<k>:<bits>");
    std::size_t k = 0;
    try {
      k = static_cast<std::size_t>(std::stoul(rest.substr(0, colon)));
    } catch (const std::exception&) {
      throw ParseError("scripted file: bad flip count");
    }
    auto labels = parse_bits(rest.substr(colon + 1));
    if (labels.size() != seq.size()) throw SequenceLengthMismatch("scripted file: label count differs from sequence");
    return ScriptedAdversary::flip_first_k(std::move(seq), k, std::move(labels));
  }
  auto labels = parse_bits(line2);
  if (labels.size() != seq.size()) throw SequenceLengthMismatch("scripted file: label count differs from sequence");
  return ScriptedAdversary::fixed(std::move(seq), std::move(labels));
}

ScriptedAdversary load_scripted(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scripted adversary file '" + path + "'");
  try {
    return parse_scripted(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_scripted(std::ostream& out, const ScriptedAdversary& adv) {
  const auto& seq = adv.sequence();
  for (std::size_t i = 0; i < seq.size(); ++i) out << (i ? "," : "") << seq[i].to_string();
  out << '\n';
  auto bits = [&] {
    std::string s;
    for (Bit b : adv.labels()) s.push_back(static_cast<char>('0' + b));
    return s;
  };
  switch (adv.kind()) {
    case ScriptedAdversary::Kind::FixedLabels:
      out << bits() << '\n';
      break;
    case ScriptedAdversary::Kind::FlipFirstK:
      out << "flip:" << adv.name().substr(std::string("scripted-flip").size()) << ':' << bits() << '\n';
      break;
    case ScriptedAdversary::Kind::Rigid: {
      out << "f:";
      for (const auto& [h, s] : adv.table().entries) out << ' ' << h << '=' << symbol_char(s);
      if (adv.table().fallback) out << " default=" << symbol_char(*adv.table().fallback);
      out << '\n';
      break;
    }
  }
}

// ---- greedy ----

GreedyAdversary::GreedyAdversary(ClassPtr cls, std::vector<NodeId> seq) : seq_(std::move(seq)), vs_(std::move(cls)) {}

Bit GreedyAdversary::label(std::size_t t, Bit y_hat) {
  if (t != t_) throw std::logic_error("greedy adversary: rounds out of order");
  auto [h0, h1] = vs_.split(seq_.at(t));
  Bit y;
  if (!h0.empty() && !h1.empty()) {
    y = static_cast<Bit>(1 - y_hat);
    ++forced_;
  } else {
    y = h0.empty() ? 1 : 0;
  }
  vs_ = y ? std::move(h1) : std::move(h0);
  ++t_;
  return y;
}

std::optional<std::string> GreedyAdversary::state_key() const { return alive_key(t_, vs_); }

RigidTable realizable_rigid_table(const ClassPtr& cls, const std::vector<NodeId>& seq,
                                  const std::vector<std::size_t>& star_rounds) {
  RigidTable table;
  table.n = seq.size();
  std::unordered_set<std::size_t> stars(star_rounds.begin(), star_rounds.end());
  struct Frame {
    std::string history;
    VersionSpace vs;
  };
  std::vector<Frame> stack{{"", VersionSpace(cls)}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const std::size_t t = f.history.size();
    if (t >= seq.size()) continue;
    auto [h0, h1] = f.vs.split(seq[t]);
    if (stars.count(t) && !h0.empty() && !h1.empty()) {
      table.entries[f.history] = Symbol::Star;
      stack.push_back({f.history + '0', std::move(h0)});
      stack.push_back({f.history + '1', std::move(h1)});
    } else {
      const Bit y = cls->eval(f.vs.alive().first(), seq[t]);
      table.entries[f.history] = static_cast<Symbol>(y);
      stack.push_back({f.history + static_cast<char>('0' + y), y ? std::move(h1) : std::move(h0)});
    }
  }
  return table;
}

std::vector<Bit> labels_of(const HypothesisClass& cls, std::uint64_t i, const std::vector<NodeId>& seq) {
  std::vector<Bit> out;
  out.reserve(seq.size());
  for (NodeId x : seq) out.push_back(cls.eval(i, x));
  return out;
}

std::unique_ptr<TransductiveAdversary> make_transductive_adversary(const std::string& name, const ClassPtr& cls,
                                                                   const BalancedRatioParams& params,
                                                                   std::uint64_t seed, std::size_t n_hint) {
  if (name == "balanced") return std::make_unique<BalancedRatioAdversary>(cls, params);
  if (name == "greedy") {
    std::mt19937_64 rng(seed);
    const int d = cls->depth();
    std::vector<NodeId> seq;
    const std::size_t n = n_hint == 0 ? static_cast<std::size_t>(d) + 1 : n_hint;
    if (cls->is_lazy() && d > 20) {
      std::uniform_int_distribution<int> depth(0, d);
      for (std::size_t i = 0; i < n; ++i) {
        const int k = depth(rng);
        seq.push_back(NodeId::from_bits(k, rng()));
      }
    } else {
      const auto dom = cls->domain();
      std::uniform_int_distribution<std::size_t> pick(0, dom.size() - 1);
      for (std::size_t i = 0; i < n; ++i) seq.push_back(dom[pick(rng)]);
    }
    return std::make_unique<GreedyAdversary>(cls, std::move(seq));
  }
  if (name.rfind("scripted:", 0) == 0) {
    return std::make_unique<ScriptedAdversary>(load_scripted(name.substr(9)));
  }
  throw std::invalid_argument("unknown adversary '" + name + "'");
}

}  // namespace tonline
