#include "tonline/engine.hpp"

#include <ostream>
#include <sstream>

#include "json.hpp"
#include "tonline/errors.hpp"

namespace tonline {

using ojson = nlohmann::ordered_json;

std::size_t count_mistakes(const Transcript& t) {
  std::size_t m = 0;
  for (const Round& r : t.rounds) m += (r.y_hat != r.y) ? 1 : 0;
  return m;
}

std::size_t Transcript::mistakes() const { return count_mistakes(*this); }

std::string setting_name(Setting s) { return s == Setting::Standard ? "standard" : "transductive"; }

namespace {

Bit check_bit(Bit b, const char* who) {
  if (b > 1) throw std::logic_error(std::string(who) + " returned a non-binary label");
  return b;
}

}  // namespace

Transcript play_standard(const ClassPtr& cls, Learner& learner, StandardAdversary& adversary, std::size_t n,
                         Mode mode) {
  if (n == 0) throw std::invalid_argument("a game needs at least one round");
  Transcript tr;
  tr.setting = Setting::Standard;
  tr.depth = cls->depth();
  tr.class_descriptor = cls->descriptor();
  std::optional<VersionSpace> vs;
  if (mode == Mode::Strict) vs.emplace(cls);
  for (std::size_t t = 0; t < n; ++t) {
    const NodeId x = adversary.next_instance(t);
    if (x.depth() > cls->depth()) throw DepthOverflow("instance deeper than the tree");
    const Bit y_hat = check_bit(learner.predict(t, x), "learner");
    const Bit y = check_bit(adversary.label(t, y_hat), "adversary");
    if (vs) {
      *vs = vs->restrict(x, y);
      if (vs->empty()) throw RealizabilityViolation(t + 1);
    }
    learner.observe(t, x, y);
    tr.rounds.push_back({x, y_hat, y});
  }
  return tr;
}

Transcript play_transductive(const ClassPtr& cls, Learner& learner, TransductiveAdversary& adversary,
                             std::size_t n, Mode mode) {
  if (n == 0) throw std::invalid_argument("a game needs at least one round");
  const std::vector<NodeId> seq = adversary.sequence();
  if (seq.size() != n) {
    throw SequenceLengthMismatch("announced sequence has length " + std::to_string(seq.size()) + ", expected " +
                                 std::to_string(n));
  }
  for (NodeId x : seq) {
    if (x.depth() > cls->depth()) throw DepthOverflow("instance deeper than the tree");
  }
  Transcript tr;
  tr.setting = Setting::Transductive;
  tr.depth = cls->depth();
  tr.class_descriptor = cls->descriptor();
  tr.sequence = seq;
  learner.on_sequence(seq);
  std::optional<VersionSpace> vs;
  if (mode == Mode::Strict) vs.emplace(cls);
  for (std::size_t t = 0; t < n; ++t) {
    const NodeId x = seq[t];
    const Bit y_hat = check_bit(learner.predict(t, x), "learner");
    const Bit y = check_bit(adversary.label(t, y_hat), "adversary");
    if (vs) {
      *vs = vs->restrict(x, y);
      if (vs->empty()) throw RealizabilityViolation(t + 1);
    }
    learner.observe(t, x, y);
    tr.rounds.push_back({x, y_hat, y});
  }
  return tr;
}

VersionSpace replay_version_space(const ClassPtr& cls, const Transcript& t) {
  VersionSpace vs(cls);
  for (const Round& r : t.rounds) vs = vs.restrict(r.x, r.y);
  return vs;
}

namespace {

// "lemma:d=4,bias=2,seed=7" -> {"descriptor": ..., "kind": "lemma", "d": 4, ...}
ojson class_object(const std::string& descriptor) {
  ojson j;
  j["descriptor"] = descriptor;
  const auto colon = descriptor.find(':');
  j["kind"] = descriptor.substr(0, colon);
  if (colon == std::string::npos) return j;
  std::stringstream ss(descriptor.substr(colon + 1));
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(val, &used);
      if (used == val.size()) {
        j[key] = v;
        continue;
      }
    } catch (const std::exception&) {
    }
    j[key] = val;
  }
  return j;
}

}  // namespace

std::string to_json(const Transcript& t, int indent) {
  ojson j;
  j["setting"] = setting_name(t.setting);
  j["d"] = t.depth;
  if (t.sequence) {
    ojson seq = ojson::array();
    for (NodeId x : *t.sequence) seq.push_back(x.to_string());
    j["sequence"] = std::move(seq);
  }
  ojson rounds = ojson::array();
  for (const Round& r : t.rounds) {
    ojson o;
    o["x"] = r.x.to_string();
    o["yhat"] = static_cast<int>(r.y_hat);
    o["y"] = static_cast<int>(r.y);
    rounds.push_back(std::move(o));
  }
  j["rounds"] = std::move(rounds);
  j["mistakes"] = t.mistakes();
  j["class"] = class_object(t.class_descriptor);
  return j.dump(indent);
}

void write_json(std::ostream& out, const Transcript& t) { out << to_json(t, 2) << '\n'; }

Transcript transcript_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("transcript json: ") + e.what());
  }
  try {
    Transcript t;
    const std::string s = j.at("setting").get<std::string>();
    if (s == "standard") {
      t.setting = Setting::Standard;
    } else if (s == "transductive") {
      t.setting = Setting::Transductive;
    } else {
      throw ParseError("transcript json: unknown setting '" + s + "'");
    }
    t.depth = j.at("d").get<int>();
    if (j.contains("sequence")) {
      std::vector<NodeId> seq;
      for (const auto& x : j["sequence"]) seq.push_back(NodeId::parse(x.get<std::string>()));
      t.sequence = std::move(seq);
    }
    for (const auto& o : j.at("rounds")) {
      const int yh = o.at("yhat").get<int>();
      const int y = o.at("y").get<int>();
      if ((yh != 0 && yh != 1) || (y != 0 && y != 1)) throw ParseError("transcript json: label not 0/1");
      t.rounds.push_back({NodeId::parse(o.at("x").get<std::string>()), static_cast<Bit>(yh), static_cast<Bit>(y)});
    }
    if (j.contains("class")) t.class_descriptor = j["class"].value("descriptor", "");
    if (j.contains("mistakes") && j["mistakes"].get<std::size_t>() != t.mistakes()) {
      throw ParseError("transcript json: mistake count disagrees with rounds");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("transcript json: ") + e.what());
  }
}

}  // namespace tonline
