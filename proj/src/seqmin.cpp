#include "tonline/seqmin.hpp"

#include <algorithm>
#include <set>

#include "tonline/errors.hpp"

namespace tonline {

Bit probe_label(const TransductiveAdversary& adv, std::size_t t, Bit y_hat) {
  auto a = adv.clone();
  auto b = adv.clone();
  const Bit ya = a->label(t, y_hat);
  const Bit yb = b->label(t, y_hat);
  if (ya != yb || ya > 1) {
    throw ProbeNondeterminism("adversary '" + adv.name() + "' answered round " + std::to_string(t + 1) +
                              " inconsistently");
  }
  return ya;
}

namespace {

Symbol rigid_symbol(const TransductiveAdversary& a, std::size_t t) {
  if (probe_label(a, t, 0) == 0) return Symbol::Zero;
  if (probe_label(a, t, 1) == 1) return Symbol::One;
  return Symbol::Star;
}

}  // namespace

RigidAdversary::RigidAdversary(std::unique_ptr<TransductiveAdversary> inner) : inner_(std::move(inner)) {}

RigidAdversary::RigidAdversary(const RigidAdversary& o) : inner_(o.inner_->clone()), history_(o.history_) {}

RigidAdversary& RigidAdversary::operator=(const RigidAdversary& o) {
  if (this != &o) {
    inner_ = o.inner_->clone();
    history_ = o.history_;
  }
  return *this;
}

Symbol RigidAdversary::peek(std::size_t t) const { return rigid_symbol(*inner_, t); }

Bit RigidAdversary::label(std::size_t t, Bit y_hat) {
  if (t != history_.size()) throw std::logic_error("rigid adversary: rounds out of order");
  const Symbol f = rigid_symbol(*inner_, t);
  const Bit fed = f == Symbol::Star ? y_hat : static_cast<Bit>(f);
  const Bit y = inner_->label(t, fed);
  if (f != Symbol::Star && y != fed) throw ProbeNondeterminism("adversary changed its answer after probing");
  if (f == Symbol::Star && y == fed) throw ProbeNondeterminism("adversary changed its answer after probing");
  history_.push_back(static_cast<char>('0' + y));
  return y;
}

std::optional<std::string> RigidAdversary::state_key() const {
  // the inner state is a function of the label history
  if (auto k = inner_->state_key()) return "r" + *k;
  return "h" + history_;
}

RigidifyResult rigidify(const TransductiveAdversary& adv, std::size_t star_budget, std::size_t max_entries) {
  RigidTable table;
  const std::size_t n = adv.sequence().size();
  table.n = n;
  struct Frame {
    std::unique_ptr<TransductiveAdversary> a;
    std::string history;
    std::size_t stars;
  };
  std::vector<Frame> stack;
  stack.push_back({adv.clone(), "", 0});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    const std::size_t t = fr.history.size();
    if (t >= n || fr.stars >= star_budget) continue;
    const Symbol f = rigid_symbol(*fr.a, t);
    table.entries[fr.history] = f;
    if (table.entries.size() > max_entries) throw BudgetExceeded("rigid table exceeds the entry budget");
    if (f == Symbol::Star) {
      // prediction 1 draws label 0 and vice versa
      for (Bit yh : {Bit{1}, Bit{0}}) {
        auto c = fr.a->clone();
        const Bit y = c->label(t, yh);
        stack.push_back({std::move(c), fr.history + static_cast<char>('0' + y), fr.stars + 1});
      }
    } else {
      const Bit y = fr.a->label(t, static_cast<Bit>(f));
      stack.push_back({std::move(fr.a), fr.history + static_cast<char>('0' + y), fr.stars});
    }
  }
  return {RigidAdversary(adv.clone()), std::move(table)};
}

std::vector<std::size_t> essential_indices(const RigidTable& f, std::size_t M) {
  std::set<std::size_t> out;
  struct Frame {
    std::string history;
    std::size_t stars;
  };
  std::vector<Frame> stack{{"", 0}};
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (fr.history.size() >= f.n || fr.stars >= M) continue;
    if (!f.has(fr.history)) continue;
    const Symbol s = f.at(fr.history);
    if (s == Symbol::Star) {
      out.insert(fr.history.size());
      stack.push_back({fr.history + '0', fr.stars + 1});
      stack.push_back({fr.history + '1', fr.stars + 1});
    } else {
      stack.push_back({fr.history + symbol_char(s), fr.stars});
    }
  }
  return {out.begin(), out.end()};
}

MinimalAdversary::MinimalAdversary(RigidAdversary rigid, std::vector<std::size_t> essential)
    : rigid_(std::move(rigid)), essential_(std::move(essential)) {
  const auto& seq = rigid_.sequence();
  for (std::size_t i : essential_) sub_.push_back(seq.at(i));
}

Bit MinimalAdversary::label(std::size_t t, Bit y_hat) {
  if (t != t_) throw std::logic_error("minimal adversary: rounds out of order");
  const std::size_t target = essential_.at(t);
  while (inner_t_ < target) rigid_.label(inner_t_++, 0);
  const Bit y = rigid_.label(inner_t_++, y_hat);
  ++t_;
  return y;
}

std::optional<std::string> MinimalAdversary::state_key() const {
  return std::to_string(t_) + ":" + rigid_.history();
}

MinimalizeResult minimalize(const TransductiveAdversary& adv, std::size_t M) {
  RigidifyResult r = rigidify(adv, M);
  MinimalizeResult out;
  out.essential = essential_indices(r.table, M);
  for (std::size_t i : out.essential) out.subsequence.push_back(adv.sequence().at(i));
  out.adversary = std::make_shared<MinimalAdversary>(r.adversary, out.essential);
  out.table = std::move(r.table);
  return out;
}

}  // namespace tonline
