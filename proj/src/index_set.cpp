#include "tonline/index_set.hpp"

#include <iterator>

#include <algorithm>
#include <stdexcept>

namespace tonline {

namespace {

constexpr std::uint64_t kAlwaysDense = std::uint64_t{1} << 16;
constexpr std::uint64_t kMaxUniverse = std::uint64_t{1} << 32;

std::size_t word_count(std::uint64_t universe) { return static_cast<std::size_t>((universe + 63) / 64); }

void check_universe(std::uint64_t universe) {
  if (universe > kMaxUniverse) throw std::length_error("index universe exceeds 2^32");
}

}  // namespace

bool IndexSet::wants_dense(std::uint64_t universe, std::uint64_t count) {
  return universe <= kAlwaysDense || count * 32 >= universe;
}

IndexSet IndexSet::full(std::uint64_t universe) {
  check_universe(universe);
  IndexSet s;
  s.universe_ = universe;
  s.count_ = universe;
  s.dense_ = true;
  s.words_.assign(word_count(universe), ~std::uint64_t{0});
  if (universe % 64 != 0 && !s.words_.empty()) {
    s.words_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
  }
  s.normalize();
  return s;
}

IndexSet IndexSet::none(std::uint64_t universe) {
  check_universe(universe);
  IndexSet s;
  s.universe_ = universe;
  s.dense_ = false;
  s.normalize();
  return s;
}

IndexSet IndexSet::from_sorted(std::uint64_t universe, std::vector<std::uint32_t> indices) {
  check_universe(universe);
  IndexSet s;
  s.universe_ = universe;
  s.dense_ = false;
  s.count_ = indices.size();
  s.sparse_ = std::move(indices);
  s.normalize();
  return s;
}

void IndexSet::normalize() {
  const bool dense = wants_dense(universe_, count_);
  if (dense == dense_) {
    if (dense_) {
      sparse_.clear();
    } else {
      words_.clear();
      words_.shrink_to_fit();
    }
    return;
  }
  if (dense) {
    words_.assign(word_count(universe_), 0);
    for (std::uint32_t i : sparse_) words_[i / 64] |= std::uint64_t{1} << (i % 64);
    sparse_.clear();
    sparse_.shrink_to_fit();
  } else {
    sparse_.clear();
    sparse_.reserve(static_cast<std::size_t>(count_));
    for_each([&](std::uint64_t i) { sparse_.push_back(static_cast<std::uint32_t>(i)); });
    words_.clear();
    words_.shrink_to_fit();
  }
  dense_ = dense;
}

bool IndexSet::contains(std::uint64_t i) const {
  if (i >= universe_) return false;
  if (dense_) return ((words_[i / 64] >> (i % 64)) & 1U) != 0;
  return std::binary_search(sparse_.begin(), sparse_.end(), static_cast<std::uint32_t>(i));
}

std::uint64_t IndexSet::first() const {
  if (count_ == 0) throw std::out_of_range("first() of an empty index set");
  if (!dense_) return sparse_.front();
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::uint64_t>(std::countr_zero(words_[w]));
  }
  throw std::logic_error("index set count out of sync");
}

std::uint64_t IndexSet::last() const {
  if (count_ == 0) throw std::out_of_range("last() of an empty index set");
  if (!dense_) return sparse_.back();
  for (std::size_t w = words_.size(); w-- > 0;) {
    if (words_[w] != 0) return w * 64 + 63 - static_cast<std::uint64_t>(std::countl_zero(words_[w]));
  }
  throw std::logic_error("index set count out of sync");
}

std::vector<std::uint64_t> IndexSet::to_vector() const {
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(count_));
  for_each([&](std::uint64_t i) { out.push_back(i); });
  return out;
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  if (count_ > other.count_) return false;
  bool ok = true;
  for_each([&](std::uint64_t i) { ok = ok && other.contains(i); });
  return ok;
}

IndexSet IndexSet::intersect(const IndexSet& other) const {
  return filter([&](std::uint64_t i) { return other.contains(i); });
}

IndexSet IndexSet::unite(const IndexSet& other) const {
  std::vector<std::uint64_t> a = to_vector();
  std::vector<std::uint64_t> b = other.to_vector();
  std::vector<std::uint32_t> merged;
  merged.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    std::uint64_t next;
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      next = a[i++];
    } else if (i == a.size() || b[j] < a[i]) {
      next = b[j++];
    } else {
      next = a[i++];
      ++j;
    }
    merged.push_back(static_cast<std::uint32_t>(next));
  }
  return from_sorted(std::max(universe_, other.universe_), std::move(merged));
}

IndexSet IndexSet::minus(const IndexSet& other) const {
  if (dense_ && other.dense_ && universe_ == other.universe_) {
    IndexSet out;
    out.universe_ = universe_;
    out.dense_ = true;
    out.words_.resize(words_.size());
    std::uint64_t count = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      out.words_[w] = words_[w] & ~other.words_[w];
      count += static_cast<std::uint64_t>(std::popcount(out.words_[w]));
    }
    out.count_ = count;
    out.normalize();
    return out;
  }
  if (dense_ && !other.dense_) {
    IndexSet out = *this;
    for (std::uint32_t i : other.sparse_) {
      if (i >= universe_) continue;
      const std::uint64_t bit = std::uint64_t{1} << (i % 64);
      if (out.words_[i / 64] & bit) {
        out.words_[i / 64] &= ~bit;
        --out.count_;
      }
    }
    out.normalize();
    return out;
  }
  if (!dense_ && !other.dense_) {
    IndexSet out;
    out.universe_ = universe_;
    out.dense_ = false;
    std::set_difference(sparse_.begin(), sparse_.end(), other.sparse_.begin(), other.sparse_.end(),
                        std::back_inserter(out.sparse_));
    out.count_ = out.sparse_.size();
    out.normalize();
    return out;
  }
  return filter([&](std::uint64_t i) { return !other.contains(i); });
}

std::size_t IndexSet::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ universe_ ^ (count_ << 1);
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  if (dense_) {
    for (std::uint64_t w : words_) mix(w);
  } else {
    for (std::uint32_t i : sparse_) mix(i);
  }
  return static_cast<std::size_t>(h);
}

bool operator==(const IndexSet& a, const IndexSet& b) {
  return a.universe_ == b.universe_ && a.count_ == b.count_ && a.dense_ == b.dense_ &&
         a.words_ == b.words_ && a.sparse_ == b.sparse_;
}

}  // namespace tonline
