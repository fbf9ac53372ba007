#pragma once

// Set of hypothesis indices over a fixed universe [0, n). Stored densely as a
// bitset or sparsely as a sorted index list; the representation is canonical
// (a function of n and the size), so equality and hashing are structural.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace tonline {

class IndexSet {
 public:
  IndexSet() = default;

  static IndexSet full(std::uint64_t universe);
  static IndexSet none(std::uint64_t universe);
  /// `indices` must be strictly increasing and below `universe`.
  static IndexSet from_sorted(std::uint64_t universe, std::vector<std::uint32_t> indices);

  std::uint64_t universe() const { return universe_; }
  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(std::uint64_t i) const;
  bool is_dense() const { return dense_; }

  /// Calls f(index) in increasing order.
  template <class F>
  void for_each(F&& f) const {
    if (dense_) {
      for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t word = words_[w];
        while (word != 0) {
          const int b = std::countr_zero(word);
          f(static_cast<std::uint64_t>(w) * 64 + static_cast<std::uint64_t>(b));
          word &= word - 1;
        }
      }
    } else {
      for (std::uint32_t i : sparse_) f(static_cast<std::uint64_t>(i));
    }
  }

  /// The subset of members satisfying `keep`.
  template <class Pred>
  IndexSet filter(Pred&& keep) const {
    IndexSet out;
    out.universe_ = universe_;
    if (dense_) {
      out.dense_ = true;
      out.words_.assign(words_.size(), 0);
      std::uint64_t count = 0;
      for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t word = words_[w];
        std::uint64_t kept = 0;
        while (word != 0) {
          const int b = std::countr_zero(word);
          if (keep(static_cast<std::uint64_t>(w) * 64 + static_cast<std::uint64_t>(b))) {
            kept |= std::uint64_t{1} << b;
          }
          word &= word - 1;
        }
        out.words_[w] = kept;
        count += static_cast<std::uint64_t>(std::popcount(kept));
      }
      out.count_ = count;
    } else {
      out.dense_ = false;
      for (std::uint32_t i : sparse_) {
        if (keep(static_cast<std::uint64_t>(i))) out.sparse_.push_back(i);
      }
      out.count_ = out.sparse_.size();
    }
    out.normalize();
    return out;
  }

  /// Number of members satisfying `pred`.
  template <class Pred>
  std::uint64_t count_if(Pred&& pred) const {
    std::uint64_t c = 0;
    for_each([&](std::uint64_t i) { c += pred(i) ? 1 : 0; });
    return c;
  }

  /// Word-level filter for dense sets: keep(w, word) returns the bits of word to keep.
  template <class Keep>
  IndexSet filter_words(Keep&& keep) const {
    IndexSet out;
    out.universe_ = universe_;
    out.dense_ = true;
    out.words_.assign(words_.size(), 0);
    std::uint64_t count = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] == 0) continue;
      const std::uint64_t kept = keep(w, words_[w]) & words_[w];
      out.words_[w] = kept;
      count += static_cast<std::uint64_t>(std::popcount(kept));
    }
    out.count_ = count;
    out.normalize();
    return out;
  }

  /// Dense storage (empty for sparse sets).
  const std::vector<std::uint64_t>& words() const { return words_; }

  std::uint64_t first() const;
  std::uint64_t last() const;
  std::vector<std::uint64_t> to_vector() const;
  bool is_subset_of(const IndexSet& other) const;
  IndexSet intersect(const IndexSet& other) const;
  IndexSet unite(const IndexSet& other) const;
  /// Members of *this not in other.
  IndexSet minus(const IndexSet& other) const;

  std::size_t hash() const;
  friend bool operator==(const IndexSet& a, const IndexSet& b);

 private:
  void normalize();
  static bool wants_dense(std::uint64_t universe, std::uint64_t count);

  std::uint64_t universe_ = 0;
  std::uint64_t count_ = 0;
  bool dense_ = true;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint32_t> sparse_;
};

}  // namespace tonline

template <>
struct std::hash<tonline::IndexSet> {
  std::size_t operator()(const tonline::IndexSet& s) const noexcept { return s.hash(); }
};
