#pragma once

// Nodes of the perfect binary tree B_d, identified with bitstrings of length <= d.

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tonline/errors.hpp"

namespace tonline {

using Bit = std::uint8_t;

inline constexpr int kMaxTreeDepth = 62;

/// A node packed into one word: a leading sentinel 1 followed by the node's bits,
/// first bit most significant. The root (empty string) is code 1.
class NodeId {
 public:
  constexpr NodeId() = default;

  static constexpr NodeId root() { return NodeId{}; }

  /// Builds a node from its first `depth` bits (b_1 is the most significant).
  static NodeId from_bits(int depth, std::uint64_t bits);
  static NodeId from_code(std::uint64_t code);
  /// Parses the canonical text form: a string over {0,1}; "" is the root.
  static NodeId parse(std::string_view text);
  /// Inverse of bfs_index(): 0 is the root, then depth 1 left to right, ...
  static NodeId from_bfs_index(std::uint64_t index) { return from_code(index + 1); }

  constexpr int depth() const { return std::bit_width(code_) - 1; }
  constexpr std::uint64_t bits() const { return code_ & ~(std::uint64_t{1} << depth()); }
  constexpr std::uint64_t code() const { return code_; }
  constexpr std::uint64_t bfs_index() const { return code_ - 1; }
  constexpr bool is_root() const { return code_ == 1; }

  /// The i-th bit of the string, 1-based (bit(1) is the first step from the root).
  Bit bit(int i) const;
  /// The prefix of length k.
  NodeId prefix(int k) const;
  NodeId parent() const;
  Bit last_bit() const { return static_cast<Bit>(code_ & 1U); }

  std::string to_string() const;

  friend constexpr bool operator==(NodeId, NodeId) = default;
  friend constexpr auto operator<=>(NodeId a, NodeId b) { return a.code_ <=> b.code_; }

 private:
  explicit constexpr NodeId(std::uint64_t code) : code_(code) {}
  std::uint64_t code_ = 1;
};

/// u is a prefix of v (reflexive).
bool is_ancestor(NodeId u, NodeId v);

/// v descends from u∘b. A node at the global depth cap has no children and yields false.
bool is_b_descendant(NodeId u, Bit b, NodeId v);

/// (λ, u_1, ..., u): the root-to-u path, |u|+1 entries.
std::vector<NodeId> path_to(NodeId u);

/// The perfect binary tree B_d; owns the depth bound for child creation.
class Tree {
 public:
  explicit Tree(int depth);

  int depth() const { return depth_; }
  /// 2^{d+1} - 1.
  std::uint64_t node_count() const { return (std::uint64_t{1} << (depth_ + 1)) - 1; }
  bool contains(NodeId u) const { return u.depth() <= depth_; }

  /// u∘b; throws DepthOverflow when u is a leaf.
  NodeId child(NodeId u, Bit b) const;
  /// Same as the free function but false for any u at depth d.
  bool is_b_descendant(NodeId u, Bit b, NodeId v) const;

  /// All nodes in BFS order. Only sensible for small d.
  std::vector<NodeId> nodes() const;

 private:
  int depth_;
};

}  // namespace tonline

template <>
struct std::hash<tonline::NodeId> {
  std::size_t operator()(tonline::NodeId u) const noexcept {
    return std::hash<std::uint64_t>{}(u.code());
  }
};
