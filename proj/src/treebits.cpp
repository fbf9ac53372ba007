#include "tonline/treebits.hpp"

namespace tonline {

NodeId NodeId::from_bits(int depth, std::uint64_t bits) {
  if (depth < 0 || depth > kMaxTreeDepth) {
    throw DepthOverflow("node depth " + std::to_string(depth) + " outside [0, 62]");
  }
  const std::uint64_t top = std::uint64_t{1} << depth;
  return NodeId(top | (bits & (top - 1)));
}

NodeId NodeId::from_code(std::uint64_t code) {
  if (code == 0 || std::bit_width(code) - 1 > kMaxTreeDepth) {
    throw DepthOverflow("invalid node code " + std::to_string(code));
  }
  return NodeId(code);
}

NodeId NodeId::parse(std::string_view text) {
  if (text.size() > static_cast<std::size_t>(kMaxTreeDepth)) {
    throw DepthOverflow("node string longer than 62 bits");
  }
  std::uint64_t code = 1;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ParseError("invalid node bitstring '" + std::string(text) + "'");
    }
    code = (code << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return NodeId(code);
}

Bit NodeId::bit(int i) const {
  return static_cast<Bit>((code_ >> (depth() - i)) & 1U);
}

NodeId NodeId::prefix(int k) const { return NodeId(code_ >> (depth() - k)); }

NodeId NodeId::parent() const { return is_root() ? *this : NodeId(code_ >> 1); }

std::string NodeId::to_string() const {
  const int k = depth();
  std::string s(static_cast<std::size_t>(k), '0');
  for (int i = 1; i <= k; ++i) {
    if (bit(i)) s[static_cast<std::size_t>(i - 1)] = '1';
  }
  return s;
}

bool is_ancestor(NodeId u, NodeId v) {
  const int du = u.depth();
  const int dv = v.depth();
  return du <= dv && (v.code() >> (dv - du)) == u.code();
}

bool is_b_descendant(NodeId u, Bit b, NodeId v) {
  if (u.depth() >= kMaxTreeDepth) return false;
  const std::uint64_t child = (u.code() << 1) | (b & 1U);
  return is_ancestor(NodeId::from_code(child), v);
}

std::vector<NodeId> path_to(NodeId u) {
  const int k = u.depth();
  std::vector<NodeId> path;
  path.reserve(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) path.push_back(u.prefix(i));
  return path;
}

Tree::Tree(int depth) : depth_(depth) {
  if (depth < 0 || depth > kMaxTreeDepth) {
    throw DepthOverflow("tree depth " + std::to_string(depth) + " outside [0, 62]");
  }
}

NodeId Tree::child(NodeId u, Bit b) const {
  if (u.depth() >= depth_) {
    throw DepthOverflow("node '" + u.to_string() + "' is a leaf of B_" + std::to_string(depth_));
  }
  return NodeId::from_code((u.code() << 1) | (b & 1U));
}

bool Tree::is_b_descendant(NodeId u, Bit b, NodeId v) const {
  if (u.depth() >= depth_) return false;
  return tonline::is_b_descendant(u, b, v);
}

std::vector<NodeId> Tree::nodes() const {
  std::vector<NodeId> out;
  out.reserve(node_count());
  for (std::uint64_t i = 0; i < node_count(); ++i) out.push_back(NodeId::from_bfs_index(i));
  return out;
}

}  // namespace tonline
