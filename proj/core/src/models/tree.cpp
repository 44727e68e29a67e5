#include "solarcast/models/tree.hpp"

#include "codec.hpp"
#include "solarcast/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace solarcast::models {

namespace {

constexpr std::size_t kPackedNodeSize = 2 * sizeof(std::int32_t) + 2 * sizeof(double);

}  // namespace

std::size_t RegressionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  // Children always follow their parent in the array.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes_[i].is_leaf()) {
      const auto l = static_cast<std::size_t>(nodes_[i].left);
      level[l] = level[l + 1] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

void RegressionTree::to_json(nlohmann::json& j) const {
  std::vector<std::uint8_t> bytes(nodes_.size() * kPackedNodeSize);
  auto* p = bytes.data();
  for (const auto& n : nodes_) {
    std::memcpy(p, &n.feature, 4);
    std::memcpy(p + 4, &n.left, 4);
    std::memcpy(p + 8, &n.threshold, 8);
    std::memcpy(p + 16, &n.value, 8);
    p += kPackedNodeSize;
  }
  j = {{"n", nodes_.size()}, {"data", codec::base64_encode(bytes)}};
}

RegressionTree RegressionTree::from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const auto bytes = codec::base64_decode(j.at("data").get<std::string>());
  if (bytes.size() != n * kPackedNodeSize || n == 0) throw Error(Errc::ParseError, "tree payload has the wrong size");
  std::vector<Node> nodes(n);
  const auto* p = bytes.data();
  for (std::size_t i = 0; i < n; ++i, p += kPackedNodeSize) {
    auto& node = nodes[i];
    std::memcpy(&node.feature, p, 4);
    std::memcpy(&node.left, p + 4, 4);
    std::memcpy(&node.threshold, p + 8, 8);
    std::memcpy(&node.value, p + 16, 8);
    if (!node.is_leaf() && (node.left <= static_cast<std::int32_t>(i) || static_cast<std::size_t>(node.left) + 1 >= n)) {
      throw Error(Errc::ParseError, "tree node " + std::to_string(i) + " has an invalid child index");
    }
  }
  return RegressionTree(std::move(nodes));
}

}  // namespace solarcast::models
