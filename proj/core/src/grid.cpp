#include "shapestab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapestab {

Grid Grid::uniform(std::size_t count) {
  if (count < 2) throw std::invalid_argument("Grid::uniform: need at least 2 nodes");
  std::vector<double> nodes(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) nodes[i] = static_cast<double>(i) / n;
  nodes.back() = 1.0;
  Grid g(std::move(nodes));
  g.uniform_ = true;
  return g;
}

Grid::Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("Grid: need at least 2 nodes");
  if (!(nodes_.front() >= 0.0)) throw std::invalid_argument("Grid: first node must be >= 0");
  if (nodes_.back() != 1.0) throw std::invalid_argument("Grid: last node must be exactly 1");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("Grid: nodes must be strictly increasing");
  }
}

std::size_t Grid::locate(double x) const noexcept {
  const std::size_t cells = nodes_.size() - 1;
  if (x <= nodes_.front()) return 0;
  if (x >= nodes_.back()) return cells - 1;
  if (uniform_ && nodes_.front() == 0.0) {
    auto i = static_cast<std::size_t>(x * static_cast<double>(cells));
    return std::min(i, cells - 1);
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

Grid Grid::refined() const {
  std::vector<double> nodes;
  nodes.reserve(2 * nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    nodes.push_back(nodes_[i]);
    nodes.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
  }
  nodes.push_back(1.0);
  Grid g(std::move(nodes));
  g.uniform_ = uniform_;
  return g;
}

}  // namespace shapestab
