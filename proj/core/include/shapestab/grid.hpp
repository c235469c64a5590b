#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shapestab {

/// Strictly increasing nodes on [0, 1] with the last node exactly 1.
class Grid {
 public:
  /// `count` equally spaced nodes including both endpoints; count >= 2.
  static Grid uniform(std::size_t count);

  /// Throws std::invalid_argument if the node invariants are violated.
  explicit Grid(std::vector<double> nodes);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

  /// Index i of the cell [nodes[i], nodes[i+1]] containing x (clamped).
  std::size_t locate(double x) const noexcept;

  /// Grid with each cell split in half.
  Grid refined() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<double> nodes_;
  bool uniform_ = false;
};

}  // namespace shapestab
