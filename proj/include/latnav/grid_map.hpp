#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "latnav/error.hpp"
#include "latnav/geometry.hpp"

namespace latnav {

struct Cell {
  int x = 0;
  int y = 0;

  constexpr bool operator==(const Cell&) const = default;
  constexpr auto operator<=>(const Cell&) const = default;
};

/// Occupancy grid. Cell (0,0) covers [0,res)x[0,res); the area outside the
/// grid counts as occupied for clearance queries.
class GridMap {
 public:
  GridMap() = default;

  GridMap(int width, int height, double resolution)
      : width_(width), height_(height), resolution_(resolution) {
    if (width <= 0 || height <= 0)
      throw Error(ErrorKind::InvalidParameter, "map dimensions must be positive");
    if (!(resolution > 0.0))
      throw Error(ErrorKind::InvalidParameter, "map resolution must be positive");
    occupancy_.assign(static_cast<size_t>(width) * height, 0);
  }

  /// Builds a map from ASCII rows ('#' occupied, anything else free). The
  /// first row is the top of the map (largest y).
  static GridMap fromAscii(const std::vector<std::string>& rows, double resolution) {
    if (rows.empty()) throw Error(ErrorKind::InvalidParameter, "ASCII map has no rows");
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows.front().size());
    GridMap m(w, h, resolution);
    for (int r = 0; r < h; ++r) {
      if (static_cast<int>(rows[r].size()) != w)
        throw Error(ErrorKind::InvalidParameter,
                    "ASCII map row " + std::to_string(r) + " has inconsistent width");
      for (int c = 0; c < w; ++c) m.setOccupied({c, h - 1 - r}, rows[r][c] == '#');
    }
    return m;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  size_t cellCount() const { return occupancy_.size(); }

  bool inBounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  size_t index(Cell c) const { return static_cast<size_t>(c.y) * width_ + c.x; }
  Cell cellAt(size_t idx) const {
    return {static_cast<int>(idx % width_), static_cast<int>(idx / width_)};
  }

  bool occupied(Cell c) const { return !inBounds(c) || occupancy_[index(c)] != 0; }
  void setOccupied(Cell c, bool occ) {
    if (!inBounds(c)) throw Error(ErrorKind::InvalidParameter, "cell out of bounds");
    occupancy_[index(c)] = occ ? 1 : 0;
  }

  Vec2 cellCenter(Cell c) const {
    return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
  }
  Cell cellOf(Vec2 p) const {
    return {static_cast<int>(std::floor(p.x / resolution_)),
            static_cast<int>(std::floor(p.y / resolution_))};
  }

  std::vector<Cell> occupiedCells() const {
    std::vector<Cell> out;
    for (size_t i = 0; i < occupancy_.size(); ++i)
      if (occupancy_[i]) out.push_back(cellAt(i));
    return out;
  }

  /// Distance from p to the square of cell c.
  double distanceToCell(Vec2 p, Cell c) const {
    const double h = 0.5 * resolution_;
    const Vec2 ctr = cellCenter(c);
    const double dx = std::max(0.0, std::abs(p.x - ctr.x) - h);
    const double dy = std::max(0.0, std::abs(p.y - ctr.y) - h);
    return std::hypot(dx, dy);
  }

  /// True iff a disk of the given radius centred at p touches no occupied
  /// cell and stays within the map (contact at exactly `radius` is allowed).
  bool diskFree(Vec2 p, double radius) const {
    const double wx = width_ * resolution_, wy = height_ * resolution_;
    if (p.x - radius < 0.0 || p.y - radius < 0.0 || p.x + radius > wx || p.y + radius > wy)
      return false;
    const Cell lo = cellOf({p.x - radius, p.y - radius});
    const Cell hi = cellOf({p.x + radius, p.y + radius});
    for (int y = std::max(lo.y, 0); y <= std::min(hi.y, height_ - 1); ++y)
      for (int x = std::max(lo.x, 0); x <= std::min(hi.x, width_ - 1); ++x)
        if (occupancy_[index({x, y})] && distanceToCell(p, {x, y}) < radius) return false;
    return true;
  }

  bool operator==(const GridMap&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<std::uint8_t> occupancy_;
};

}  // namespace latnav
