#pragma once

#include <cstddef>

#include "phasespace/fock.hpp"

namespace phasespace {

/// Uniform square lattice over [-L, L]^2 in (Re alpha, Im alpha). Flat index
/// iy * points + ix, so Re alpha varies fastest.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(double half_width, int points);

  double half_width() const { return half_width_; }
  int points() const { return points_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return static_cast<std::size_t>(points_) * points_; }

  double coordinate(int i) const { return -half_width_ + i * spacing_; }
  Complex point(int ix, int iy) const { return {coordinate(ix), coordinate(iy)}; }
  Complex point(std::size_t flat) const {
    return point(static_cast<int>(flat % points_), static_cast<int>(flat / points_));
  }

  /// 2D trapezoid weight of a sample, including h^2.
  double weight(std::size_t flat) const;

  bool same_as(const PhaseSpaceGrid& other) const;

 private:
  double half_width_;
  int points_;
  double spacing_;
};

}  // namespace phasespace
