#include "phasespace/grid.hpp"

#include <cmath>

#include "phasespace/errors.hpp"

namespace phasespace {

PhaseSpaceGrid::PhaseSpaceGrid(double half_width, int points)
    : half_width_(half_width), points_(points), spacing_(0.0) {
  require(std::isfinite(half_width) && half_width > 0.0, ErrorKind::InvalidArgument,
          "grid half-width must be positive");
  require(points >= 3 && points % 2 == 1, ErrorKind::InvalidArgument,
          "grid points per axis must be odd and >= 3");
  spacing_ = 2.0 * half_width / (points - 1);
}

double PhaseSpaceGrid::weight(std::size_t flat) const {
  const int ix = static_cast<int>(flat % points_);
  const int iy = static_cast<int>(flat / points_);
  const double wx = (ix == 0 || ix == points_ - 1) ? 0.5 : 1.0;
  const double wy = (iy == 0 || iy == points_ - 1) ? 0.5 : 1.0;
  return wx * wy * spacing_ * spacing_;
}

bool PhaseSpaceGrid::same_as(const PhaseSpaceGrid& other) const {
  return points_ == other.points_ && half_width_ == other.half_width_;
}

}  // namespace phasespace
