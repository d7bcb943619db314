#pragma once

#include <cstdint>

#include "shapegram/voxel.hpp"

namespace shapegram {

/// Rotation by rot * 90 degrees about the z axis followed by an integer
/// translation: p -> R(rot) p + delta. The four rotations form the whole group;
/// reflections are not representable.
struct GridTransform {
  std::int32_t rot = 0;  // in [0, 4)
  GridPos delta{};

  static GridTransform identity() { return {}; }
  static GridTransform translation(const GridPos& d) { return {0, d}; }
  /// Throws InvalidArgument for rot outside [0, 4).
  static GridTransform make(std::int32_t rot, const GridPos& delta);

  GridPos apply(const GridPos& p) const noexcept;
  /// Rotation only, no translation.
  GridPos rotate(const GridPos& p) const noexcept;
  GridTransform inverse() const noexcept;
  /// (*this * inner)(p) == apply(inner.apply(p)).
  GridTransform operator*(const GridTransform& inner) const noexcept;

  /// Image of an axis under the rotation (z is fixed, x and y swap for odd rot).
  Axis map_axis(Axis a) const noexcept;

  friend bool operator==(const GridTransform&, const GridTransform&) = default;
};

/// Rotation of p by k quarter turns about z.
GridPos rotate_z(const GridPos& p, std::int32_t k) noexcept;

}  // namespace shapegram
