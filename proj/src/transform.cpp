#include "shapegram/transform.hpp"

#include <string>

namespace shapegram {

GridPos rotate_z(const GridPos& p, std::int32_t k) noexcept {
  switch (((k % 4) + 4) % 4) {
    case 1: return {-p.y, p.x, p.z};
    case 2: return {-p.x, -p.y, p.z};
    case 3: return {p.y, -p.x, p.z};
    default: return p;
  }
}

GridTransform GridTransform::make(std::int32_t rot, const GridPos& delta) {
  if (rot < 0 || rot > 3) {
    throw Error(ErrorCode::InvalidArgument, "rotation index " + std::to_string(rot) + " not in [0,4)");
  }
  return {rot, delta};
}

GridPos GridTransform::apply(const GridPos& p) const noexcept { return rotate_z(p, rot) + delta; }

GridPos GridTransform::rotate(const GridPos& p) const noexcept { return rotate_z(p, rot); }

GridTransform GridTransform::inverse() const noexcept {
  const std::int32_t inv = (4 - rot) % 4;
  const GridPos d = rotate_z(delta, inv);
  return {inv, {-d.x, -d.y, -d.z}};
}

GridTransform GridTransform::operator*(const GridTransform& inner) const noexcept {
  return {(rot + inner.rot) % 4, rotate_z(inner.delta, rot) + delta};
}

Axis GridTransform::map_axis(Axis a) const noexcept {
  if (a == Axis::Z || rot % 2 == 0) return a;
  return a == Axis::X ? Axis::Y : Axis::X;
}

}  // namespace shapegram
