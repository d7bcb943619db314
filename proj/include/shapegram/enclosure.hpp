#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shapegram/production.hpp"

namespace shapegram {

/// The cells directly on either side of a planar shape: its blocks shifted by
/// +1 (side1) and -1 (side2) along the fixed axis.
struct SideSet {
  ShapeId shape = 0;
  Axis axis = Axis::Z;
  std::vector<GridPos> side1;
  std::vector<GridPos> side2;
};

/// Throws Unsupported for 3d shapes (they have no sides).
SideSet sides(const PlacedShape& s);

struct SideReach {
  bool side1 = false;
  bool side2 = false;

  bool both() const noexcept { return side1 && side2; }
  friend bool operator==(const SideReach&, const SideReach&) = default;
};

/// Reachability of each placed shape's sides (index-aligned with `placed`)
/// from the exterior: a 6-connected flood through empty cells of the occupied
/// bounding box inflated by one, seeded from that box's empty boundary cells.
/// Occupied side cells are never reachable; cells outside the box always are.
std::vector<SideReach> reachable_sides(std::span<const PlacedShape> placed);

struct EnclosureReport {
  Production production;
  // Indices (into the input production's placed list) removed in each round
  // that removed something.
  std::vector<std::vector<std::size_t>> rounds;
  std::size_t iterations = 0;  // flood passes, including the final one that removed nothing
  std::size_t removed = 0;
};

/// Repeatedly removes every shape with both sides reachable until a pass
/// removes nothing. The surviving shapes become the base of the returned
/// production and its history is cleared. Throws Unsupported if any shape is 3d.
EnclosureReport enforce(const Production& p);

}  // namespace shapegram
