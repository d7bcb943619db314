#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapegram/transform.hpp"
#include "shapegram/voxel.hpp"

namespace shapegram {

using ShapeId = std::int32_t;

/// Structural class a shape must obey.
enum class ShapeSpec { Rectangular, Planar2D, Free3D };

std::string_view to_string(ShapeSpec spec);  // "rect" | "2d" | "3d"
ShapeSpec parse_shape_spec(std::string_view text);

enum class Violation {
  None,
  Empty,
  DuplicatePosition,
  Incoherent,
  NotPlanar,
  NotRectangular,
};

std::string_view to_string(Violation v);

/// A coherent block subset of an example. Blocks are sorted by (z, y, x).
/// `plane` is set when the shape is locked to one plane, as happens with the
/// three-plane initialization of overlap mode; otherwise the plane of a planar
/// shape is derived from its extent.
struct Shape {
  ShapeId id = 0;
  ShapeSpec spec = ShapeSpec::Rectangular;
  std::vector<Block> blocks;
  std::optional<Axis> plane;

  std::size_t size() const noexcept { return blocks.size(); }
  std::vector<GridPos> positions() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Checks coherence and the shape-spec invariants of a block set. When `plane` is
/// given the blocks must additionally lie in one plane orthogonal to it.
Violation check_shape(std::span<const Block> blocks, ShapeSpec spec,
                      std::optional<Axis> plane = std::nullopt);

/// Builds a validated shape; throws InvalidShapeSet naming the violation.
Shape make_shape(ShapeId id, std::vector<Block> blocks, ShapeSpec spec,
                 std::optional<Axis> plane = std::nullopt);

/// The fixed axis of a planar shape: the locked plane if present, otherwise the
/// first axis of (z, y, x) along which all blocks share one coordinate.
/// Empty for shapes that are not planar.
std::optional<Axis> plane_axis(const Shape& s);

/// Maps every block position through t. Types and the shape spec are unchanged; a
/// locked plane is mapped along with the geometry.
Shape apply_transform(const GridTransform& t, const Shape& s);

/// Translation-and-rotation invariant representative of a shape's block set.
struct CanonicalForm {
  std::vector<Block> blocks;  // sorted by (z, y, x, type), bounding-box min at the origin

  std::string serialize() const;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend std::strong_ordering operator<=>(const CanonicalForm& a, const CanonicalForm& b) {
    return std::lexicographical_compare_three_way(a.blocks.begin(), a.blocks.end(),
                                                  b.blocks.begin(), b.blocks.end());
  }
};

struct Canonicalized {
  CanonicalForm form;
  GridTransform to_shape;  // maps the canonical form onto the shape
};

/// Smallest serialization over the four z-rotations, each translated so its
/// bounding-box minimum is the origin. Ties pick the smallest rotation.
Canonicalized canonicalize(std::span<const Block> blocks);
Canonicalized canonicalize(const Shape& s);

/// The transform mapping si onto sj block-for-block (positions and types), or
/// nothing when no such transform exists.
std::optional<GridTransform> shapes_match(const Shape& si, const Shape& sj);

/// A set of mutually matching shapes.
struct MatchClass {
  std::vector<ShapeId> members;  // ascending
  CanonicalForm canonical;
  std::map<ShapeId, GridTransform> rep_transforms;  // canonical form -> member

  bool contains(ShapeId id) const { return rep_transforms.count(id) != 0; }
  friend bool operator==(const MatchClass&, const MatchClass&) = default;
};

/// Partitions shapes by canonical form. Classes are ordered by canonical form,
/// members by id.
std::vector<MatchClass> match_classes(std::span<const Shape> shapes);

}  // namespace shapegram
