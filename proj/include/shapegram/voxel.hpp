#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "shapegram/error.hpp"

namespace shapegram {

/// Opaque block material, e.g. "stone" or "glass". Equality is exact token equality.
class BlockType {
 public:
  BlockType() = default;
  explicit BlockType(std::string token);

  const std::string& token() const noexcept { return token_; }

  friend bool operator==(const BlockType&, const BlockType&) = default;
  friend auto operator<=>(const BlockType&, const BlockType&) = default;

 private:
  std::string token_;
};

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

char axis_name(Axis a);

/// Integer grid cell. z is the vertical axis. Ordering is (z, y, x), which is
/// the order writers use when emitting blocks.
struct GridPos {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  std::int32_t operator[](Axis a) const noexcept {
    return a == Axis::X ? x : (a == Axis::Y ? y : z);
  }
  std::int32_t& operator[](Axis a) noexcept {
    return a == Axis::X ? x : (a == Axis::Y ? y : z);
  }

  friend bool operator==(const GridPos&, const GridPos&) = default;
  friend std::strong_ordering operator<=>(const GridPos& a, const GridPos& b) {
    if (auto c = a.z <=> b.z; c != 0) return c;
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }

  GridPos operator+(const GridPos& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
  GridPos operator-(const GridPos& o) const noexcept { return {x - o.x, y - o.y, z - o.z}; }
};

struct GridPosHash {
  std::size_t operator()(const GridPos& p) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(p.x);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(p.y);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(p.z);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct Block {
  BlockType type;
  GridPos pos;

  friend bool operator==(const Block&, const Block&) = default;
  // (z, y, x, type token): the canonical serialization order.
  friend std::strong_ordering operator<=>(const Block& a, const Block& b) {
    if (auto c = a.pos <=> b.pos; c != 0) return c;
    return a.type.token() <=> b.type.token();
  }
};

/// Offsets in the fixed order +x, -x, +y, -y, +z, -z.
inline constexpr std::array<GridPos, 6> kFaceOffsets{{
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

std::array<GridPos, 6> neighbors6(const GridPos& p);

bool adjacent6(const GridPos& a, const GridPos& b);

struct Box {
  GridPos min;
  GridPos max;

  friend bool operator==(const Box&, const Box&) = default;

  std::int64_t extent(Axis a) const noexcept { return std::int64_t{max[a]} - min[a] + 1; }
  std::int64_t volume() const noexcept { return extent(Axis::X) * extent(Axis::Y) * extent(Axis::Z); }
  bool contains(const GridPos& p) const noexcept {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
           p.z <= max.z;
  }
  Box inflated(std::int32_t by) const noexcept {
    return {{min.x - by, min.y - by, min.z - by}, {max.x + by, max.y + by, max.z + by}};
  }
};

/// Component-wise bounds of a non-empty position range. Throws EmptyModel on empty input.
Box bounds_of(const std::vector<GridPos>& positions);

/// A finite set of blocks with at most one block per position. Blocks are kept
/// sorted by position; the model is immutable once built.
class VoxelModel {
 public:
  VoxelModel() = default;
  /// Throws DuplicatePosition when two blocks share a cell.
  VoxelModel(std::string name, std::vector<Block> blocks);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  bool empty() const noexcept { return blocks_.empty(); }

  /// Pointer to the block at p, or nullptr.
  const Block* find(const GridPos& p) const;

  /// Throws EmptyModel if the model cannot serve as an example.
  void require_non_empty() const;

  /// Block-set equality; the name is not compared.
  friend bool operator==(const VoxelModel& a, const VoxelModel& b) { return a.blocks_ == b.blocks_; }

 private:
  std::string name_;
  std::vector<Block> blocks_;
};

/// Throws EmptyModel for an empty model.
Box bounding_box(const VoxelModel& m);

/// Whether the model's block graph is connected under face adjacency.
bool is_connected(const VoxelModel& m);

}  // namespace shapegram
