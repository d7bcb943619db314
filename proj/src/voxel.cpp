#include "shapegram/voxel.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_set>

namespace shapegram {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::NonIntegerCoordinate: return "NonIntegerCoordinate";
    case ErrorCode::DuplicatePosition: return "DuplicatePosition";
    case ErrorCode::EmptyModel: return "EmptyModel";
    case ErrorCode::EmptyShape: return "EmptyShape";
    case ErrorCode::UnknownShape: return "UnknownShape";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::InvalidPart: return "InvalidPart";
    case ErrorCode::InvalidShapeSet: return "InvalidShapeSet";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ConflictingPlacement: return "ConflictingPlacement";
    case ErrorCode::StaleChoice: return "StaleChoice";
    case ErrorCode::NothingToUndo: return "NothingToUndo";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

BlockType::BlockType(std::string token) : token_(std::move(token)) {
  if (token_.empty()) throw Error(ErrorCode::InvalidArgument, "block type token must be non-empty");
}

char axis_name(Axis a) { return a == Axis::X ? 'x' : (a == Axis::Y ? 'y' : 'z'); }

std::array<GridPos, 6> neighbors6(const GridPos& p) {
  std::array<GridPos, 6> out;
  for (std::size_t i = 0; i < kFaceOffsets.size(); ++i) out[i] = p + kFaceOffsets[i];
  return out;
}

bool adjacent6(const GridPos& a, const GridPos& b) {
  const auto d = a - b;
  return std::abs(d.x) + std::abs(d.y) + std::abs(d.z) == 1;
}

Box bounds_of(const std::vector<GridPos>& positions) {
  if (positions.empty()) throw Error(ErrorCode::EmptyModel, "bounding box of an empty block set");
  Box b{positions.front(), positions.front()};
  for (const auto& p : positions) {
    b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y), std::min(b.min.z, p.z)};
    b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y), std::max(b.max.z, p.z)};
  }
  return b;
}

VoxelModel::VoxelModel(std::string name, std::vector<Block> blocks)
    : name_(std::move(name)), blocks_(std::move(blocks)) {
  std::sort(blocks_.begin(), blocks_.end());
  for (std::size_t i = 1; i < blocks_.size(); ++i) {
    if (blocks_[i].pos == blocks_[i - 1].pos) {
      const auto& p = blocks_[i].pos;
      throw Error(ErrorCode::DuplicatePosition,
                  "model '" + name_ + "' has two blocks at [" + std::to_string(p.x) + "," +
                      std::to_string(p.y) + "," + std::to_string(p.z) + "]");
    }
  }
}

const Block* VoxelModel::find(const GridPos& p) const {
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), p,
                             [](const Block& b, const GridPos& q) { return b.pos < q; });
  return it != blocks_.end() && it->pos == p ? &*it : nullptr;
}

void VoxelModel::require_non_empty() const {
  if (blocks_.empty()) throw Error(ErrorCode::EmptyModel, "model '" + name_ + "' has no blocks");
}

Box bounding_box(const VoxelModel& m) {
  m.require_non_empty();
  std::vector<GridPos> ps;
  ps.reserve(m.size());
  for (const auto& b : m.blocks()) ps.push_back(b.pos);
  return bounds_of(ps);
}

bool is_connected(const VoxelModel& m) {
  if (m.empty()) return true;
  std::unordered_set<GridPos, GridPosHash> cells;
  for (const auto& b : m.blocks()) cells.insert(b.pos);
  std::unordered_set<GridPos, GridPosHash> seen{m.blocks().front().pos};
  std::vector<GridPos> stack{m.blocks().front().pos};
  while (!stack.empty()) {
    const auto p = stack.back();
    stack.pop_back();
    for (const auto& q : neighbors6(p)) {
      if (cells.count(q) && seen.insert(q).second) stack.push_back(q);
    }
  }
  return seen.size() == cells.size();
}

}  // namespace shapegram
