#include "shapegram/shape.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace shapegram {

std::string_view to_string(ShapeSpec spec) {
  switch (spec) {
    case ShapeSpec::Rectangular: return "rect";
    case ShapeSpec::Planar2D: return "2d";
    case ShapeSpec::Free3D: return "3d";
  }
  return "?";
}

ShapeSpec parse_shape_spec(std::string_view text) {
  if (text == "rect") return ShapeSpec::Rectangular;
  if (text == "2d") return ShapeSpec::Planar2D;
  if (text == "3d") return ShapeSpec::Free3D;
  throw Error(ErrorCode::InvalidArgument, "unknown shape spec '" + std::string(text) + "'");
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::None: return "None";
    case Violation::Empty: return "Empty";
    case Violation::DuplicatePosition: return "DuplicatePosition";
    case Violation::Incoherent: return "Incoherent";
    case Violation::NotPlanar: return "NotPlanar";
    case Violation::NotRectangular: return "NotRectangular";
  }
  return "?";
}

std::vector<GridPos> Shape::positions() const {
  std::vector<GridPos> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(b.pos);
  return out;
}

namespace {

constexpr std::array<Axis, 3> kPlanePreference{Axis::Z, Axis::Y, Axis::X};

bool coherent(std::span<const Block> blocks) {
  std::unordered_set<GridPos, GridPosHash> cells;
  for (const auto& b : blocks) cells.insert(b.pos);
  std::unordered_set<GridPos, GridPosHash> seen{blocks.front().pos};
  std::vector<GridPos> stack{blocks.front().pos};
  while (!stack.empty()) {
    const auto p = stack.back();
    stack.pop_back();
    for (const auto& q : neighbors6(p)) {
      if (cells.count(q) && seen.insert(q).second) stack.push_back(q);
    }
  }
  return seen.size() == cells.size();
}

Box block_bounds(std::span<const Block> blocks) {
  Box b{blocks.front().pos, blocks.front().pos};
  for (const auto& blk : blocks) {
    const auto& p = blk.pos;
    b.min = {std::min(b.min.x, p.x), std::min(b.min.y, p.y), std::min(b.min.z, p.z)};
    b.max = {std::max(b.max.x, p.x), std::max(b.max.y, p.y), std::max(b.max.z, p.z)};
  }
  return b;
}

}  // namespace

Violation check_shape(std::span<const Block> blocks, ShapeSpec spec, std::optional<Axis> plane) {
  if (blocks.empty()) return Violation::Empty;
  {
    std::unordered_set<GridPos, GridPosHash> cells;
    for (const auto& b : blocks) {
      if (!cells.insert(b.pos).second) return Violation::DuplicatePosition;
    }
  }
  if (!coherent(blocks)) return Violation::Incoherent;
  if (spec == ShapeSpec::Free3D) return Violation::None;

  const Box box = block_bounds(blocks);
  const bool planar = plane ? box.extent(*plane) == 1
                            : std::any_of(kPlanePreference.begin(), kPlanePreference.end(),
                                          [&](Axis a) { return box.extent(a) == 1; });
  if (!planar) return Violation::NotPlanar;
  if (spec == ShapeSpec::Rectangular && box.volume() != static_cast<std::int64_t>(blocks.size())) {
    return Violation::NotRectangular;
  }
  return Violation::None;
}

Shape make_shape(ShapeId id, std::vector<Block> blocks, ShapeSpec spec, std::optional<Axis> plane) {
  if (blocks.empty()) throw Error(ErrorCode::EmptyShape, "shape " + std::to_string(id) + " has no blocks");
  std::sort(blocks.begin(), blocks.end());
  if (const auto v = check_shape(blocks, spec, plane); v != Violation::None) {
    throw Error(ErrorCode::InvalidShapeSet,
                "shape " + std::to_string(id) + " violates " + std::string(to_string(spec)) + ": " +
                    std::string(to_string(v)));
  }
  return Shape{id, spec, std::move(blocks), plane};
}

std::optional<Axis> plane_axis(const Shape& s) {
  if (s.plane) return s.plane;
  if (s.blocks.empty()) return std::nullopt;
  const Box box = block_bounds(s.blocks);
  for (Axis a : kPlanePreference) {
    if (box.extent(a) == 1) return a;
  }
  return std::nullopt;
}

Shape apply_transform(const GridTransform& t, const Shape& s) {
  Shape out{s.id, s.spec, {}, std::nullopt};
  out.blocks.reserve(s.blocks.size());
  for (const auto& b : s.blocks) out.blocks.push_back({b.type, t.apply(b.pos)});
  std::sort(out.blocks.begin(), out.blocks.end());
  if (s.plane) out.plane = t.map_axis(*s.plane);
  return out;
}

std::string CanonicalForm::serialize() const {
  std::string out;
  for (const auto& b : blocks) {
    out += std::to_string(b.pos.z) + ',' + std::to_string(b.pos.y) + ',' + std::to_string(b.pos.x) +
           ',' + b.type.token() + ';';
  }
  return out;
}

Canonicalized canonicalize(std::span<const Block> blocks) {
  if (blocks.empty()) throw Error(ErrorCode::EmptyShape, "cannot canonicalize an empty shape");
  std::optional<Canonicalized> best;
  std::vector<Block> rotated(blocks.size());
  for (std::int32_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      rotated[i] = {blocks[i].type, rotate_z(blocks[i].pos, k)};
    }
    const Box box = block_bounds(rotated);
    for (auto& b : rotated) b.pos = b.pos - box.min;
    std::sort(rotated.begin(), rotated.end());
    CanonicalForm form{rotated};
    if (!best || form < best->form) {
      // form = R_k(s) - min, hence s = R_k^-1 (form + min).
      const GridTransform to_form{k, GridPos{-box.min.x, -box.min.y, -box.min.z}};
      best = Canonicalized{std::move(form), to_form.inverse()};
    }
  }
  return *best;
}

Canonicalized canonicalize(const Shape& s) { return canonicalize(std::span<const Block>(s.blocks)); }

std::optional<GridTransform> shapes_match(const Shape& si, const Shape& sj) {
  if (si.size() != sj.size()) return std::nullopt;
  auto ci = canonicalize(si);
  auto cj = canonicalize(sj);
  if (ci.form != cj.form) return std::nullopt;
  return cj.to_shape * ci.to_shape.inverse();
}

std::vector<MatchClass> match_classes(std::span<const Shape> shapes) {
  std::map<CanonicalForm, MatchClass> by_form;
  for (const auto& s : shapes) {
    auto c = canonicalize(s);
    auto& cls = by_form[c.form];
    if (cls.members.empty()) cls.canonical = c.form;
    cls.members.push_back(s.id);
    cls.rep_transforms[s.id] = c.to_shape;
  }
  std::vector<MatchClass> out;
  out.reserve(by_form.size());
  for (auto& [form, cls] : by_form) {
    std::sort(cls.members.begin(), cls.members.end());
    out.push_back(std::move(cls));
  }
  return out;
}

}  // namespace shapegram
