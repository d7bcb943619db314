#include "shapegram/enclosure.hpp"

#include <unordered_set>

namespace shapegram {

SideSet sides(const PlacedShape& s) {
  if (s.spec == ShapeSpec::Free3D || !s.plane) {
    throw Error(ErrorCode::Unsupported, "shape " + std::to_string(s.shape) + " is not planar and has no sides");
  }
  SideSet out{s.shape, *s.plane, {}, {}};
  GridPos step{};
  step[*s.plane] = 1;
  out.side1.reserve(s.blocks.size());
  out.side2.reserve(s.blocks.size());
  for (const auto& b : s.blocks) {
    out.side1.push_back(b.pos + step);
    out.side2.push_back(b.pos - step);
  }
  return out;
}

namespace {

// Dense flood of the empty exterior inside an inflated bounding box.
class ExteriorFlood {
 public:
  explicit ExteriorFlood(std::span<const PlacedShape> placed) {
    std::vector<GridPos> cells;
    for (const auto& s : placed) {
      for (const auto& b : s.blocks) cells.push_back(b.pos);
    }
    if (cells.empty()) return;
    box_ = bounds_of(cells).inflated(1);
    const auto n = static_cast<std::size_t>(box_.volume());
    occupied_.assign(n, false);
    reached_.assign(n, false);
    for (const auto& p : cells) occupied_[index(p)] = true;

    std::vector<GridPos> frontier;
    for (std::int32_t z = box_.min.z; z <= box_.max.z; ++z) {
      for (std::int32_t y = box_.min.y; y <= box_.max.y; ++y) {
        for (std::int32_t x = box_.min.x; x <= box_.max.x; ++x) {
          const bool boundary = x == box_.min.x || x == box_.max.x || y == box_.min.y || y == box_.max.y ||
                                z == box_.min.z || z == box_.max.z;
          const GridPos p{x, y, z};
          if (boundary && !occupied_[index(p)] && !reached_[index(p)]) {
            reached_[index(p)] = true;
            frontier.push_back(p);
          }
        }
      }
    }
    while (!frontier.empty()) {
      const GridPos p = frontier.back();
      frontier.pop_back();
      for (const auto& q : neighbors6(p)) {
        if (!box_.contains(q)) continue;
        const auto k = index(q);
        if (occupied_[k] || reached_[k]) continue;
        reached_[k] = true;
        frontier.push_back(q);
      }
    }
  }

  bool reachable(const GridPos& p) const {
    if (occupied_.empty() || !box_.contains(p)) return true;
    return reached_[index(p)];
  }

  bool any_reachable(const std::vector<GridPos>& cells) const {
    for (const auto& p : cells) {
      if (reachable(p)) return true;
    }
    return false;
  }

 private:
  std::size_t index(const GridPos& p) const {
    const auto ex = box_.extent(Axis::X);
    const auto ey = box_.extent(Axis::Y);
    return static_cast<std::size_t>((std::int64_t{p.z} - box_.min.z) * ex * ey +
                                    (std::int64_t{p.y} - box_.min.y) * ex + (p.x - box_.min.x));
  }

  Box box_{};
  std::vector<char> occupied_;
  std::vector<char> reached_;
};

}  // namespace

std::vector<SideReach> reachable_sides(std::span<const PlacedShape> placed) {
  std::vector<SideSet> all;
  all.reserve(placed.size());
  for (const auto& s : placed) all.push_back(sides(s));
  const ExteriorFlood flood(placed);
  std::vector<SideReach> out;
  out.reserve(placed.size());
  for (const auto& ss : all) out.push_back({flood.any_reachable(ss.side1), flood.any_reachable(ss.side2)});
  return out;
}

EnclosureReport enforce(const Production& p) {
  for (const auto& s : p.placed) (void)sides(s);

  EnclosureReport report;
  std::vector<std::size_t> alive(p.placed.size());
  for (std::size_t k = 0; k < alive.size(); ++k) alive[k] = k;
  while (true) {
    std::vector<PlacedShape> current;
    current.reserve(alive.size());
    for (std::size_t k : alive) current.push_back(p.placed[k]);
    const auto reach = reachable_sides(current);
    ++report.iterations;

    std::vector<std::size_t> removed;
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < alive.size(); ++k) (reach[k].both() ? removed : kept).push_back(alive[k]);
    if (removed.empty()) break;
    report.removed += removed.size();
    report.rounds.push_back(std::move(removed));
    alive = std::move(kept);
  }

  Production& out = report.production;
  out.seed = p.seed;
  for (std::size_t k : alive) out.placed.push_back(p.placed[k]);
  out.base = out.placed.size();
  out.occupancy = occupancy_of(out.placed);
  return report;
}

}  // namespace shapegram
