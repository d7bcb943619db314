#include "shapegram/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace shapegram {

std::string_view to_string(SearchOps ops) {
  switch (ops) {
    case SearchOps::MergeOnly: return "merge";
    case SearchOps::SplitOnly: return "split";
    case SearchOps::Both: return "both";
  }
  return "?";
}

SearchOps parse_search_ops(std::string_view text) {
  if (text == "merge") return SearchOps::MergeOnly;
  if (text == "split") return SearchOps::SplitOnly;
  if (text == "both") return SearchOps::Both;
  throw Error(ErrorCode::InvalidArgument, "unknown search operations '" + std::string(text) + "'");
}

const Shape* ShapeSet::find(ShapeId id) const {
  for (const auto& s : shapes) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

ShapeId ShapeSet::next_id() const {
  ShapeId next = 0;
  for (const auto& s : shapes) next = std::max(next, s.id + 1);
  return next;
}

namespace {

constexpr double kZeroEntropy = 1e-12;
constexpr double kLogTolerance = 1e-12;

double entropy_of_counts(std::span<const int> counts, int total) {
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (int c : counts) {
    if (c <= 0 || c == total) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double entropy(std::span<const Block> blocks) {
  std::map<std::string, int> counts;
  for (const auto& b : blocks) ++counts[b.type.token()];
  std::vector<int> c;
  c.reserve(counts.size());
  for (const auto& [_, n] : counts) c.push_back(n);
  return entropy_of_counts(c, static_cast<int>(blocks.size()));
}

double cost(std::span<const Shape> shapes, double alpha) {
  double h = 0.0;
  for (const auto& s : shapes) h += entropy(s);
  if (h == 0.0) return 0.0;
  return std::pow(1.0 + static_cast<double>(shapes.size()), alpha) * h;
}

int compare_cost(std::size_t count_before, double entropy_before, std::size_t count_after,
                 double entropy_after, double alpha) {
  const bool zero_before = entropy_before <= kZeroEntropy;
  const bool zero_after = entropy_after <= kZeroEntropy;
  if (zero_before && zero_after) return 0;
  if (zero_after) return -1;
  if (zero_before) return 1;
  const double d = alpha * (std::log1p(static_cast<double>(count_after)) -
                            std::log1p(static_cast<double>(count_before))) +
                   std::log(entropy_after) - std::log(entropy_before);
  if (d < -kLogTolerance) return -1;
  if (d > kLogTolerance) return 1;
  return 0;
}

namespace {

std::vector<Block> union_blocks(const Shape& a, const Shape& b) {
  std::vector<Block> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.blocks.begin(), a.blocks.end(), b.blocks.begin(), b.blocks.end(),
                 std::back_inserter(out));
  // Overlapping shapes come from one source, so equal positions carry equal types.
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Block& x, const Block& y) { return x.pos == y.pos; }),
            out.end());
  return out;
}

void sort_by_id(std::vector<Shape>& shapes) {
  std::sort(shapes.begin(), shapes.end(), [](const Shape& a, const Shape& b) { return a.id < b.id; });
}

const Shape& require_shape(const ShapeSet& s, ShapeId id) {
  const Shape* found = s.find(id);
  if (!found) throw Error(ErrorCode::UnknownShape, "no shape with id " + std::to_string(id));
  return *found;
}

}  // namespace

OpResult merge(const ShapeSet& s, ShapeId i, ShapeId j) {
  if (i == j) throw Error(ErrorCode::InvalidArgument, "cannot merge shape " + std::to_string(i) + " with itself");
  const Shape& a = require_shape(s, i);
  const Shape& b = require_shape(s, j);
  OpResult out;
  if (a.plane && b.plane && *a.plane != *b.plane) {
    out.plane_mismatch = true;
    out.violation = Violation::NotPlanar;
    return out;
  }
  const std::optional<Axis> lock = a.plane ? a.plane : b.plane;
  auto blocks = union_blocks(a, b);
  if (const auto v = check_shape(blocks, s.spec, lock); v != Violation::None) {
    out.violation = v;
    return out;
  }
  ShapeSet next = s;
  std::erase_if(next.shapes, [&](const Shape& x) { return x.id == i || x.id == j; });
  next.shapes.push_back(Shape{std::min(i, j), s.spec, std::move(blocks), lock});
  sort_by_id(next.shapes);
  out.set = std::move(next);
  return out;
}

OpResult split(const ShapeSet& s, ShapeId i, std::span<const GridPos> part) {
  const Shape& src = require_shape(s, i);
  std::set<GridPos> wanted(part.begin(), part.end());
  if (wanted.empty() || wanted.size() >= src.size()) {
    throw Error(ErrorCode::InvalidPart, "split part must be a non-empty proper subset of shape " + std::to_string(i));
  }
  std::vector<Block> first;
  std::vector<Block> second;
  for (const auto& b : src.blocks) (wanted.count(b.pos) ? first : second).push_back(b);
  if (first.size() != wanted.size()) {
    throw Error(ErrorCode::InvalidPart, "split part is not a subset of shape " + std::to_string(i));
  }
  OpResult out;
  for (const auto* half : {&first, &second}) {
    if (const auto v = check_shape(*half, s.spec, src.plane); v != Violation::None) {
      out.violation = v;
      return out;
    }
  }
  ShapeSet next = s;
  const ShapeId fresh = s.next_id();
  std::erase_if(next.shapes, [&](const Shape& x) { return x.id == i; });
  next.shapes.push_back(Shape{i, s.spec, std::move(first), src.plane});
  next.shapes.push_back(Shape{fresh, s.spec, std::move(second), src.plane});
  sort_by_id(next.shapes);
  out.set = std::move(next);
  return out;
}

namespace {

// Dense view of a model: cells in (z, y, x) order, interned types, and the
// face-neighbour table.
struct ModelIndex {
  std::vector<GridPos> pos;
  std::vector<int> type;
  std::vector<BlockType> type_names;
  std::vector<std::array<int, 6>> nbr;
  Box box;

  explicit ModelIndex(const VoxelModel& m) {
    m.require_non_empty();
    box = bounding_box(m);
    std::map<BlockType, int> ids;
    std::unordered_map<GridPos, int, GridPosHash> at;
    for (const auto& b : m.blocks()) {
      auto [it, inserted] = ids.emplace(b.type, static_cast<int>(type_names.size()));
      if (inserted) type_names.push_back(b.type);
      at.emplace(b.pos, static_cast<int>(pos.size()));
      pos.push_back(b.pos);
      type.push_back(it->second);
    }
    nbr.resize(pos.size());
    for (std::size_t c = 0; c < pos.size(); ++c) {
      for (std::size_t d = 0; d < 6; ++d) {
        auto it = at.find(pos[c] + kFaceOffsets[d]);
        nbr[c][d] = it == at.end() ? -1 : it->second;
      }
    }
  }

  std::size_t size() const { return pos.size(); }
  int types() const { return static_cast<int>(type_names.size()); }
  Block block(int c) const { return {type_names[type[c]], pos[c]}; }
};

Axis direction_axis(std::size_t d) { return static_cast<Axis>(d / 2); }

// Largest connected components / rectangles used to build the maximal
// initialization for split-only search.
class MaximalCover {
 public:
  MaximalCover(const ModelIndex& ix, ShapeSpec spec) : ix_(ix), spec_(spec), covered_(ix.size(), false) {
    for (std::size_t c = 0; c < ix.size(); ++c) at_.emplace(ix.pos[c], static_cast<int>(c));
  }

  std::vector<std::vector<int>> run() {
    std::vector<std::vector<int>> out;
    std::size_t remaining = ix_.size();
    while (remaining > 0) {
      std::vector<int> best = spec_ == ShapeSpec::Rectangular ? largest_rectangle() : largest_component();
      for (int c : best) covered_[c] = true;
      remaining -= best.size();
      std::sort(best.begin(), best.end());
      out.push_back(std::move(best));
    }
    return out;
  }

 private:
  int cell(const GridPos& p) const {
    auto it = at_.find(p);
    return it == at_.end() || covered_[it->second] ? -1 : it->second;
  }

  // Components grow through uncovered cells; for Planar2D the growth stays in
  // the slice orthogonal to `lock`.
  std::vector<int> component(int seed, std::optional<Axis> lock, std::vector<char>& seen) const {
    std::vector<int> comp{seed};
    seen[seed] = true;
    for (std::size_t k = 0; k < comp.size(); ++k) {
      const int c = comp[k];
      for (std::size_t d = 0; d < 6; ++d) {
        if (lock && direction_axis(d) == *lock) continue;
        const int n = ix_.nbr[c][d];
        if (n >= 0 && !covered_[n] && !seen[n]) {
          seen[n] = true;
          comp.push_back(n);
        }
      }
    }
    return comp;
  }

  std::vector<int> largest_component() const {
    std::vector<int> best;
    const std::vector<std::optional<Axis>> locks =
        spec_ == ShapeSpec::Free3D ? std::vector<std::optional<Axis>>{std::nullopt}
                                   : std::vector<std::optional<Axis>>{Axis::Z, Axis::Y, Axis::X};
    for (const auto& lock : locks) {
      std::vector<char> seen(ix_.size(), false);
      for (std::size_t c = 0; c < ix_.size(); ++c) {
        if (covered_[c] || seen[c]) continue;
        auto comp = component(static_cast<int>(c), lock, seen);
        if (comp.size() > best.size()) best = std::move(comp);
      }
    }
    return best;
  }

  std::vector<int> largest_rectangle() const {
    struct Best {
      std::int64_t area = 0;
      Axis axis = Axis::Z;
      std::int32_t level = 0, u0 = 0, u1 = 0, v0 = 0, v1 = 0;
    } best;
    for (Axis axis : {Axis::Z, Axis::Y, Axis::X}) {
      const Axis u_axis = axis == Axis::X ? Axis::Y : Axis::X;
      const Axis v_axis = axis == Axis::Z ? Axis::Y : Axis::Z;
      const std::int32_t width = static_cast<std::int32_t>(ix_.box.extent(u_axis));
      for (std::int32_t level = ix_.box.min[axis]; level <= ix_.box.max[axis]; ++level) {
        std::vector<std::int32_t> heights(width, 0);
        for (std::int32_t v = ix_.box.min[v_axis]; v <= ix_.box.max[v_axis]; ++v) {
          for (std::int32_t u = 0; u < width; ++u) {
            GridPos p;
            p[axis] = level;
            p[u_axis] = ix_.box.min[u_axis] + u;
            p[v_axis] = v;
            heights[u] = cell(p) >= 0 ? heights[u] + 1 : 0;
          }
          // Largest rectangle under the histogram.
          std::vector<std::int32_t> stack;
          for (std::int32_t u = 0; u <= width; ++u) {
            const std::int32_t h = u < width ? heights[u] : 0;
            while (!stack.empty() && heights[stack.back()] >= h) {
              const std::int32_t top = stack.back();
              stack.pop_back();
              const std::int32_t left = stack.empty() ? 0 : stack.back() + 1;
              const std::int64_t area = std::int64_t{heights[top]} * (u - left);
              if (area > best.area) {
                best = {area, axis, level, ix_.box.min[u_axis] + left, ix_.box.min[u_axis] + u - 1,
                        v - heights[top] + 1, v};
              }
            }
            stack.push_back(u);
          }
        }
      }
    }
    const Axis u_axis = best.axis == Axis::X ? Axis::Y : Axis::X;
    const Axis v_axis = best.axis == Axis::Z ? Axis::Y : Axis::Z;
    std::vector<int> out;
    for (std::int32_t v = best.v0; v <= best.v1; ++v) {
      for (std::int32_t u = best.u0; u <= best.u1; ++u) {
        GridPos p;
        p[best.axis] = best.level;
        p[u_axis] = u;
        p[v_axis] = v;
        out.push_back(cell(p));
      }
    }
    return out;
  }

  const ModelIndex& ix_;
  ShapeSpec spec_;
  std::vector<char> covered_;
  std::unordered_map<GridPos, int, GridPosHash> at_;
};

struct Seed {
  std::vector<int> cells;
  std::optional<Axis> lock;
  int slot = 0;
};

bool three_plane_init(const InferenceParams& p) {
  return p.ops != SearchOps::SplitOnly && p.overlap && p.spec != ShapeSpec::Free3D;
}

std::vector<Seed> initial_seeds(const ModelIndex& ix, const InferenceParams& p) {
  std::vector<Seed> seeds;
  if (p.ops == SearchOps::SplitOnly) {
    for (auto& cells : MaximalCover(ix, p.spec).run()) seeds.push_back({std::move(cells), std::nullopt, 0});
  } else if (three_plane_init(p)) {
    // One shape per block and plane: xy (z fixed), xz (y fixed), yz (x fixed).
    for (std::size_t c = 0; c < ix.size(); ++c) {
      seeds.push_back({{static_cast<int>(c)}, Axis::Z, 0});
      seeds.push_back({{static_cast<int>(c)}, Axis::Y, 1});
      seeds.push_back({{static_cast<int>(c)}, Axis::X, 2});
    }
  } else {
    for (std::size_t c = 0; c < ix.size(); ++c) seeds.push_back({{static_cast<int>(c)}, std::nullopt, 0});
  }
  return seeds;
}

class Climber {
 public:
  Climber(const ModelIndex& ix, const InferenceParams& params)
      : ix_(ix), params_(params), slots_(three_plane_init(params) ? 3 : 1) {
    owner_.assign(slots_, std::vector<int>(ix.size(), -1));
    scratch_.resize(ix.types());
    for (auto& seed : initial_seeds(ix, params)) add_shape(std::move(seed.cells), seed.lock, seed.slot);
    for (std::size_t id = 0; id < shapes_.size(); ++id) shapes_[id].nbrs = neighbours_of(static_cast<int>(id));
    refresh_entropy();
  }

  std::size_t alive() const { return alive_; }

  std::optional<StepRecord> step() {
    if (params_.ops != SearchOps::SplitOnly) {
      if (auto r = try_merges()) return r;
    }
    if (params_.ops != SearchOps::MergeOnly) {
      if (auto r = try_splits()) return r;
    }
    return std::nullopt;
  }

  ShapeSet snapshot(const std::string& source) const {
    ShapeSet out{source, params_.spec, params_.overlap, {}};
    for (std::size_t id = 0; id < shapes_.size(); ++id) {
      const auto& w = shapes_[id];
      if (!w.alive) continue;
      Shape s{static_cast<ShapeId>(id), params_.spec, {}, w.lock};
      s.blocks.reserve(w.cells.size());
      for (int c : w.cells) s.blocks.push_back(ix_.block(c));
      std::sort(s.blocks.begin(), s.blocks.end());
      out.shapes.push_back(std::move(s));
    }
    return out;
  }

 private:
  struct Work {
    bool alive = true;
    std::optional<Axis> lock;
    int slot = 0;
    std::vector<int> cells;  // ascending
    std::vector<int> hist;
    Box box;
    double h = 0.0;
    std::set<int> nbrs;
  };

  int add_shape(std::vector<int> cells, std::optional<Axis> lock, int slot) {
    const int id = static_cast<int>(shapes_.size());
    Work w;
    w.lock = lock;
    w.slot = slot;
    w.cells = std::move(cells);
    rebuild_stats(w);
    for (int c : w.cells) owner_[slot][c] = id;
    shapes_.push_back(std::move(w));
    ++alive_;
    return id;
  }

  void rebuild_stats(Work& w) const {
    w.hist.assign(ix_.types(), 0);
    w.box = {ix_.pos[w.cells.front()], ix_.pos[w.cells.front()]};
    for (int c : w.cells) {
      ++w.hist[ix_.type[c]];
      const auto& p = ix_.pos[c];
      w.box.min = {std::min(w.box.min.x, p.x), std::min(w.box.min.y, p.y), std::min(w.box.min.z, p.z)};
      w.box.max = {std::max(w.box.max.x, p.x), std::max(w.box.max.y, p.y), std::max(w.box.max.z, p.z)};
    }
    w.h = entropy_of_counts(w.hist, static_cast<int>(w.cells.size()));
  }

  std::set<int> neighbours_of(int id) const {
    const auto& w = shapes_[id];
    std::set<int> out;
    for (int c : w.cells) {
      for (std::size_t d = 0; d < 6; ++d) {
        if (w.lock && direction_axis(d) == *w.lock) continue;
        const int n = ix_.nbr[c][d];
        if (n < 0) continue;
        const int t = owner_[w.slot][n];
        if (t >= 0 && t != id) out.insert(t);
      }
    }
    return out;
  }

  void refresh_entropy() {
    total_h_ = 0.0;
    for (const auto& w : shapes_) {
      if (w.alive) total_h_ += w.h;
    }
  }

  static Box unite(const Box& a, const Box& b) {
    return {{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y), std::min(a.min.z, b.min.z)},
            {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y), std::max(a.max.z, b.max.z)}};
  }

  // Shapes in the neighbour graph are disjoint, coherent and face-adjacent, so
  // only the shape spec needs checking.
  bool merge_legal(const Work& a, const Work& b) const {
    if (params_.spec == ShapeSpec::Free3D) return true;
    const Box u = unite(a.box, b.box);
    const bool planar = a.lock ? u.extent(*a.lock) == 1
                               : (u.extent(Axis::X) == 1 || u.extent(Axis::Y) == 1 || u.extent(Axis::Z) == 1);
    if (!planar) return false;
    if (params_.spec == ShapeSpec::Rectangular) {
      return u.volume() == static_cast<std::int64_t>(a.cells.size() + b.cells.size());
    }
    return true;
  }

  std::optional<StepRecord> try_merges() {
    for (std::size_t i = 0; i < shapes_.size(); ++i) {
      const auto& a = shapes_[i];
      if (!a.alive) continue;
      for (int j : a.nbrs) {
        if (j <= static_cast<int>(i)) continue;
        const auto& b = shapes_[j];
        if (!merge_legal(a, b)) continue;
        for (int t = 0; t < ix_.types(); ++t) scratch_[t] = a.hist[t] + b.hist[t];
        const double hm = entropy_of_counts(scratch_, static_cast<int>(a.cells.size() + b.cells.size()));
        const double after = total_h_ - a.h - b.h + hm;
        const int cmp = compare_cost(alive_, total_h_, alive_ - 1, after, params_.alpha);
        if (cmp < 0 || (cmp == 0 && params_.plateau_merges)) {
          StepRecord rec{OpKind::Merge, alive_, alive_ - 1, total_h_, 0.0};
          do_merge(static_cast<int>(i), j);
          refresh_entropy();
          rec.entropy_after = total_h_;
          return rec;
        }
      }
    }
    return std::nullopt;
  }

  void do_merge(int i, int j) {
    auto& a = shapes_[i];
    auto& b = shapes_[j];
    std::vector<int> cells;
    cells.reserve(a.cells.size() + b.cells.size());
    std::merge(a.cells.begin(), a.cells.end(), b.cells.begin(), b.cells.end(), std::back_inserter(cells));
    for (int c : b.cells) owner_[b.slot][c] = i;
    for (int t = 0; t < ix_.types(); ++t) a.hist[t] += b.hist[t];
    a.cells = std::move(cells);
    a.box = unite(a.box, b.box);
    a.h = entropy_of_counts(a.hist, static_cast<int>(a.cells.size()));
    for (int t : b.nbrs) {
      if (t == i) continue;
      shapes_[t].nbrs.erase(j);
      shapes_[t].nbrs.insert(i);
      a.nbrs.insert(t);
    }
    a.nbrs.erase(j);
    a.nbrs.erase(i);
    b.alive = false;
    b.cells.clear();
    b.nbrs.clear();
    --alive_;
  }

  bool coherent(const std::vector<int>& cells, std::optional<Axis> lock) const {
    if (cells.empty()) return false;
    std::unordered_set<int> in(cells.begin(), cells.end());
    std::unordered_set<int> seen{cells.front()};
    std::vector<int> stack{cells.front()};
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (std::size_t d = 0; d < 6; ++d) {
        if (lock && direction_axis(d) == *lock) continue;
        const int n = ix_.nbr[c][d];
        if (n >= 0 && in.count(n) && seen.insert(n).second) stack.push_back(n);
      }
    }
    return seen.size() == in.size();
  }

  bool accept_split(const Work& w, double part_h, double rest_h) const {
    const double after = total_h_ - w.h + part_h + rest_h;
    return compare_cost(alive_, total_h_, alive_ + 1, after, params_.alpha) < 0;
  }

  std::optional<StepRecord> try_splits() {
    const bool guillotine_only = params_.spec == ShapeSpec::Rectangular;
    for (std::size_t id = 0; id < shapes_.size(); ++id) {
      const auto& w = shapes_[id];
      if (!w.alive || w.cells.size() < 2) continue;
      const int n = static_cast<int>(w.cells.size());

      // Axis-aligned cuts: part = cells with coordinate below the cut.
      for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        const std::int64_t extent = w.box.extent(axis);
        if (extent < 2) continue;
        std::vector<std::vector<int>> layers(extent);
        for (int c : w.cells) layers[ix_.pos[c][axis] - w.box.min[axis]].push_back(c);
        std::vector<int> part_hist(ix_.types(), 0);
        int part_n = 0;
        for (std::int64_t cut = 1; cut < extent; ++cut) {
          for (int c : layers[cut - 1]) ++part_hist[ix_.type[c]];
          part_n += static_cast<int>(layers[cut - 1].size());
          if (part_n == 0 || part_n == n) continue;
          for (int t = 0; t < ix_.types(); ++t) scratch_[t] = w.hist[t] - part_hist[t];
          const double part_h = entropy_of_counts(part_hist, part_n);
          const double rest_h = entropy_of_counts(scratch_, n - part_n);
          if (!accept_split(w, part_h, rest_h)) continue;
          std::vector<int> part;
          std::vector<int> rest;
          for (int c : w.cells) (ix_.pos[c][axis] - w.box.min[axis] < cut ? part : rest).push_back(c);
          if (!guillotine_only && (!coherent(part, w.lock) || !coherent(rest, w.lock))) continue;
          return do_split(static_cast<int>(id), std::move(part), std::move(rest));
        }
      }
      if (guillotine_only) continue;

      // Single-block peels.
      for (int k = 0; k < n; ++k) {
        const int c = w.cells[k];
        for (int t = 0; t < ix_.types(); ++t) scratch_[t] = w.hist[t];
        --scratch_[ix_.type[c]];
        const double rest_h = entropy_of_counts(scratch_, n - 1);
        if (!accept_split(w, 0.0, rest_h)) continue;
        std::vector<int> rest;
        rest.reserve(n - 1);
        for (int x : w.cells) {
          if (x != c) rest.push_back(x);
        }
        if (!coherent(rest, w.lock)) continue;
        return do_split(static_cast<int>(id), {c}, std::move(rest));
      }
    }
    return std::nullopt;
  }

  StepRecord do_split(int id, std::vector<int> part, std::vector<int> rest) {
    StepRecord rec{OpKind::Split, alive_, alive_ + 1, total_h_, 0.0};
    const auto old_nbrs = shapes_[id].nbrs;
    for (int t : old_nbrs) shapes_[t].nbrs.erase(id);
    const std::optional<Axis> lock = shapes_[id].lock;
    const int slot = shapes_[id].slot;
    shapes_[id].cells = std::move(part);
    rebuild_stats(shapes_[id]);
    const int fresh = add_shape(std::move(rest), lock, slot);
    for (int target : {id, fresh}) {
      shapes_[target].nbrs = neighbours_of(target);
      for (int t : shapes_[target].nbrs) shapes_[t].nbrs.insert(target);
    }
    refresh_entropy();
    rec.entropy_after = total_h_;
    return rec;
  }

  const ModelIndex& ix_;
  const InferenceParams& params_;
  int slots_;
  std::vector<Work> shapes_;
  std::vector<std::vector<int>> owner_;  // [slot][cell] -> shape id
  std::vector<int> scratch_;
  std::size_t alive_ = 0;
  double total_h_ = 0.0;
};

ShapeSet renumbered(ShapeSet s) {
  sort_by_id(s.shapes);
  for (std::size_t k = 0; k < s.shapes.size(); ++k) s.shapes[k].id = static_cast<ShapeId>(k);
  return s;
}

void check_params(const InferenceParams& p) {
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be a finite non-negative number");
  }
}

}  // namespace

ShapeSet initialize(const VoxelModel& m, const InferenceParams& params) {
  check_params(params);
  const ModelIndex ix(m);
  ShapeSet out{m.name(), params.spec, params.overlap, {}};
  ShapeId id = 0;
  for (const auto& seed : initial_seeds(ix, params)) {
    Shape s{id++, params.spec, {}, seed.lock};
    for (int c : seed.cells) s.blocks.push_back(ix.block(c));
    std::sort(s.blocks.begin(), s.blocks.end());
    out.shapes.push_back(std::move(s));
  }
  return out;
}

InferenceResult hill_climb(const VoxelModel& m, const InferenceParams& params) {
  check_params(params);
  const ModelIndex ix(m);
  InferenceResult result;
  if (params.overlap && params.spec == ShapeSpec::Free3D) {
    result.warnings.push_back("overlap is ignored for 3d shapes");
  }
  Climber climber(ix, params);
  result.initial_shapes = climber.alive();
  while (!params.max_steps || result.steps.size() < *params.max_steps) {
    auto rec = climber.step();
    if (!rec) break;
    result.steps.push_back(*rec);
  }
  result.set = renumbered(postprocess(climber.snapshot(m.name()), m));
  return result;
}

ShapeSet postprocess(const ShapeSet& s, const VoxelModel& source) {
  ShapeSet out = s;
  std::unordered_set<GridPos, GridPosHash> covered;
  for (const auto& shape : out.shapes) {
    for (const auto& b : shape.blocks) covered.insert(b.pos);
  }
  ShapeId next = out.next_id();
  for (const auto& b : source.blocks()) {
    if (!covered.count(b.pos)) out.shapes.push_back(Shape{next++, out.spec, {b}, std::nullopt});
  }
  sort_by_id(out.shapes);

  std::unordered_map<GridPos, std::vector<std::size_t>, GridPosHash> holders;
  for (std::size_t k = 0; k < out.shapes.size(); ++k) {
    for (const auto& b : out.shapes[k].blocks) holders[b.pos].push_back(k);
  }
  std::vector<char> redundant(out.shapes.size(), false);
  for (std::size_t k = 0; k < out.shapes.size(); ++k) {
    const auto& sk = out.shapes[k];
    for (std::size_t t : holders[sk.blocks.front().pos]) {
      if (t == k) continue;
      const auto& st = out.shapes[t];
      if (st.size() < sk.size() || (st.size() == sk.size() && st.id > sk.id)) continue;
      if (std::includes(st.blocks.begin(), st.blocks.end(), sk.blocks.begin(), sk.blocks.end())) {
        redundant[k] = true;
        break;
      }
    }
  }
  std::vector<Shape> kept;
  kept.reserve(out.shapes.size());
  for (std::size_t k = 0; k < out.shapes.size(); ++k) {
    if (!redundant[k]) kept.push_back(std::move(out.shapes[k]));
  }
  out.shapes = std::move(kept);
  return out;
}

std::optional<std::string> validate(const ShapeSet& s, const VoxelModel& source) {
  std::unordered_map<GridPos, int, GridPosHash> uses;
  std::set<ShapeId> ids;
  for (const auto& shape : s.shapes) {
    const std::string name = "shape " + std::to_string(shape.id);
    if (!ids.insert(shape.id).second) return name + " has a duplicate id";
    if (shape.spec != s.spec) return name + " has a different spec than its set";
    if (const auto v = check_shape(shape.blocks, shape.spec, shape.plane); v != Violation::None) {
      return name + ": " + std::string(to_string(v));
    }
    for (const auto& b : shape.blocks) {
      const Block* src = source.find(b.pos);
      if (!src) return name + " has a block outside the source";
      if (src->type != b.type) return name + " disagrees with the source block type";
      ++uses[b.pos];
    }
  }
  for (const auto& b : source.blocks()) {
    const auto it = uses.find(b.pos);
    if (it == uses.end()) return std::string("a source block is not covered");
    if (!s.overlap && it->second != 1) return std::string("a source block is covered more than once without overlap");
  }
  for (const auto& a : s.shapes) {
    for (const auto& b : s.shapes) {
      if (a.id == b.id || a.size() > b.size()) continue;
      if (std::includes(b.blocks.begin(), b.blocks.end(), a.blocks.begin(), a.blocks.end())) {
        return "shape " + std::to_string(a.id) + " is covered by shape " + std::to_string(b.id);
      }
    }
  }
  return std::nullopt;
}

}  // namespace shapegram
