#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shapegram/shape.hpp"
#include "shapegram/voxel.hpp"

namespace shapegram {

enum class SearchOps { MergeOnly, SplitOnly, Both };

std::string_view to_string(SearchOps ops);  // "merge" | "split" | "both"
SearchOps parse_search_ops(std::string_view text);

struct InferenceParams {
  ShapeSpec spec = ShapeSpec::Rectangular;
  double alpha = 1.0;
  SearchOps ops = SearchOps::MergeOnly;
  bool overlap = false;
  // Also accept merges that leave the cost unchanged. Without them nothing on a
  // monochrome region ever merges, because every entropy there is already zero.
  bool plateau_merges = true;
  std::optional<std::size_t> max_steps;
};

/// The shapes inferred for one example model.
struct ShapeSet {
  std::string source;  // name of the source model
  ShapeSpec spec = ShapeSpec::Rectangular;
  bool overlap = false;
  std::vector<Shape> shapes;

  const Shape* find(ShapeId id) const;
  ShapeId next_id() const;

  friend bool operator==(const ShapeSet&, const ShapeSet&) = default;
};

/// Shannon entropy, in bits, of the block-type distribution.
double entropy(std::span<const Block> blocks);
inline double entropy(const Shape& s) { return entropy(std::span<const Block>(s.blocks)); }

/// (1 + #S)^alpha * sum of shape entropies. Zero whenever every shape is monochrome.
double cost(std::span<const Shape> shapes, double alpha);
inline double cost(const ShapeSet& s, double alpha) { return cost(s.shapes, alpha); }

/// Three-way cost comparison of two (shape count, entropy sum) states, done in
/// log space so large alpha cannot overflow. Negative when `after` is cheaper,
/// zero when equal within 1e-12 (relative).
int compare_cost(std::size_t count_before, double entropy_before, std::size_t count_after,
                 double entropy_after, double alpha);

/// Result of a merge or split. `set` is empty when the operation is illegal,
/// in which case `violation` names the broken invariant.
struct OpResult {
  std::optional<ShapeSet> set;
  Violation violation = Violation::None;
  bool plane_mismatch = false;

  bool legal() const noexcept { return set.has_value(); }
};

/// Replaces shapes i and j by their union, which keeps id min(i, j). Illegal
/// when the union is incoherent, breaks the shape spec, or the two shapes are locked
/// to different planes. Throws UnknownShape / InvalidArgument.
OpResult merge(const ShapeSet& s, ShapeId i, ShapeId j);

/// Splits shape i into `part` (keeps id i) and the remainder (gets next_id()).
/// Throws UnknownShape, or InvalidPart when part is empty, the whole shape, or
/// not a subset of it.
OpResult split(const ShapeSet& s, ShapeId i, std::span<const GridPos> part);

/// Starting shape set for the local search.
ShapeSet initialize(const VoxelModel& m, const InferenceParams& params);

enum class OpKind { Merge, Split };

struct StepRecord {
  OpKind kind;
  std::size_t shapes_before;
  std::size_t shapes_after;
  double entropy_before;
  double entropy_after;
};

struct InferenceResult {
  ShapeSet set;
  std::vector<StepRecord> steps;
  std::size_t initial_shapes = 0;
  std::vector<std::string> warnings;
};

/// First-improvement hill climbing on the cost, followed by postprocess. Each
/// step rescans from the start: merges by ascending (i, j), then splits by
/// ascending (id, candidate index). Output ids are renumbered 0..n-1.
InferenceResult hill_climb(const VoxelModel& m, const InferenceParams& params);

/// Adds a singleton for every source block no shape covers, then deletes every
/// shape whose block set is contained in another's (equal sets keep the lowest id).
ShapeSet postprocess(const ShapeSet& s, const VoxelModel& source);

/// Empty when the set satisfies every shape-set invariant against its source,
/// otherwise a description of the first problem found.
std::optional<std::string> validate(const ShapeSet& s, const VoxelModel& source);

}  // namespace shapegram
