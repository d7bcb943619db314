#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shapegram/grammar.hpp"

namespace shapegram {

/// How a rule application that writes a different type into an occupied cell
/// is treated. Reject filters it out of random choice and makes a co-creative
/// apply fail; identical-type overlap is always allowed.
enum class ConflictPolicy { Reject };

/// One applied rule: which placed shape it expanded and where the rhs landed.
struct HistoryStep {
  std::size_t target = 0;  // index into Production::placed
  std::size_t rule = 0;
  GridTransform rhs_pose;

  friend bool operator==(const HistoryStep&, const HistoryStep&) = default;
};

/// Derivation state. placed[0, base) is the starting configuration (the
/// initial shape, or what survived an enclosure pass); every history step
/// appended exactly one further placed shape.
struct Production {
  std::vector<PlacedShape> placed;
  std::map<GridPos, BlockType> occupancy;
  std::vector<HistoryStep> history;
  std::uint64_t seed = 0;
  std::size_t base = 0;

  friend bool operator==(const Production&, const Production&) = default;
};

/// A candidate derivation step.
struct Choice {
  std::size_t target = 0;
  std::size_t rule = 0;
  GridTransform lhs_map;
  GridTransform rhs_pose;
  bool conflict = false;   // writes a different type into an occupied cell
  bool duplicate = false;  // the same shape blocks are already placed

  friend bool operator==(const Choice&, const Choice&) = default;
};

/// Production holding the initial shape (or `initial`) at its origin pose.
/// Throws UnknownShape.
Production start(const ShapeGrammar& g, std::optional<ShapeId> initial, std::uint64_t seed);

/// Every (placed shape, applicable rule) option, ordered by placed index then
/// rule index.
std::vector<Choice> step_choices(const ShapeGrammar& g, const Production& p);

/// Applies choice `index` of step_choices(g, p). A duplicate placement is a
/// no-op. Throws StaleChoice for an out-of-range index and
/// ConflictingPlacement for a conflicting choice.
Production apply(const ShapeGrammar& g, const Production& p, std::size_t index);

/// Removes the last history step. Throws NothingToUndo.
Production undo(const Production& p);

/// Random derivation: each step picks uniformly among non-conflicting,
/// non-duplicate choices. Stops after max_steps applications or when no
/// choice is left. Deterministic for a given seed.
Production generate(const ShapeGrammar& g, std::uint64_t seed, std::size_t max_steps,
                    ConflictPolicy policy = ConflictPolicy::Reject);

/// Rebuilds the production from its base and history.
Production replay(const ShapeGrammar& g, const Production& p);

/// Occupancy recomputed from a list of placed shapes. Throws
/// ConflictingPlacement if two shapes disagree on a cell.
std::map<GridPos, BlockType> occupancy_of(const std::vector<PlacedShape>& placed);

/// Empty when every placed block agrees with the occupancy and every occupied
/// cell belongs to a placed shape.
std::optional<std::string> check_consistency(const Production& p);

VoxelModel to_model(const Production& p, const std::string& name = "generated");

}  // namespace shapegram
