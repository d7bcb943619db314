#include "shapegram/production.hpp"

#include <random>
#include <set>
#include <utility>

namespace shapegram {

namespace {

using PlacementKey = std::pair<std::size_t, std::vector<Block>>;

std::set<PlacementKey> placement_keys(const Production& p) {
  std::set<PlacementKey> keys;
  for (const auto& s : p.placed) keys.emplace(s.cls, s.blocks);
  return keys;
}

bool conflicts(const std::map<GridPos, BlockType>& occupancy, const std::vector<Block>& blocks) {
  for (const auto& b : blocks) {
    const auto it = occupancy.find(b.pos);
    if (it != occupancy.end() && it->second != b.type) return true;
  }
  return false;
}

void occupy(std::map<GridPos, BlockType>& occupancy, const std::vector<Block>& blocks) {
  for (const auto& b : blocks) occupancy.emplace(b.pos, b.type);
}

}  // namespace

Production start(const ShapeGrammar& g, std::optional<ShapeId> initial, std::uint64_t seed) {
  const ShapeId id = initial.value_or(g.initial());
  Production p;
  p.seed = seed;
  p.placed.push_back(place(g, id, g.label(id).origin_pose));
  p.base = 1;
  occupy(p.occupancy, p.placed.front().blocks);
  return p;
}

std::vector<Choice> step_choices(const ShapeGrammar& g, const Production& p) {
  std::vector<Choice> out;
  const auto keys = placement_keys(p);
  for (std::size_t k = 0; k < p.placed.size(); ++k) {
    for (const auto& app : applicable_rules(g, p.placed[k])) {
      const PlacedShape rhs = place(g, g.rules()[app.rule].rhs, app.rhs_pose);
      out.push_back({k, app.rule, app.lhs_map, app.rhs_pose, conflicts(p.occupancy, rhs.blocks),
                     keys.count({rhs.cls, rhs.blocks}) != 0});
    }
  }
  return out;
}

namespace {

Production append(const ShapeGrammar& g, Production p, const HistoryStep& step) {
  PlacedShape rhs = place(g, g.rules()[step.rule].rhs, step.rhs_pose);
  if (conflicts(p.occupancy, rhs.blocks)) {
    throw Error(ErrorCode::ConflictingPlacement,
                "rule " + std::to_string(step.rule) + " would overwrite occupied cells with a different type");
  }
  occupy(p.occupancy, rhs.blocks);
  p.placed.push_back(std::move(rhs));
  p.history.push_back(step);
  return p;
}

}  // namespace

Production apply(const ShapeGrammar& g, const Production& p, std::size_t index) {
  const auto choices = step_choices(g, p);
  if (index >= choices.size()) {
    throw Error(ErrorCode::StaleChoice,
                "choice " + std::to_string(index) + " out of range (" + std::to_string(choices.size()) + " choices)");
  }
  const Choice& c = choices[index];
  if (c.duplicate) return p;
  return append(g, p, {c.target, c.rule, c.rhs_pose});
}

Production undo(const Production& p) {
  if (p.history.empty()) throw Error(ErrorCode::NothingToUndo, "production has no steps to undo");
  Production out = p;
  out.history.pop_back();
  out.placed.pop_back();
  out.occupancy = occupancy_of(out.placed);
  return out;
}

Production generate(const ShapeGrammar& g, std::uint64_t seed, std::size_t max_steps, ConflictPolicy policy) {
  (void)policy;  // Reject is the only policy.
  Production p = start(g, std::nullopt, seed);
  std::mt19937_64 rng(seed);
  for (std::size_t step = 0; step < max_steps; ++step) {
    const auto choices = step_choices(g, p);
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < choices.size(); ++k) {
      if (!choices[k].conflict && !choices[k].duplicate) open.push_back(k);
    }
    if (open.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const Choice& c = choices[open[pick(rng)]];
    p = append(g, std::move(p), {c.target, c.rule, c.rhs_pose});
  }
  return p;
}

Production replay(const ShapeGrammar& g, const Production& p) {
  Production out;
  out.seed = p.seed;
  out.base = p.base;
  out.placed.assign(p.placed.begin(), p.placed.begin() + static_cast<std::ptrdiff_t>(p.base));
  out.occupancy = occupancy_of(out.placed);
  for (const auto& step : p.history) {
    if (step.target >= out.placed.size()) {
      throw Error(ErrorCode::StaleChoice, "history step targets a shape that is not yet placed");
    }
    out = append(g, std::move(out), step);
  }
  return out;
}

std::map<GridPos, BlockType> occupancy_of(const std::vector<PlacedShape>& placed) {
  std::map<GridPos, BlockType> occ;
  for (const auto& s : placed) {
    if (conflicts(occ, s.blocks)) {
      throw Error(ErrorCode::ConflictingPlacement, "placed shapes disagree on a cell type");
    }
    occupy(occ, s.blocks);
  }
  return occ;
}

std::optional<std::string> check_consistency(const Production& p) {
  std::set<GridPos> owned;
  for (std::size_t k = 0; k < p.placed.size(); ++k) {
    for (const auto& b : p.placed[k].blocks) {
      const auto it = p.occupancy.find(b.pos);
      if (it == p.occupancy.end()) return "placed shape " + std::to_string(k) + " has an unoccupied cell";
      if (it->second != b.type) return "placed shape " + std::to_string(k) + " disagrees with the occupancy";
      owned.insert(b.pos);
    }
  }
  if (owned.size() != p.occupancy.size()) return std::string("occupancy has cells no placed shape owns");
  if (p.base > p.placed.size() || p.placed.size() - p.base != p.history.size()) {
    return std::string("history length does not match the placed shapes");
  }
  return std::nullopt;
}

VoxelModel to_model(const Production& p, const std::string& name) {
  std::vector<Block> blocks;
  blocks.reserve(p.occupancy.size());
  for (const auto& [pos, type] : p.occupancy) blocks.push_back({type, pos});
  return VoxelModel(name, std::move(blocks));
}

}  // namespace shapegram
