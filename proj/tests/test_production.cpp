#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "shapegram/grammar.hpp"
#include "shapegram/inference.hpp"
#include "shapegram/production.hpp"

using namespace shapegram;

namespace {

Block blk(const char* t, int x, int y, int z) { return {BlockType(t), {x, y, z}}; }

ShapeGrammar grammar_of(const VoxelModel& m, ShapeSpec spec, bool overlap = false) {
  InferenceParams p;
  p.spec = spec;
  p.overlap = overlap;
  const auto set = hill_climb(m, p).set;
  return induce(std::span(&set, 1));
}

ShapeGrammar random_grammar(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return grammar_of(VoxelModel("blob", oracle::random_blob(rng, 20, 3)), ShapeSpec::Rectangular);
}

ShapeGrammar pair_grammar() {
  const ShapeSet s{"pair", ShapeSpec::Rectangular, false,
                   {Shape{0, ShapeSpec::Rectangular, {blk("a", 0, 0, 0)}, std::nullopt},
                    Shape{1, ShapeSpec::Rectangular, {blk("b", 1, 0, 0)}, std::nullopt}}};
  return induce(std::span(&s, 1));
}

// Choices recomputed from the rule list alone.
std::vector<Choice> brute_choices(const ShapeGrammar& g, const Production& p) {
  std::set<std::pair<std::size_t, std::vector<Block>>> present;
  for (const auto& s : p.placed) present.insert({s.cls, s.blocks});
  std::vector<Choice> out;
  for (std::size_t k = 0; k < p.placed.size(); ++k) {
    const auto& placed = p.placed[k];
    for (std::size_t r = 0; r < g.rules().size(); ++r) {
      const auto& rule = g.rules()[r];
      if (rule.lhs_class != placed.cls) continue;
      const auto lhs_map = placed.pose * g.label(rule.lhs_anchor).origin_pose.inverse();
      const auto rhs_pose = lhs_map * g.label(rule.rhs).origin_pose;
      std::vector<Block> blocks;
      for (const auto& b : g.shape(rule.rhs).blocks) {
        blocks.push_back({b.type, oracle::apply(lhs_map.rot, lhs_map.delta, b.pos)});
      }
      std::sort(blocks.begin(), blocks.end());
      bool conflict = false;
      for (const auto& b : blocks) {
        const auto it = p.occupancy.find(b.pos);
        conflict = conflict || (it != p.occupancy.end() && it->second != b.type);
      }
      out.push_back({k, r, lhs_map, rhs_pose, conflict, present.count({g.class_of(rule.rhs), blocks}) != 0});
    }
  }
  return out;
}

bool has_open(const std::vector<Choice>& choices) {
  for (const auto& c : choices) {
    if (!c.conflict && !c.duplicate) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("start places the initial shape at its example pose") {
  const auto g = random_grammar(41);
  const auto p = start(g, std::nullopt, 9);
  REQUIRE(p.placed.size() == 1);
  CHECK(p.base == 1);
  CHECK(p.seed == 9);
  CHECK(p.history.empty());
  CHECK(p.placed[0].shape == g.initial());
  CHECK(p.placed[0].blocks == g.shape(g.initial()).blocks);
  CHECK_FALSE(check_consistency(p));

  const ShapeId other = g.shapes().back().id;
  CHECK(start(g, other, 0).placed[0].blocks == g.shape(other).blocks);
  CHECK_THROWS_AS(start(g, ShapeId{999}, 0), Error);
}

TEST_CASE("step choices agree with a brute-force rule scan at every step") {
  std::size_t conflicts = 0, duplicates = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_grammar(100 + seed);
    Production p = start(g, std::nullopt, seed);
    std::mt19937_64 rng(seed);
    for (int step = 0; step < 25; ++step) {
      const auto choices = step_choices(g, p);
      REQUIRE(choices == brute_choices(g, p));
      std::vector<std::size_t> open;
      for (std::size_t k = 0; k < choices.size(); ++k) {
        conflicts += choices[k].conflict;
        duplicates += choices[k].duplicate;
        if (!choices[k].conflict && !choices[k].duplicate) open.push_back(k);
      }
      if (open.empty()) break;
      p = apply(g, p, open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)]);
      CHECK_FALSE(check_consistency(p));
    }
  }
  // The scan above must have exercised both flags.
  CHECK(conflicts > 0);
  CHECK(duplicates > 0);
}

TEST_CASE("apply, duplicates, conflicts and stale indices") {
  const auto g = pair_grammar();
  const auto p0 = start(g, std::nullopt, 0);
  auto c0 = step_choices(g, p0);
  REQUIRE(c0.size() == 1);
  CHECK_FALSE(c0[0].duplicate);
  const auto p1 = apply(g, p0, 0);
  CHECK(p1.placed.size() == 2);
  CHECK(p1.history == std::vector<HistoryStep>{{0, c0[0].rule, c0[0].rhs_pose}});
  CHECK(p1.occupancy.at({1, 0, 0}) == BlockType("b"));

  // Both rules now reproduce placed shapes.
  const auto c1 = step_choices(g, p1);
  REQUIRE(c1.size() == 2);
  for (std::size_t k = 0; k < c1.size(); ++k) {
    CHECK(c1[k].duplicate);
    CHECK(apply(g, p1, k) == p1);
  }
  CHECK(generate(g, 3, 10).history.size() == 1);

  try {
    apply(g, p1, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StaleChoice);
  }

  // A rule whose rhs lands on a cell of a different type.
  std::size_t seen = 0;
  for (std::uint64_t seed = 0; seed < 40 && seen == 0; ++seed) {
    const auto rg = random_grammar(200 + seed);
    Production p = generate(rg, seed, 15);
    const auto choices = step_choices(rg, p);
    for (std::size_t k = 0; k < choices.size(); ++k) {
      if (!choices[k].conflict) continue;
      ++seen;
      try {
        apply(rg, p, k);
        FAIL("expected an error");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConflictingPlacement);
      }
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("undo reverses apply") {
  const auto g = random_grammar(42);
  try {
    undo(start(g, std::nullopt, 0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NothingToUndo);
  }
  std::vector<Production> trail{start(g, std::nullopt, 0)};
  for (int step = 0; step < 10; ++step) {
    const auto choices = step_choices(g, trail.back());
    std::size_t k = 0;
    while (k < choices.size() && (choices[k].conflict || choices[k].duplicate)) ++k;
    if (k == choices.size()) break;
    trail.push_back(apply(g, trail.back(), k));
  }
  REQUIRE(trail.size() > 2);
  Production p = trail.back();
  for (std::size_t k = trail.size() - 1; k > 0; --k) {
    p = undo(p);
    CHECK(p == trail[k - 1]);
  }
}

TEST_CASE("generate is deterministic and consistent") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = random_grammar(300 + seed % 5);
    const auto a = generate(g, seed, 40);
    const auto b = generate(g, seed, 40);
    CHECK(a == b);
    CHECK(a.seed == seed);
    CHECK_FALSE(check_consistency(a));
    CHECK(a.history.size() <= 40);
    if (a.history.size() < 40) CHECK_FALSE(has_open(step_choices(g, a)));
    CHECK(replay(g, a) == a);

    // Nothing but grammar blocks, in a union of placed shapes.
    std::map<GridPos, BlockType> occ;
    for (const auto& s : a.placed) {
      for (const auto& bl : s.blocks) occ.emplace(bl.pos, bl.type);
    }
    CHECK(occ == a.occupancy);
    const auto m = to_model(a);
    CHECK(m.size() == a.occupancy.size());
    CHECK(m.name() == "generated");
  }
  const auto g = random_grammar(301);
  CHECK(generate(g, 5, 0) == start(g, std::nullopt, 5));
}

TEST_CASE("different seeds explore different derivations") {
  const auto g = random_grammar(43);
  std::set<std::map<GridPos, BlockType>> outcomes;
  for (std::uint64_t seed = 0; seed < 20; ++seed) outcomes.insert(generate(g, seed, 20).occupancy);
  CHECK(outcomes.size() > 1);
}

TEST_CASE("occupancy and consistency checks catch disagreement") {
  const auto g = pair_grammar();
  auto a = place(g, 0, g.label(0).origin_pose);
  auto b = place(g, 1, GridTransform::translation({-1, 0, 0}) * g.label(1).origin_pose);
  CHECK_THROWS_AS(occupancy_of({a, b}), Error);

  auto p = generate(g, 0, 5);
  REQUIRE_FALSE(check_consistency(p));
  auto stray = p;
  stray.occupancy[{9, 9, 9}] = BlockType("a");
  CHECK(check_consistency(stray));
  auto wrong = p;
  wrong.occupancy.begin()->second = BlockType("zzz");
  CHECK(check_consistency(wrong));
  auto short_history = p;
  short_history.history.clear();
  CHECK(check_consistency(short_history));

  auto bad_target = p;
  bad_target.history[0].target = 7;
  CHECK_THROWS_AS(replay(g, bad_target), Error);
}
