#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "shapegram/metrics.hpp"

using namespace shapegram;

namespace {

Block blk(const char* t, int x, int y, int z) { return {BlockType(t), {x, y, z}}; }

Shape shape(ShapeId id, std::vector<Block> blocks) {
  std::sort(blocks.begin(), blocks.end());
  return Shape{id, ShapeSpec::Free3D, std::move(blocks), std::nullopt};
}

ShapeSetStats brute_stats(const ShapeSet& s) {
  ShapeSetStats out;
  out.num_shapes = s.shapes.size();
  double matching = 0, size = 0, c = 0;
  for (std::size_t i = 0; i < s.shapes.size(); ++i) {
    bool has_match = false;
    for (std::size_t j = 0; j < s.shapes.size(); ++j) {
      has_match = has_match || (i != j && oracle::matches(s.shapes[i].blocks, s.shapes[j].blocks));
    }
    matching += has_match;
    std::set<std::string> types;
    for (const auto& b : s.shapes[i].blocks) types.insert(b.type.token());
    size += static_cast<double>(s.shapes[i].size());
    c += static_cast<double>(types.size()) / static_cast<double>(s.shapes[i].size());
  }
  const double n = static_cast<double>(s.shapes.size());
  out.pct_matching = 100.0 * matching / n;
  out.mean_size = size / n;
  out.complexity = c / n;
  return out;
}

std::vector<VoxelModel> small_models() {
  std::mt19937_64 rng(61);
  std::vector<VoxelModel> out;
  for (int k = 0; k < 4; ++k) out.emplace_back("m" + std::to_string(k), oracle::random_blob(rng, 18 + 4 * k, 3));
  return out;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("stats on a hand-built set") {
  // Two matching windows (one rotated) and a mixed wall.
  const ShapeSet s{"h", ShapeSpec::Free3D, false,
                   {shape(0, {blk("glass", 0, 0, 0), blk("glass", 1, 0, 0)}),
                    shape(1, {blk("glass", 5, 0, 0), blk("glass", 5, 1, 0)}),
                    shape(2, {blk("stone", 0, 0, 1), blk("stone", 1, 0, 1), blk("brick", 2, 0, 1)})}};
  const auto st = stats(s);
  CHECK(st.num_shapes == 3);
  CHECK(st.pct_matching == doctest::Approx(200.0 / 3.0));
  CHECK(st.mean_size == doctest::Approx(7.0 / 3.0));
  CHECK(st.complexity == doctest::Approx((0.5 + 0.5 + 2.0 / 3.0) / 3.0));

  try {
    stats(ShapeSet{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("stats agree with pairwise brute-force matching") {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 40; ++trial) {
    const VoxelModel m("blob", oracle::random_blob(rng, 30, 2 + trial % 3));
    InferenceParams p;
    p.spec = static_cast<ShapeSpec>(trial % 3);
    p.ops = static_cast<SearchOps>((trial / 3) % 3);
    p.overlap = trial % 2 == 0;
    const auto set = hill_climb(m, p).set;
    const auto got = stats(set);
    const auto want = brute_stats(set);
    CHECK(got.num_shapes == want.num_shapes);
    CHECK(got.pct_matching == doctest::Approx(want.pct_matching).epsilon(1e-12));
    CHECK(got.mean_size == doctest::Approx(want.mean_size).epsilon(1e-12));
    CHECK(got.complexity == doctest::Approx(want.complexity).epsilon(1e-12));
    CHECK(got.complexity > 0.0);
    CHECK(got.complexity <= 1.0);
  }
}

TEST_CASE("summaries take the mean and the median") {
  std::vector<GridRow> rows(4);
  const double shapes[] = {1, 2, 3, 10};
  for (int k = 0; k < 4; ++k) {
    rows[k].stats.num_shapes = static_cast<std::size_t>(shapes[k]);
    rows[k].cost = shapes[k] * 2;
  }
  const auto s = summarize("x", rows);
  CHECK(s.label == "x");
  CHECK(s.rows == 4);
  CHECK(s.mean.num_shapes == doctest::Approx(4.0));
  CHECK(s.median.num_shapes == doctest::Approx(2.5));
  CHECK(s.median.cost == doctest::Approx(5.0));
  const auto odd = summarize("y", std::span(rows).first(3));
  CHECK(odd.median.num_shapes == doctest::Approx(2.0));
  CHECK(summarize("z", {}).rows == 0);
}

TEST_CASE("run_grid rows follow grid order and match direct inference") {
  const auto models = small_models();
  ParameterGrid grid;
  grid.specs = {ShapeSpec::Rectangular, ShapeSpec::Free3D};
  grid.alphas = {0.0, 2.0};
  grid.ops = {SearchOps::MergeOnly, SearchOps::SplitOnly};
  grid.overlaps = {false, true};
  const auto result = run_grid(models, grid, {4, false});
  REQUIRE(result.rows.size() == models.size() * grid.combinations());
  CHECK(result.per_model.size() == models.size());
  CHECK(result.per_combination.size() == grid.combinations());

  std::size_t k = 0;
  for (const auto& m : models) {
    for (auto spec : grid.specs) {
      for (double alpha : grid.alphas) {
        for (auto ops : grid.ops) {
          for (bool overlap : grid.overlaps) {
            const GridRow& row = result.rows[k++];
            CHECK(row.model == m.name());
            CHECK(row.spec == spec);
            CHECK(row.alpha == alpha);
            CHECK(row.ops == ops);
            CHECK(row.overlap == overlap);
            CHECK(row.wall_time_ms == 0.0);
            const auto set = hill_climb(m, InferenceParams{spec, alpha, ops, overlap, true, std::nullopt}).set;
            CHECK(row.stats.num_shapes == set.shapes.size());
            CHECK(row.cost == doctest::Approx(cost(set, alpha)));
          }
        }
      }
    }
  }
  CHECK(result.per_model[1].label == "m1");
  CHECK(result.per_model[1].rows == grid.combinations());
  CHECK(result.per_combination[0].rows == models.size());
}

TEST_CASE("grid output does not depend on the thread count") {
  const auto models = small_models();
  ParameterGrid grid;
  grid.specs = {ShapeSpec::Rectangular, ShapeSpec::Planar2D, ShapeSpec::Free3D};
  grid.alphas = {0.0, 1.0, 5.0};
  grid.ops = {SearchOps::MergeOnly, SearchOps::SplitOnly, SearchOps::Both};
  const auto one = to_csv(run_grid(models, grid, {1, false}));
  const auto many = to_csv(run_grid(models, grid, {8, false}));
  CHECK(one == many);
  CHECK(count_lines(one) == 1 + models.size() * grid.combinations() + 2 * models.size() + 2 * grid.combinations());
}

TEST_CASE("csv layout") {
  const std::vector<VoxelModel> models{VoxelModel("a,b", {blk("s", 0, 0, 0), blk("t", 1, 0, 0)})};
  ParameterGrid grid;
  grid.alphas = {0.5};
  const auto csv = to_csv(run_grid(models, grid, {1, false}));
  std::istringstream in(csv);
  std::string header, row, mean, median, cmean, cmedian;
  std::getline(in, header);
  std::getline(in, row);
  std::getline(in, mean);
  std::getline(in, median);
  std::getline(in, cmean);
  std::getline(in, cmedian);
  CHECK(header == "model,spec,alpha,ops,overlap,#S,%M,mean_size,C,cost,wall_time_ms");
  CHECK(row.rfind("\"a,b\",rect,0.5,merge,no,2,", 0) == 0);
  CHECK(mean.rfind("\"mean:a,b\",*,*,*,*,2.000000,", 0) == 0);
  CHECK(median.rfind("\"median:a,b\",*,*,*,*,", 0) == 0);
  CHECK(cmean.rfind("mean:ALL,rect,0.5,merge,no,", 0) == 0);
  CHECK(cmedian.rfind("median:ALL,rect,0.5,merge,no,", 0) == 0);
}

TEST_CASE("run_grid input errors") {
  CHECK_THROWS_AS(run_grid({}, ParameterGrid{}), Error);
  ParameterGrid empty;
  empty.alphas.clear();
  const auto models = small_models();
  CHECK_THROWS_AS(run_grid(models, empty), Error);
  ParameterGrid bad;
  bad.alphas = {-1.0};
  try {
    run_grid(models, bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("grid cell failed: model 'm") != std::string::npos);
  }
}
