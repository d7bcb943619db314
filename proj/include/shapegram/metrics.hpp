#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shapegram/inference.hpp"

namespace shapegram {

struct ShapeSetStats {
  std::size_t num_shapes = 0;  // #S
  double pct_matching = 0.0;   // %M: shapes whose match class has another member
  double mean_size = 0.0;      // blocks per shape
  double complexity = 0.0;     // mean of distinct types / blocks, per shape
};

/// Throws EmptyInput for a set without shapes.
ShapeSetStats stats(const ShapeSet& s);

struct ParameterGrid {
  std::vector<ShapeSpec> specs{ShapeSpec::Rectangular};
  std::vector<double> alphas{1.0};
  std::vector<SearchOps> ops{SearchOps::MergeOnly};
  std::vector<bool> overlaps{false};
  bool plateau_merges = true;

  std::size_t combinations() const { return specs.size() * alphas.size() * ops.size() * overlaps.size(); }
};

struct GridOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  bool timing = true;    // false writes 0 wall time, making the CSV reproducible
};

struct GridRow {
  std::string model;
  ShapeSpec spec = ShapeSpec::Rectangular;
  double alpha = 0.0;
  SearchOps ops = SearchOps::MergeOnly;
  bool overlap = false;
  ShapeSetStats stats;
  double cost = 0.0;
  double wall_time_ms = 0.0;
};

struct MetricValues {
  double num_shapes = 0.0;
  double pct_matching = 0.0;
  double mean_size = 0.0;
  double complexity = 0.0;
  double cost = 0.0;
  double wall_time_ms = 0.0;
};

/// Mean and median of each metric over a group of rows.
struct Summary {
  std::string label;
  std::size_t rows = 0;
  MetricValues mean;
  MetricValues median;
};

Summary summarize(std::string label, std::span<const GridRow> rows);

struct GridResult {
  std::vector<GridRow> rows;  // model-major, then spec, alpha, ops, overlap in grid order
  std::vector<Summary> per_model;
  std::vector<Summary> per_combination;  // pooled over all models
};

/// Runs hill_climb for every model and parameter combination. Cells may run in
/// parallel; the result order is fixed. A failing cell is reported as an
/// Error naming the model and parameters.
GridResult run_grid(std::span<const VoxelModel> models, const ParameterGrid& grid, const GridOptions& options = {});

/// Header, data rows, then aggregate rows ("mean"/"median" in the model column).
std::string to_csv(const GridResult& result);

}  // namespace shapegram
