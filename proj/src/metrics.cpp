#include "shapegram/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>
#include <utility>

namespace shapegram {

ShapeSetStats stats(const ShapeSet& s) {
  if (s.shapes.empty()) throw Error(ErrorCode::EmptyInput, "statistics of an empty shape set");
  ShapeSetStats out;
  out.num_shapes = s.shapes.size();
  std::size_t matching = 0;
  for (const auto& cls : match_classes(s.shapes)) {
    if (cls.members.size() >= 2) matching += cls.members.size();
  }
  out.pct_matching = 100.0 * static_cast<double>(matching) / static_cast<double>(out.num_shapes);
  double blocks = 0.0;
  double ratio = 0.0;
  for (const auto& shape : s.shapes) {
    std::set<BlockType> types;
    for (const auto& b : shape.blocks) types.insert(b.type);
    blocks += static_cast<double>(shape.size());
    ratio += static_cast<double>(types.size()) / static_cast<double>(shape.size());
  }
  out.mean_size = blocks / static_cast<double>(out.num_shapes);
  out.complexity = ratio / static_cast<double>(out.num_shapes);
  return out;
}

namespace {

double mean_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename F>
std::vector<double> column(std::span<const GridRow> rows, F f) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(f(r));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string format_alpha(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct Cell {
  std::size_t model;
  InferenceParams params;
};

}  // namespace

Summary summarize(std::string label, std::span<const GridRow> rows) {
  Summary s;
  s.label = std::move(label);
  s.rows = rows.size();
  const auto reduce = [&](auto f) {
    const auto values = column(rows, f);
    return std::pair{mean_of(values), median_of(values)};
  };
  std::tie(s.mean.num_shapes, s.median.num_shapes) =
      reduce([](const GridRow& r) { return static_cast<double>(r.stats.num_shapes); });
  std::tie(s.mean.pct_matching, s.median.pct_matching) = reduce([](const GridRow& r) { return r.stats.pct_matching; });
  std::tie(s.mean.mean_size, s.median.mean_size) = reduce([](const GridRow& r) { return r.stats.mean_size; });
  std::tie(s.mean.complexity, s.median.complexity) = reduce([](const GridRow& r) { return r.stats.complexity; });
  std::tie(s.mean.cost, s.median.cost) = reduce([](const GridRow& r) { return r.cost; });
  std::tie(s.mean.wall_time_ms, s.median.wall_time_ms) = reduce([](const GridRow& r) { return r.wall_time_ms; });
  return s;
}

GridResult run_grid(std::span<const VoxelModel> models, const ParameterGrid& grid, const GridOptions& options) {
  if (models.empty()) throw Error(ErrorCode::EmptyInput, "parameter grid needs at least one model");
  if (grid.combinations() == 0) throw Error(ErrorCode::EmptyInput, "parameter grid has no combinations");

  std::vector<Cell> cells;
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (ShapeSpec spec : grid.specs) {
      for (double alpha : grid.alphas) {
        for (SearchOps ops : grid.ops) {
          for (bool overlap : grid.overlaps) {
            cells.push_back({m, InferenceParams{spec, alpha, ops, overlap, grid.plateau_merges, std::nullopt}});
          }
        }
      }
    }
  }

  GridResult result;
  result.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      const Cell& cell = cells[k];
      const VoxelModel& model = models[cell.model];
      try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto inferred = hill_climb(model, cell.params);
        const auto t1 = std::chrono::steady_clock::now();
        GridRow& row = result.rows[k];
        row.model = model.name();
        row.spec = cell.params.spec;
        row.alpha = cell.params.alpha;
        row.ops = cell.params.ops;
        row.overlap = cell.params.overlap;
        row.stats = stats(inferred.set);
        row.cost = cost(inferred.set, cell.params.alpha);
        row.wall_time_ms = options.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::make_exception_ptr(
              Error(ErrorCode::InvalidArgument,
                    "grid cell failed: model '" + model.name() + "' spec " + std::string(to_string(cell.params.spec)) +
                        " alpha " + format_alpha(cell.params.alpha) + " ops " +
                        std::string(to_string(cell.params.ops)) + " overlap " +
                        (cell.params.overlap ? "yes" : "no") + ": " + e.what()));
        }
        next = cells.size();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  const std::size_t per_model = grid.combinations();
  for (std::size_t m = 0; m < models.size(); ++m) {
    result.per_model.push_back(summarize(models[m].name(), std::span(result.rows).subspan(m * per_model, per_model)));
  }
  for (std::size_t c = 0; c < per_model; ++c) {
    std::vector<GridRow> group;
    for (std::size_t m = 0; m < models.size(); ++m) group.push_back(result.rows[m * per_model + c]);
    result.per_combination.push_back(summarize("ALL", group));
  }
  return result;
}

std::string to_csv(const GridResult& result) {
  std::string out = "model,spec,alpha,ops,overlap,#S,%M,mean_size,C,cost,wall_time_ms\n";
  for (const auto& r : result.rows) {
    out += csv_field(r.model) + ',' + std::string(to_string(r.spec)) + ',' + format_alpha(r.alpha) + ',' +
           std::string(to_string(r.ops)) + ',' + (r.overlap ? "yes" : "no") + ',' +
           std::to_string(r.stats.num_shapes) + ',' + format_double(r.stats.pct_matching) + ',' +
           format_double(r.stats.mean_size) + ',' + format_double(r.stats.complexity) + ',' +
           format_double(r.cost) + ',' + format_double(r.wall_time_ms) + '\n';
  }
  auto values = [](const MetricValues& v) {
    return format_double(v.num_shapes) + ',' + format_double(v.pct_matching) + ',' + format_double(v.mean_size) +
           ',' + format_double(v.complexity) + ',' + format_double(v.cost) + ',' + format_double(v.wall_time_ms);
  };
  auto aggregate_rows = [&](const Summary& s, const std::string& params) {
    out += csv_field("mean:" + s.label) + params + values(s.mean) + '\n';
    out += csv_field("median:" + s.label) + params + values(s.median) + '\n';
  };
  const std::size_t models = result.per_model.size();
  for (std::size_t m = 0; m < models; ++m) aggregate_rows(result.per_model[m], ",*,*,*,*,");
  for (std::size_t c = 0; c < result.per_combination.size(); ++c) {
    const GridRow& r = result.rows[c];
    aggregate_rows(result.per_combination[c], ',' + std::string(to_string(r.spec)) + ',' + format_alpha(r.alpha) +
                                                  ',' + std::string(to_string(r.ops)) + ',' +
                                                  (r.overlap ? "yes" : "no") + ',');
  }
  return out;
}

}  // namespace shapegram
