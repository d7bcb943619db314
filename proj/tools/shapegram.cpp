// shapegram: infer shapes from voxel examples, induce a grammar, generate.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shapegram/api.hpp"
#include "shapegram/enclosure.hpp"
#include "shapegram/grammar.hpp"
#include "shapegram/inference.hpp"
#include "shapegram/io.hpp"
#include "shapegram/metrics.hpp"
#include "shapegram/production.hpp"

namespace fs = std::filesystem;
using namespace shapegram;

namespace {

const std::map<std::string, ShapeSpec> kSpecs{
    {"rect", ShapeSpec::Rectangular}, {"2d", ShapeSpec::Planar2D}, {"3d", ShapeSpec::Free3D}};
const std::map<std::string, SearchOps> kOps{
    {"merge", SearchOps::MergeOnly}, {"split", SearchOps::SplitOnly}, {"both", SearchOps::Both}};

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    io::write_file(out, text);
  }
}

// Prefixes a wrapped error with the file it came from.
template <typename F>
auto with_file(const std::string& path, F f) {
  try {
    return f(io::read_file(path));
  } catch (const Error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

struct InferArgs {
  std::string model;
  std::string spec = "rect";
  double alpha = 1.0;
  std::string ops = "merge";
  bool overlap = false;
  bool plateau = true;
  std::optional<std::size_t> max_steps;
  std::string out;
};

int run_infer(const InferArgs& a) {
  const VoxelModel m = with_file(a.model, [](const std::string& t) { return io::load_model(t); });
  InferenceParams params{kSpecs.at(a.spec), a.alpha, kOps.at(a.ops), a.overlap, a.plateau, a.max_steps};
  const InferenceResult r = hill_climb(m, params);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  emit(a.out, io::save_shape_set(r.set));
  std::cerr << m.name() << ": " << r.set.shapes.size() << " shapes after " << r.steps.size()
            << " steps, cost " << cost(r.set, a.alpha) << '\n';
  return 0;
}

struct InduceArgs {
  std::vector<std::string> sets;
  std::optional<ShapeId> initial;
  std::string out;
};

int run_induce(const InduceArgs& a) {
  std::vector<ShapeSet> sets;
  for (const auto& path : a.sets) {
    sets.push_back(with_file(path, [](const std::string& t) { return io::load_shape_set(t); }));
  }
  const ShapeGrammar g = induce(sets, InduceOptions{a.initial});
  emit(a.out, io::save_grammar(g));
  std::cerr << g.shapes().size() << " shapes, " << g.classes().size() << " match classes, " << g.rules().size()
            << " rules\n";
  return 0;
}

struct GenerateArgs {
  std::string grammar;
  std::uint64_t seed = 0;
  std::size_t max_steps = 50;
  bool enclosure = false;
  std::string out;
  std::string production;
};

int run_generate(const GenerateArgs& a) {
  const ShapeGrammar g = with_file(a.grammar, [](const std::string& t) { return io::load_grammar(t); });
  Production p = generate(g, a.seed, a.max_steps);
  std::cerr << "seed " << a.seed << ": " << p.history.size() << " steps, " << p.placed.size() << " shapes\n";
  if (a.enclosure) {
    EnclosureReport report = enforce(p);
    std::cerr << "enclosure removed " << report.removed << " shapes in " << report.iterations << " passes\n";
    p = std::move(report.production);
  }
  if (!a.production.empty()) io::write_file(a.production, io::production_to_json(p).dump(1) + '\n');
  emit(a.out, io::save_model(to_model(p)));
  return 0;
}

struct StatsArgs {
  std::string corpus;
  std::vector<std::string> specs{"rect", "2d", "3d"};
  std::vector<double> alphas{0.0, 0.5, 1.0, 2.0, 5.0};
  std::vector<std::string> ops{"merge", "split", "both"};
  std::vector<std::string> overlaps{"no", "yes"};
  bool plateau = true;
  unsigned threads = 0;
  bool no_timing = false;
  std::string out;
};

int run_stats(const StatsArgs& a) {
  const auto models = io::load_corpus(a.corpus);
  ParameterGrid grid;
  grid.specs.clear();
  for (const auto& s : a.specs) grid.specs.push_back(kSpecs.at(s));
  grid.alphas = a.alphas;
  grid.ops.clear();
  for (const auto& o : a.ops) grid.ops.push_back(kOps.at(o));
  grid.overlaps.clear();
  for (const auto& o : a.overlaps) grid.overlaps.push_back(o == "yes");
  grid.plateau_merges = a.plateau;
  const GridResult result = run_grid(models, grid, GridOptions{a.threads, !a.no_timing});
  emit(a.out, to_csv(result));
  std::cerr << result.rows.size() << " runs over " << models.size() << " models\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shape inference, grammar induction and generation for voxel buildings"};
  app.require_subcommand(1);

  InferArgs infer;
  auto* infer_cmd = app.add_subcommand("infer", "Infer a shape set from a voxel model");
  infer_cmd->add_option("model", infer.model, "Voxel JSON file")->required()->check(CLI::ExistingFile);
  infer_cmd->add_option("--spec", infer.spec, "Shape specification")->check(CLI::IsMember({"rect", "2d", "3d"}));
  infer_cmd->add_option("--alpha", infer.alpha, "Shape-count exponent")->check(CLI::NonNegativeNumber);
  infer_cmd->add_option("--ops", infer.ops, "Search operations")->check(CLI::IsMember({"merge", "split", "both"}));
  infer_cmd->add_flag("--overlap", infer.overlap, "Allow overlapping shapes (rect and 2d)");
  infer_cmd->add_flag("--plateau,!--no-plateau", infer.plateau, "Accept merges that keep the cost equal");
  infer_cmd->add_option("--max-steps", infer.max_steps, "Stop after this many accepted steps");
  infer_cmd->add_option("-o,--output", infer.out, "Shape-set JSON output (default stdout)");

  InduceArgs induce;
  auto* induce_cmd = app.add_subcommand("induce", "Induce a grammar from shape sets");
  induce_cmd->add_option("sets", induce.sets, "Shape-set JSON files")->required()->check(CLI::ExistingFile);
  induce_cmd->add_option("--initial", induce.initial, "Initial shape id (default: smallest)");
  induce_cmd->add_option("-o,--output", induce.out, "Grammar JSON output (default stdout)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Derive a random model from a grammar");
  gen_cmd->add_option("grammar", gen.grammar, "Grammar JSON file")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--max-steps", gen.max_steps, "Maximum rule applications");
  gen_cmd->add_flag("--enclosure", gen.enclosure, "Remove shapes that enclose no space");
  gen_cmd->add_option("-o,--output", gen.out, "Voxel JSON output (default stdout)");
  gen_cmd->add_option("--production", gen.production, "Also write the production JSON here");

  StatsArgs st;
  auto* stats_cmd = app.add_subcommand("stats", "Run the parameter grid over a corpus and write CSV");
  stats_cmd->add_option("corpus", st.corpus, "Directory of voxel JSON files")->required()->check(CLI::ExistingDirectory);
  stats_cmd->add_option("--specs", st.specs, "Shape specifications")->check(CLI::IsMember({"rect", "2d", "3d"}));
  stats_cmd->add_option("--alphas", st.alphas, "Alpha values")->check(CLI::NonNegativeNumber);
  stats_cmd->add_option("--ops", st.ops, "Search operations")->check(CLI::IsMember({"merge", "split", "both"}));
  stats_cmd->add_option("--overlaps", st.overlaps, "Overlap settings")->check(CLI::IsMember({"no", "yes"}));
  stats_cmd->add_flag("--plateau,!--no-plateau", st.plateau, "Accept merges that keep the cost equal");
  stats_cmd->add_option("--threads", st.threads, "Worker threads (0: all cores)");
  stats_cmd->add_flag("--no-timing", st.no_timing, "Write 0 for wall time so output is reproducible");
  stats_cmd->add_option("-o,--output", st.out, "CSV output (default stdout)");

  std::string corpus_dir;
  std::string host = "127.0.0.1";
  int port = api::default_port();
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--port", port, "Port (default $SHAPEGRAM_PORT or 8080)")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", host, "Address to bind");
  serve_cmd->add_option("--corpus", corpus_dir, "Directory of example models")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*infer_cmd) return run_infer(infer);
    if (*induce_cmd) return run_induce(induce);
    if (*gen_cmd) return run_generate(gen);
    if (*stats_cmd) return run_stats(st);
    if (*serve_cmd) {
      api::Api server(corpus_dir.empty() ? std::vector<VoxelModel>{} : io::load_corpus(corpus_dir));
      std::cerr << "listening on http://" << host << ':' << port << '\n';
      if (!api::serve(server, host, port)) {
        std::cerr << "error: cannot bind " << host << ':' << port << '\n';
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
