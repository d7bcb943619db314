#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shapegram/grammar.hpp"
#include "shapegram/inference.hpp"
#include "shapegram/production.hpp"
#include "shapegram/voxel.hpp"

namespace shapegram::io {

using nlohmann::json;

enum class ModelUse { Example, Output };

/// Parses a Voxel JSON document. Examples must be non-empty; outputs (such as
/// a fully pruned production) may be empty.
VoxelModel load_model(std::string_view text, ModelUse use = ModelUse::Example);
VoxelModel model_from_json(const json& doc, ModelUse use = ModelUse::Example);
/// One block per line, sorted by (z, y, x).
std::string save_model(const VoxelModel& m);
json model_to_json(const VoxelModel& m);

ShapeSet load_shape_set(std::string_view text);
ShapeSet shape_set_from_json(const json& doc);
std::string save_shape_set(const ShapeSet& s);
json shape_set_to_json(const ShapeSet& s);

ShapeGrammar load_grammar(std::string_view text);
ShapeGrammar grammar_from_json(const json& doc);
std::string save_grammar(const ShapeGrammar& g);
json grammar_to_json(const ShapeGrammar& g);

/// Production JSON. Placed shapes carry their realized blocks for display; on
/// load they are re-derived from the grammar and checked.
json production_to_json(const Production& p);
Production production_from_json(const ShapeGrammar& g, const json& doc);

json transform_to_json(const GridTransform& t);
GridTransform transform_from_json(const json& doc);

/// 64-bit FNV-1a of the compact production JSON, as 16 hex digits.
std::string production_hash(const Production& p);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Every *.json model in a directory, sorted by file name.
std::vector<VoxelModel> load_corpus(const std::filesystem::path& dir);

}  // namespace shapegram::io
