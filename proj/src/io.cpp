#include "shapegram/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace shapegram::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedDocument, what); }

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) malformed(where + " is not an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::MissingField, where + " has no \"" + key + "\"");
  return *it;
}

std::int64_t integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    if (v.is_number()) throw Error(ErrorCode::NonIntegerCoordinate, where + " is not an integer");
    malformed(where + " is not a number");
  }
  return v.is_number_unsigned() && v.get<std::uint64_t>() > std::uint64_t(std::numeric_limits<std::int64_t>::max())
             ? std::numeric_limits<std::int64_t>::max()
             : v.get<std::int64_t>();
}

std::int32_t int32(const json& v, const std::string& where) {
  const auto n = integer(v, where);
  if (n < std::numeric_limits<std::int32_t>::min() || n > std::numeric_limits<std::int32_t>::max()) {
    malformed(where + " is out of range");
  }
  return static_cast<std::int32_t>(n);
}

std::size_t index(const json& v, const std::string& where) {
  const auto n = integer(v, where);
  if (n < 0) malformed(where + " is negative");
  return static_cast<std::size_t>(n);
}

std::string string(const json& v, const std::string& where) {
  if (!v.is_string()) malformed(where + " is not a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& where) {
  if (!v.is_array()) malformed(where + " is not an array");
  return v;
}

GridPos position(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) malformed(where + " is not an array of three integers");
  for (std::size_t k = 0; k < 3; ++k) {
    if (!v[k].is_number_integer()) throw Error(ErrorCode::NonIntegerCoordinate, where + " has a non-integer coordinate");
  }
  return {int32(v[0], where), int32(v[1], where), int32(v[2], where)};
}

json position_to_json(const GridPos& p) { return json::array({p.x, p.y, p.z}); }

std::vector<Block> blocks_from_json(const json& v, const std::string& where) {
  std::vector<Block> out;
  out.reserve(array(v, where).size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    const std::string type = string(field(v[k], "t", at), at + ".t");
    if (type.empty()) malformed(at + ".t is empty");
    out.push_back({BlockType(type), position(field(v[k], "p", at), at + ".p")});
  }
  return out;
}

json blocks_to_json(const std::vector<Block>& blocks) {
  json out = json::array();
  for (const auto& b : blocks) out.push_back({{"t", b.type.token()}, {"p", position_to_json(b.pos)}});
  return out;
}

std::optional<Axis> axis_from_json(const json& obj, const std::string& where) {
  const auto it = obj.find("plane");
  if (it == obj.end() || it->is_null()) return std::nullopt;
  const std::string name = string(*it, where + ".plane");
  if (name == "x") return Axis::X;
  if (name == "y") return Axis::Y;
  if (name == "z") return Axis::Z;
  malformed(where + ".plane must be \"x\", \"y\" or \"z\"");
}

ShapeSpec spec_from_json(const json& v, const std::string& where) {
  try {
    return parse_shape_spec(string(v, where));
  } catch (const Error&) {
    malformed(where + " must be \"rect\", \"2d\" or \"3d\"");
  }
}

// Voxel documents keep one block per line so diffs stay readable.
std::string dump_with_block_lines(const json& head, const std::vector<Block>& blocks) {
  std::string out = head.dump();
  out.pop_back();  // closing brace
  if (out.size() > 1) out += ',';
  out += "\"blocks\":[";
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    out += k ? ",\n  " : "\n  ";
    out += json{{"t", blocks[k].type.token()}, {"p", position_to_json(blocks[k].pos)}}.dump();
  }
  out += blocks.empty() ? "]}\n" : "\n]}\n";
  return out;
}

}  // namespace

VoxelModel model_from_json(const json& doc, ModelUse use) {
  if (!doc.is_object()) malformed("voxel document is not an object");
  const std::string name = string(field(doc, "name", "voxel document"), "name");
  VoxelModel m(name, blocks_from_json(field(doc, "blocks", "voxel document"), "blocks"));
  if (use == ModelUse::Example) m.require_non_empty();
  return m;
}

VoxelModel load_model(std::string_view text, ModelUse use) { return model_from_json(parse(text), use); }

json model_to_json(const VoxelModel& m) { return {{"name", m.name()}, {"blocks", blocks_to_json(m.blocks())}}; }

std::string save_model(const VoxelModel& m) { return dump_with_block_lines({{"name", m.name()}}, m.blocks()); }

ShapeSet shape_set_from_json(const json& doc) {
  if (!doc.is_object()) malformed("shape-set document is not an object");
  ShapeSet s;
  s.spec = spec_from_json(field(doc, "spec", "shape set"), "spec");
  const json& overlap = field(doc, "overlap", "shape set");
  if (!overlap.is_boolean()) malformed("overlap is not a boolean");
  s.overlap = overlap.get<bool>();
  if (const auto it = doc.find("source"); it != doc.end()) s.source = string(*it, "source");
  const json& shapes = array(field(doc, "shapes", "shape set"), "shapes");
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const std::string at = "shapes[" + std::to_string(k) + "]";
    const ShapeId id = int32(field(shapes[k], "id", at), at + ".id");
    if (s.find(id)) malformed("duplicate shape id " + std::to_string(id));
    auto blocks = blocks_from_json(field(shapes[k], "blocks", at), at + ".blocks");
    s.shapes.push_back(make_shape(id, std::move(blocks), s.spec, axis_from_json(shapes[k], at)));
  }
  return s;
}

ShapeSet load_shape_set(std::string_view text) { return shape_set_from_json(parse(text)); }

json shape_set_to_json(const ShapeSet& s) {
  json shapes = json::array();
  for (const auto& shape : s.shapes) {
    json j{{"id", shape.id}, {"blocks", blocks_to_json(shape.blocks)}};
    if (shape.plane) j["plane"] = std::string(1, axis_name(*shape.plane));
    shapes.push_back(std::move(j));
  }
  return {{"spec", to_string(s.spec)}, {"overlap", s.overlap}, {"source", s.source}, {"shapes", std::move(shapes)}};
}

std::string save_shape_set(const ShapeSet& s) { return shape_set_to_json(s).dump(1) + '\n'; }

json transform_to_json(const GridTransform& t) { return {{"rot", t.rot}, {"delta", position_to_json(t.delta)}}; }

GridTransform transform_from_json(const json& doc) {
  const std::int32_t rot = int32(field(doc, "rot", "pose"), "pose.rot");
  if (rot < 0 || rot > 3) malformed("pose.rot must be in [0, 4)");
  return GridTransform::make(rot, position(field(doc, "delta", "pose"), "pose.delta"));
}

ShapeGrammar grammar_from_json(const json& doc) {
  if (!doc.is_object()) malformed("grammar document is not an object");

  std::vector<Shape> shapes;
  const json& js = array(field(doc, "shapes", "grammar"), "shapes");
  for (std::size_t k = 0; k < js.size(); ++k) {
    const std::string at = "shapes[" + std::to_string(k) + "]";
    const ShapeId id = int32(field(js[k], "id", at), at + ".id");
    const ShapeSpec spec = spec_from_json(field(js[k], "spec", at), at + ".spec");
    shapes.push_back(
        make_shape(id, blocks_from_json(field(js[k], "blocks", at), at + ".blocks"), spec, axis_from_json(js[k], at)));
  }
  std::set<ShapeId> ids;
  for (const auto& s : shapes) {
    if (!ids.insert(s.id).second) malformed("duplicate shape id " + std::to_string(s.id));
  }

  std::vector<ShapeLabel> labels;
  const json& jl = array(field(doc, "labels", "grammar"), "labels");
  for (std::size_t k = 0; k < jl.size(); ++k) {
    const std::string at = "labels[" + std::to_string(k) + "]";
    ShapeLabel l;
    l.shape = int32(field(jl[k], "shape", at), at + ".shape");
    l.origin_pose = transform_from_json(field(jl[k], "pose", at));
    l.source_model = string(field(jl[k], "model", at), at + ".model");
    labels.push_back(std::move(l));
  }

  // Classes are derived data: recompute them and require the document to agree.
  auto computed = match_classes(shapes);
  const json& jc = array(field(doc, "classes", "grammar"), "classes");
  std::vector<std::vector<ShapeId>> given;
  for (std::size_t c = 0; c < jc.size(); ++c) {
    const std::string at = "classes[" + std::to_string(c) + "]";
    std::vector<ShapeId> members;
    for (const auto& m : array(jc[c], at)) {
      const ShapeId id = int32(m, at);
      if (!ids.count(id)) throw Error(ErrorCode::DanglingReference, at + " names unknown shape " + std::to_string(id));
      members.push_back(id);
    }
    given.push_back(std::move(members));
  }
  if (given.size() != computed.size()) malformed("classes do not partition the shapes by match");
  for (std::size_t c = 0; c < given.size(); ++c) {
    if (given[c] != computed[c].members) malformed("class " + std::to_string(c) + " does not match the shapes");
  }

  std::vector<ShapeRule> rules;
  const json& jr = array(field(doc, "rules", "grammar"), "rules");
  for (std::size_t k = 0; k < jr.size(); ++k) {
    const std::string at = "rules[" + std::to_string(k) + "]";
    ShapeRule r;
    r.lhs_class = index(field(jr[k], "lhs_class", at), at + ".lhs_class");
    r.lhs_anchor = int32(field(jr[k], "lhs_anchor", at), at + ".lhs_anchor");
    r.rhs = int32(field(jr[k], "rhs", at), at + ".rhs");
    rules.push_back(r);
  }
  const ShapeId initial = int32(field(doc, "initial", "grammar"), "initial");
  return ShapeGrammar(std::move(shapes), std::move(labels), std::move(computed), std::move(rules), initial);
}

ShapeGrammar load_grammar(std::string_view text) { return grammar_from_json(parse(text)); }

json grammar_to_json(const ShapeGrammar& g) {
  json shapes = json::array();
  for (const auto& s : g.shapes()) {
    json j{{"id", s.id}, {"spec", to_string(s.spec)}, {"blocks", blocks_to_json(s.blocks)}};
    if (s.plane) j["plane"] = std::string(1, axis_name(*s.plane));
    shapes.push_back(std::move(j));
  }
  json labels = json::array();
  for (const auto& l : g.labels()) {
    labels.push_back({{"shape", l.shape}, {"model", l.source_model}, {"pose", transform_to_json(l.origin_pose)}});
  }
  json classes = json::array();
  for (const auto& c : g.classes()) classes.push_back(c.members);
  json rules = json::array();
  for (const auto& r : g.rules()) {
    rules.push_back({{"lhs_class", r.lhs_class}, {"lhs_anchor", r.lhs_anchor}, {"rhs", r.rhs}});
  }
  return {{"shapes", std::move(shapes)},
          {"labels", std::move(labels)},
          {"classes", std::move(classes)},
          {"rules", std::move(rules)},
          {"initial", g.initial()}};
}

std::string save_grammar(const ShapeGrammar& g) { return grammar_to_json(g).dump(1) + '\n'; }

json production_to_json(const Production& p) {
  json placed = json::array();
  for (const auto& s : p.placed) {
    placed.push_back(
        {{"shape", s.shape}, {"class", s.cls}, {"pose", transform_to_json(s.pose)}, {"blocks", blocks_to_json(s.blocks)}});
  }
  json history = json::array();
  for (const auto& h : p.history) {
    history.push_back({{"target", h.target}, {"rule", h.rule}, {"pose", transform_to_json(h.rhs_pose)}});
  }
  return {{"placed", std::move(placed)}, {"history", std::move(history)}, {"seed", p.seed}, {"base", p.base}};
}

Production production_from_json(const ShapeGrammar& g, const json& doc) {
  if (!doc.is_object()) malformed("production document is not an object");
  Production p;
  const json& seed = field(doc, "seed", "production");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    malformed("seed is not a non-negative integer");
  }
  p.seed = seed.get<std::uint64_t>();

  const json& jp = array(field(doc, "placed", "production"), "placed");
  for (std::size_t k = 0; k < jp.size(); ++k) {
    const std::string at = "placed[" + std::to_string(k) + "]";
    const ShapeId id = int32(field(jp[k], "shape", at), at + ".shape");
    if (!g.has_shape(id)) throw Error(ErrorCode::DanglingReference, at + " names unknown shape " + std::to_string(id));
    PlacedShape s = place(g, id, transform_from_json(field(jp[k], "pose", at)));
    if (const auto it = jp[k].find("class"); it != jp[k].end() && index(*it, at + ".class") != s.cls) {
      malformed(at + ".class disagrees with the grammar");
    }
    if (const auto it = jp[k].find("blocks"); it != jp[k].end()) {
      auto blocks = blocks_from_json(*it, at + ".blocks");
      std::sort(blocks.begin(), blocks.end());
      if (blocks != s.blocks) malformed(at + ".blocks disagree with the shape at its pose");
    }
    p.placed.push_back(std::move(s));
  }

  const json& jh = array(field(doc, "history", "production"), "history");
  for (std::size_t k = 0; k < jh.size(); ++k) {
    const std::string at = "history[" + std::to_string(k) + "]";
    HistoryStep h;
    h.target = index(field(jh[k], "target", at), at + ".target");
    h.rule = index(field(jh[k], "rule", at), at + ".rule");
    h.rhs_pose = transform_from_json(field(jh[k], "pose", at));
    if (h.rule >= g.rules().size()) throw Error(ErrorCode::DanglingReference, at + " names an unknown rule");
    p.history.push_back(h);
  }
  if (const auto it = doc.find("base"); it != doc.end()) {
    p.base = index(*it, "base");
  } else {
    p.base = p.placed.size() >= p.history.size() ? p.placed.size() - p.history.size() : 0;
  }
  if (p.base + p.history.size() != p.placed.size()) malformed("history does not account for the placed shapes");
  for (std::size_t k = 0; k < p.history.size(); ++k) {
    const auto& h = p.history[k];
    const auto& added = p.placed[p.base + k];
    if (h.target >= p.base + k) throw Error(ErrorCode::DanglingReference, "history step targets a later shape");
    if (g.rules()[h.rule].rhs != added.shape || h.rhs_pose != added.pose) {
      malformed("history step " + std::to_string(k) + " disagrees with the placed shapes");
    }
  }
  try {
    p.occupancy = occupancy_of(p.placed);
  } catch (const Error& e) {
    malformed(std::string("placed shapes conflict: ") + e.what());
  }
  return p;
}

std::string production_hash(const Production& p) {
  const std::string text = production_to_json(p).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing " + path.string());
}

std::vector<VoxelModel> load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::InvalidArgument, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<VoxelModel> out;
  for (const auto& f : files) {
    try {
      out.push_back(load_model(read_file(f)));
    } catch (const Error& e) {
      const std::string what = e.what();
      throw Error(e.code(), f.filename().string() + ": " + what.substr(what.find(": ") + 2));
    }
  }
  return out;
}

}  // namespace shapegram::io
