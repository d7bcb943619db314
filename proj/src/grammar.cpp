#include "shapegram/grammar.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <utility>

namespace shapegram {

namespace {

std::string id_text(ShapeId id) { return std::to_string(id); }

std::vector<Block> realize(const CanonicalForm& form, const GridTransform& pose) {
  std::vector<Block> out;
  out.reserve(form.blocks.size());
  for (const auto& b : form.blocks) out.push_back({b.type, pose.apply(b.pos)});
  std::sort(out.begin(), out.end());
  return out;
}

// Index pairs (i < j) of shapes with at least one pair of face-adjacent cells.
std::set<std::pair<std::size_t, std::size_t>> adjacent_pairs(std::span<const Shape> shapes) {
  std::unordered_map<GridPos, std::vector<std::size_t>, GridPosHash> holders;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    for (const auto& b : shapes[k].blocks) holders[b.pos].push_back(k);
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    for (const auto& b : shapes[k].blocks) {
      for (const auto& q : neighbors6(b.pos)) {
        const auto it = holders.find(q);
        if (it == holders.end()) continue;
        for (std::size_t t : it->second) {
          if (t != k) pairs.emplace(std::min(k, t), std::max(k, t));
        }
      }
    }
  }
  return pairs;
}

}  // namespace

ShapeGrammar::ShapeGrammar(std::vector<Shape> shapes, std::vector<ShapeLabel> labels,
                           std::vector<MatchClass> classes, std::vector<ShapeRule> rules, ShapeId initial)
    : shapes_(std::move(shapes)),
      classes_(std::move(classes)),
      rules_(std::move(rules)),
      initial_(initial) {
  for (std::size_t k = 0; k < shapes_.size(); ++k) {
    if (!index_.emplace(shapes_[k].id, k).second) {
      throw Error(ErrorCode::MalformedDocument, "duplicate shape id " + id_text(shapes_[k].id));
    }
  }

  labels_.resize(shapes_.size());
  std::vector<char> labelled(shapes_.size(), false);
  for (auto& l : labels) {
    const auto it = index_.find(l.shape);
    if (it == index_.end()) throw Error(ErrorCode::DanglingReference, "label for unknown shape " + id_text(l.shape));
    if (labelled[it->second]) throw Error(ErrorCode::MalformedDocument, "two labels for shape " + id_text(l.shape));
    labelled[it->second] = true;
    labels_[it->second] = std::move(l);
  }
  for (std::size_t k = 0; k < shapes_.size(); ++k) {
    if (!labelled[k]) throw Error(ErrorCode::MalformedDocument, "shape " + id_text(shapes_[k].id) + " has no label");
  }

  for (std::size_t c = 0; c < classes_.size(); ++c) {
    for (ShapeId m : classes_[c].members) {
      const auto it = index_.find(m);
      if (it == index_.end()) throw Error(ErrorCode::DanglingReference, "class member " + id_text(m) + " is not a shape");
      if (!class_index_.emplace(m, c).second) {
        throw Error(ErrorCode::MalformedDocument, "shape " + id_text(m) + " is in two classes");
      }
      const Shape& s = shapes_[it->second];
      if (canonicalize(s).form != classes_[c].canonical) {
        throw Error(ErrorCode::MalformedDocument, "shape " + id_text(m) + " does not match its class");
      }
    }
  }
  for (std::size_t k = 0; k < shapes_.size(); ++k) {
    const Shape& s = shapes_[k];
    const auto it = class_index_.find(s.id);
    if (it == class_index_.end()) throw Error(ErrorCode::MalformedDocument, "shape " + id_text(s.id) + " has no class");
    if (realize(classes_[it->second].canonical, labels_[k].origin_pose) != s.blocks) {
      throw Error(ErrorCode::MalformedDocument, "label pose of shape " + id_text(s.id) + " does not reproduce it");
    }
  }

  by_class_.resize(classes_.size());
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const auto& rule = rules_[r];
    if (rule.lhs_class >= classes_.size()) {
      throw Error(ErrorCode::DanglingReference, "rule " + std::to_string(r) + " names unknown class");
    }
    if (!index_.count(rule.lhs_anchor) || !index_.count(rule.rhs)) {
      throw Error(ErrorCode::DanglingReference, "rule " + std::to_string(r) + " names an unknown shape");
    }
    if (class_index_.at(rule.lhs_anchor) != rule.lhs_class) {
      throw Error(ErrorCode::MalformedDocument, "rule " + std::to_string(r) + " anchor is not in its lhs class");
    }
    by_class_[rule.lhs_class].push_back(r);
  }
  if (!shapes_.empty() && !index_.count(initial_)) {
    throw Error(ErrorCode::DanglingReference, "initial shape " + id_text(initial_) + " does not exist");
  }
}

const Shape& ShapeGrammar::shape(ShapeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownShape, "no shape with id " + id_text(id));
  return shapes_[it->second];
}

const ShapeLabel& ShapeGrammar::label(ShapeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownShape, "no shape with id " + id_text(id));
  return labels_[it->second];
}

std::size_t ShapeGrammar::class_of(ShapeId id) const {
  const auto it = class_index_.find(id);
  if (it == class_index_.end()) throw Error(ErrorCode::UnknownShape, "no shape with id " + id_text(id));
  return it->second;
}

const MatchClass& ShapeGrammar::match_class(std::size_t cls) const {
  if (cls >= classes_.size()) throw Error(ErrorCode::UnknownClass, "no match class " + std::to_string(cls));
  return classes_[cls];
}

const std::vector<std::size_t>& ShapeGrammar::rules_for_class(std::size_t cls) const {
  if (cls >= by_class_.size()) throw Error(ErrorCode::UnknownClass, "no match class " + std::to_string(cls));
  return by_class_[cls];
}

ShapeGrammar induce(std::span<const ShapeSet> sets, const InduceOptions& options) {
  std::size_t total = 0;
  for (const auto& s : sets) total += s.shapes.size();
  if (total == 0) throw Error(ErrorCode::EmptyInput, "no shapes to induce a grammar from");

  std::vector<Shape> shapes;
  std::vector<ShapeLabel> labels;
  std::vector<std::pair<ShapeId, ShapeId>> adjacent;  // global ids, first < second
  shapes.reserve(total);
  for (const auto& set : sets) {
    std::vector<Shape> local = set.shapes;
    std::sort(local.begin(), local.end(), [](const Shape& a, const Shape& b) { return a.id < b.id; });
    const auto base = static_cast<ShapeId>(shapes.size());
    for (const auto& [i, j] : adjacent_pairs(local)) {
      adjacent.emplace_back(base + static_cast<ShapeId>(i), base + static_cast<ShapeId>(j));
    }
    for (auto& s : local) {
      s.id = static_cast<ShapeId>(shapes.size());
      labels.push_back({s.id, canonicalize(s).to_shape, set.source});
      shapes.push_back(std::move(s));
    }
  }

  auto classes = match_classes(shapes);
  std::map<ShapeId, std::size_t> cls_of;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (ShapeId m : classes[c].members) cls_of[m] = c;
  }

  std::vector<ShapeRule> rules;
  rules.reserve(adjacent.size() * 2);
  for (const auto& [i, j] : adjacent) {
    rules.push_back({cls_of.at(i), i, j});
    rules.push_back({cls_of.at(j), j, i});
  }

  ShapeId initial = options.initial.value_or(0);
  if (initial < 0 || static_cast<std::size_t>(initial) >= shapes.size()) {
    throw Error(ErrorCode::UnknownShape, "initial shape " + id_text(initial) + " does not exist");
  }
  return ShapeGrammar(std::move(shapes), std::move(labels), std::move(classes), std::move(rules), initial);
}

PlacedShape place(const ShapeGrammar& g, ShapeId shape, const GridTransform& pose) {
  const Shape& s = g.shape(shape);
  const std::size_t cls = g.class_of(shape);
  PlacedShape out{shape, cls, pose, s.spec, std::nullopt, realize(g.match_class(cls).canonical, pose)};
  if (s.spec != ShapeSpec::Free3D) {
    if (const auto axis = plane_axis(s)) {
      // The net map from the example blocks to the placed blocks is
      // pose * origin^-1; only its rotation matters for an axis.
      out.plane = (pose * g.label(shape).origin_pose.inverse()).map_axis(*axis);
    }
  }
  return out;
}

std::vector<RuleApplication> applicable_rules(const ShapeGrammar& g, const PlacedShape& placed) {
  std::vector<RuleApplication> out;
  for (std::size_t r : g.rules_for_class(placed.cls)) {
    const ShapeRule& rule = g.rules()[r];
    const GridTransform lhs_map = placed.pose * g.label(rule.lhs_anchor).origin_pose.inverse();
    out.push_back({r, lhs_map, lhs_map * g.label(rule.rhs).origin_pose});
  }
  return out;
}

std::size_t adjacent_pair_count(const ShapeSet& s) { return adjacent_pairs(s.shapes).size(); }

}  // namespace shapegram
