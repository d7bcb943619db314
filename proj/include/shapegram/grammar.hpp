#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shapegram/inference.hpp"
#include "shapegram/shape.hpp"
#include "shapegram/transform.hpp"

namespace shapegram {

/// Where a shape sits in its source example: origin_pose maps the shape's
/// canonical form onto its original blocks.
struct ShapeLabel {
  ShapeId shape = 0;
  GridTransform origin_pose;
  std::string source_model;

  friend bool operator==(const ShapeLabel&, const ShapeLabel&) = default;
};

/// "class(lhs_anchor) -> class(lhs_anchor) rhs": wherever a member of the lhs
/// class is placed, rhs may be added at the offset it had from lhs_anchor in
/// the example.
struct ShapeRule {
  std::size_t lhs_class = 0;
  ShapeId lhs_anchor = 0;
  ShapeId rhs = 0;

  friend bool operator==(const ShapeRule&, const ShapeRule&) = default;
};

class ShapeGrammar {
 public:
  ShapeGrammar() = default;
  /// Validates references and label poses; throws DanglingReference or
  /// MalformedDocument.
  ShapeGrammar(std::vector<Shape> shapes, std::vector<ShapeLabel> labels, std::vector<MatchClass> classes,
               std::vector<ShapeRule> rules, ShapeId initial);

  const std::vector<Shape>& shapes() const noexcept { return shapes_; }
  const std::vector<ShapeLabel>& labels() const noexcept { return labels_; }
  const std::vector<MatchClass>& classes() const noexcept { return classes_; }
  const std::vector<ShapeRule>& rules() const noexcept { return rules_; }
  ShapeId initial() const noexcept { return initial_; }

  bool has_shape(ShapeId id) const { return index_.count(id) != 0; }
  /// Throw UnknownShape.
  const Shape& shape(ShapeId id) const;
  const ShapeLabel& label(ShapeId id) const;
  std::size_t class_of(ShapeId id) const;
  /// Throws UnknownClass.
  const MatchClass& match_class(std::size_t cls) const;
  /// Indices into rules() whose lhs is the given class, ascending.
  const std::vector<std::size_t>& rules_for_class(std::size_t cls) const;

  friend bool operator==(const ShapeGrammar& a, const ShapeGrammar& b) {
    return a.shapes_ == b.shapes_ && a.labels_ == b.labels_ && a.classes_ == b.classes_ &&
           a.rules_ == b.rules_ && a.initial_ == b.initial_;
  }

 private:
  std::vector<Shape> shapes_;
  std::vector<ShapeLabel> labels_;
  std::vector<MatchClass> classes_;
  std::vector<ShapeRule> rules_;
  ShapeId initial_ = 0;

  std::map<ShapeId, std::size_t> index_;
  std::map<ShapeId, std::size_t> class_index_;
  std::vector<std::vector<std::size_t>> by_class_;
};

struct InduceOptions {
  std::optional<ShapeId> initial;  // defaults to the smallest shape id
};

/// Builds the grammar from one or more shape sets. Shapes are renumbered
/// 0..n-1 in input order. Every pair of shapes from the same source with a
/// pair of face-adjacent blocks yields the two rules i -> i j and j -> j i;
/// match classes span all sets. Throws EmptyInput.
ShapeGrammar induce(std::span<const ShapeSet> sets, const InduceOptions& options = {});

/// A grammar shape realized in the production.
struct PlacedShape {
  ShapeId shape = 0;
  std::size_t cls = 0;
  GridTransform pose;  // canonical form -> world
  ShapeSpec spec = ShapeSpec::Rectangular;
  std::optional<Axis> plane;  // fixed axis in world space, planar specs only
  std::vector<Block> blocks;  // sorted

  friend bool operator==(const PlacedShape&, const PlacedShape&) = default;
};

PlacedShape place(const ShapeGrammar& g, ShapeId shape, const GridTransform& pose);

/// A rule usable at a placed shape.
struct RuleApplication {
  std::size_t rule = 0;
  GridTransform lhs_map;   // example frame of the rule's anchor -> world
  GridTransform rhs_pose;  // canonical form of the rhs -> world
};

/// Every rule whose lhs class is the placed shape's class. The rhs pose
/// composes the placed pose with the anchor's inverse origin pose and the rhs
/// origin pose, so the rhs keeps its example offset relative to the placed
/// shape. Throws UnknownClass.
std::vector<RuleApplication> applicable_rules(const ShapeGrammar& g, const PlacedShape& placed);

/// Number of unordered shape pairs, per source, with face-adjacent blocks.
std::size_t adjacent_pair_count(const ShapeSet& s);

}  // namespace shapegram
