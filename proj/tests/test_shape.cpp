#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "shapegram/shape.hpp"

using namespace shapegram;

namespace {

Block blk(const char* t, int x, int y, int z) { return {BlockType(t), {x, y, z}}; }

std::vector<Block> sorted(std::vector<Block> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Shape shape_of(ShapeId id, std::vector<Block> blocks, ShapeSpec spec = ShapeSpec::Free3D) {
  return Shape{id, spec, sorted(std::move(blocks)), std::nullopt};
}

// Rotation by a quarter turn about the x axis: (x, y, z) -> (x, -z, y).
std::vector<Block> tilt(const std::vector<Block>& blocks) {
  std::vector<Block> out;
  for (const auto& b : blocks) out.push_back({b.type, {b.pos.x, -b.pos.z, b.pos.y}});
  return out;
}

}  // namespace

TEST_CASE("check_shape reports the failed invariant") {
  const std::vector<Block> pair{blk("a", 0, 0, 0), blk("a", 1, 0, 0)};
  CHECK(check_shape(pair, ShapeSpec::Planar2D) == Violation::None);
  CHECK(check_shape(pair, ShapeSpec::Rectangular) == Violation::None);

  const std::vector<Block> gap{blk("a", 0, 0, 0), blk("a", 2, 0, 0)};
  for (auto spec : {ShapeSpec::Rectangular, ShapeSpec::Planar2D, ShapeSpec::Free3D}) {
    CHECK(check_shape(gap, spec) == Violation::Incoherent);
  }

  const std::vector<Block> ell{blk("a", 0, 0, 0), blk("a", 1, 0, 0), blk("a", 1, 1, 0)};
  CHECK(check_shape(ell, ShapeSpec::Rectangular) == Violation::NotRectangular);
  CHECK(check_shape(ell, ShapeSpec::Planar2D) == Violation::None);

  const std::vector<Block> corner{blk("a", 0, 0, 0), blk("a", 1, 0, 0), blk("a", 0, 0, 1), blk("a", 0, 1, 0)};
  CHECK(check_shape(corner, ShapeSpec::Planar2D) == Violation::NotPlanar);
  CHECK(check_shape(corner, ShapeSpec::Free3D) == Violation::None);

  CHECK(check_shape({}, ShapeSpec::Free3D) == Violation::Empty);
  CHECK(check_shape(std::vector<Block>{blk("a", 0, 0, 0), blk("b", 0, 0, 0)}, ShapeSpec::Free3D) ==
        Violation::DuplicatePosition);

  // A row along x lies in both the y and the z plane, but not in the x plane.
  CHECK(check_shape(pair, ShapeSpec::Planar2D, Axis::Z) == Violation::None);
  CHECK(check_shape(pair, ShapeSpec::Planar2D, Axis::Y) == Violation::None);
  CHECK(check_shape(pair, ShapeSpec::Planar2D, Axis::X) == Violation::NotPlanar);
}

TEST_CASE("make_shape validates and plane_axis finds the fixed axis") {
  CHECK_THROWS_AS(make_shape(0, {blk("a", 0, 0, 0), blk("a", 2, 0, 0)}, ShapeSpec::Free3D), Error);
  try {
    make_shape(0, {}, ShapeSpec::Free3D);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyShape);
  }
  const Shape wall = make_shape(0, {blk("a", 3, 0, 0), blk("a", 3, 1, 0), blk("a", 3, 0, 1), blk("a", 3, 1, 1)},
                                ShapeSpec::Rectangular);
  CHECK(plane_axis(wall) == Axis::X);
  const Shape single = make_shape(1, {blk("a", 0, 0, 0)}, ShapeSpec::Rectangular);
  CHECK(plane_axis(single) == Axis::Z);
  const Shape locked = make_shape(2, {blk("a", 0, 0, 0)}, ShapeSpec::Rectangular, Axis::Y);
  CHECK(plane_axis(locked) == Axis::Y);
  const Shape cube = make_shape(3, {blk("a", 0, 0, 0), blk("a", 1, 0, 0), blk("a", 0, 1, 0), blk("a", 0, 0, 1)},
                                ShapeSpec::Free3D);
  CHECK_FALSE(plane_axis(cube).has_value());
}

TEST_CASE("apply_transform examples") {
  const Shape s = shape_of(0, {blk("a", 1, 0, 0)});
  CHECK(apply_transform(GridTransform::identity(), s) == s);
  const auto q = GridTransform::make(1, {});
  CHECK(apply_transform(q, s).blocks == std::vector<Block>{blk("a", 0, 1, 0)});

  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const Shape r = shape_of(0, oracle::random_blob(rng, 9, 3));
    const auto half = GridTransform::make(2, {});
    CHECK(apply_transform(half, apply_transform(half, r)) == r);
  }
}

TEST_CASE("apply_transform keeps planar and rectangular shapes valid and maps a locked plane") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const int plane = k % 3;
    const auto blocks = oracle::random_blob(rng, 7, 2, plane);
    const auto t = oracle::random_transform(rng);
    const Shape s{0, ShapeSpec::Planar2D, sorted(blocks), static_cast<Axis>(plane)};
    const Shape img = apply_transform(t, s);
    CHECK(img.size() == s.size());
    CHECK(check_shape(img.blocks, ShapeSpec::Planar2D, img.plane) == Violation::None);
    CHECK(img.plane == t.map_axis(static_cast<Axis>(plane)));
  }
  const Shape rect = make_shape(0, {blk("a", 0, 0, 0), blk("a", 1, 0, 0), blk("a", 0, 0, 1), blk("a", 1, 0, 1)},
                                ShapeSpec::Rectangular);
  for (int r = 0; r < 4; ++r) {
    CHECK(check_shape(apply_transform(GridTransform::make(r, {2, -3, 1}), rect).blocks, ShapeSpec::Rectangular) ==
          Violation::None);
  }
}

TEST_CASE("canonical form is invariant under translation and z-rotation") {
  const Shape s = shape_of(0, {blk("a", 0, 0, 0), blk("b", 1, 0, 0), blk("a", 1, 1, 0), blk("c", 1, 1, 1)});
  const auto c = canonicalize(s);
  CHECK(c.form.blocks.front().pos == GridPos{0, 0, 0});
  CHECK(canonicalize(apply_transform(GridTransform::translation({5, -2, 7}), s)).form == c.form);
  CHECK(canonicalize(apply_transform(GridTransform::make(1, {}), s)).form == c.form);

  // to_shape maps the canonical form onto the shape.
  std::vector<Block> mapped;
  for (const auto& b : c.form.blocks) mapped.push_back({b.type, c.to_shape.apply(b.pos)});
  CHECK(sorted(mapped) == s.blocks);

  std::mt19937_64 rng(6);
  for (int k = 0; k < 300; ++k) {
    const Shape r = shape_of(0, oracle::random_blob(rng, 1 + k % 10, 3));
    const auto t = oracle::random_transform(rng);
    CHECK(canonicalize(apply_transform(t, r)).form == canonicalize(r).form);
  }
}

TEST_CASE("a pair related only by a horizontal-axis rotation does not match") {
  // Same block multiset and configuration up to a tilt: an upright L and a lying L.
  const std::vector<Block> upright{blk("s", 0, 0, 0), blk("s", 1, 0, 0), blk("g", 0, 0, 1), blk("g", 0, 0, 2)};
  const Shape a = shape_of(0, upright);
  const Shape b = shape_of(1, tilt(upright));
  CHECK(canonicalize(a).form != canonicalize(b).form);
  CHECK_FALSE(shapes_match(a, b).has_value());
  CHECK_FALSE(oracle::matches(a.blocks, b.blocks));
}

TEST_CASE("vertical and horizontal copies related by a z-rotation match") {
  const std::vector<Block> along_x{blk("w", 0, 0, 0), blk("w", 1, 0, 0), blk("g", 0, 0, 1), blk("g", 1, 0, 1)};
  const Shape a = shape_of(0, along_x);
  const Shape b = apply_transform(GridTransform::make(1, {10, 3, 0}), a);
  const auto t = shapes_match(a, b);
  REQUIRE(t.has_value());
  CHECK(apply_transform(*t, a).blocks == b.blocks);
}

TEST_CASE("mirror images and retyped copies do not match") {
  const std::vector<Block> l{blk("a", 0, 0, 0), blk("a", 1, 0, 0), blk("a", 2, 0, 0), blk("a", 0, 1, 0)};
  std::vector<Block> mirror;
  for (const auto& b : l) mirror.push_back({b.type, {-b.pos.x, b.pos.y, b.pos.z}});
  CHECK_FALSE(shapes_match(shape_of(0, l), shape_of(1, mirror)).has_value());

  auto retyped = l;
  retyped[2].type = BlockType("b");
  CHECK_FALSE(shapes_match(shape_of(0, l), shape_of(1, retyped)).has_value());
}

TEST_CASE("shapes_match agrees with a brute-force matcher on random pairs") {
  std::mt19937_64 rng(7);
  int agree_match = 0;
  for (int k = 0; k < 400; ++k) {
    const auto a = oracle::random_blob(rng, 2 + k % 7, 2);
    const auto b = k % 2 ? oracle::random_blob(rng, 2 + k % 7, 2)
                         : oracle::transformed(k % 4, {k % 5, -k % 3, k % 2}, a);
    const Shape sa = shape_of(0, a);
    const Shape sb = shape_of(1, b);
    const auto t = shapes_match(sa, sb);
    const bool want = oracle::matches(a, b);
    CHECK(t.has_value() == want);
    if (t) {
      CHECK(apply_transform(*t, sa).blocks == sb.blocks);
      ++agree_match;
    }
  }
  CHECK(agree_match >= 200);
}

TEST_CASE("match classes partition by canonical form") {
  const std::vector<Block> window{blk("glass", 0, 0, 0), blk("glass", 1, 0, 0), blk("sill", 0, 0, -1),
                                  blk("sill", 1, 0, -1)};
  std::vector<Shape> shapes;
  for (int k = 0; k < 3; ++k) {
    shapes.push_back(apply_transform(GridTransform::translation({4 * k, 0, 0}), shape_of(k, window)));
  }
  shapes.push_back(shape_of(3, {blk("stone", 0, 0, 5), blk("stone", 0, 1, 5)}));
  const auto classes = match_classes(shapes);
  REQUIRE(classes.size() == 2);
  std::multiset<std::size_t> sizes;
  for (const auto& c : classes) sizes.insert(c.members.size());
  CHECK(sizes == std::multiset<std::size_t>{1, 3});
  for (const auto& c : classes) {
    for (ShapeId m : c.members) {
      CHECK(c.contains(m));
      std::vector<Block> img;
      for (const auto& b : c.canonical.blocks) img.push_back({b.type, c.rep_transforms.at(m).apply(b.pos)});
      CHECK(sorted(img) == shapes[m].blocks);
    }
  }

  std::vector<Shape> distinct;
  for (int k = 0; k < 5; ++k) {
    std::vector<Block> row;
    for (int x = 0; x <= k; ++x) row.push_back(blk("s", x, 0, 0));
    distinct.push_back(shape_of(k, row));
  }
  CHECK(match_classes(distinct).size() == 5);
}

TEST_CASE("class sizes equal planted multiplicities, checked pairwise by brute force") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Shape> shapes;
    std::vector<int> planted;
    for (int base = 0; base < 4; ++base) {
      const auto blob = oracle::random_blob(rng, 4 + base, 3);
      const int copies = 1 + static_cast<int>(rng() % 3);
      planted.push_back(copies);
      for (int c = 0; c < copies; ++c) {
        const auto t = oracle::random_transform(rng);
        shapes.push_back(apply_transform(t, shape_of(static_cast<ShapeId>(shapes.size()), blob)));
      }
    }
    const auto classes = match_classes(shapes);
    // Brute-force class of each shape: every shape it matches.
    for (const auto& c : classes) {
      for (ShapeId m : c.members) {
        std::size_t n = 0;
        for (const auto& other : shapes) n += oracle::matches(shapes[m].blocks, other.blocks);
        CHECK(n == c.members.size());
      }
    }
    std::multiset<std::size_t> got, want(planted.begin(), planted.end());
    for (const auto& c : classes) got.insert(c.members.size());
    CHECK(got == want);
  }
}

TEST_CASE("matching is an equivalence relation on random triples") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const auto base = oracle::random_blob(rng, 5, 2);
    const Shape a = shape_of(0, base);
    const Shape b = apply_transform(oracle::random_transform(rng), a);
    const Shape c = k % 3 ? apply_transform(oracle::random_transform(rng), b) : shape_of(2, oracle::random_blob(rng, 5, 2));
    const auto aa = shapes_match(a, a);
    REQUIRE(aa.has_value());
    CHECK(apply_transform(*aa, a).blocks == a.blocks);
    const auto ab = shapes_match(a, b);
    const auto ba = shapes_match(b, a);
    CHECK(ab.has_value() == ba.has_value());
    const auto bc = shapes_match(b, c);
    const auto ac = shapes_match(a, c);
    if (ab && bc) {
      REQUIRE(ac.has_value());
      CHECK(apply_transform(*bc * *ab, a).blocks == c.blocks);
    }
    if (ab && !bc) CHECK_FALSE(ac.has_value());
  }
}
