// Writes the bundled synthetic example corpus as voxel JSON files.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "shapegram/io.hpp"

namespace fs = std::filesystem;
using namespace shapegram;

namespace {

class Builder {
 public:
  explicit Builder(std::string name) : name_(std::move(name)) {}

  void set(int x, int y, int z, const std::string& type) { cells_[{x, y, z}] = type; }

  void fill(int x0, int y0, int z0, int x1, int y1, int z1, const std::string& type) {
    for (int z = z0; z <= z1; ++z)
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) set(x, y, z, type);
  }

  void clear(int x, int y, int z) { cells_.erase({x, y, z}); }

  VoxelModel model() const {
    std::vector<Block> blocks;
    for (const auto& [p, t] : cells_) blocks.push_back({BlockType(t), p});
    return VoxelModel(name_, std::move(blocks));
  }

 private:
  std::string name_;
  std::map<GridPos, std::string> cells_;
};

// Wall in the y = 0 plane: brick plinth, stone body, a door and a row of windows.
VoxelModel facade_flat() {
  Builder b("facade_flat");
  b.fill(0, 0, 0, 11, 0, 0, "brick");
  b.fill(0, 0, 1, 11, 0, 7, "stone");
  b.fill(5, 0, 0, 6, 0, 2, "door");
  for (int x : {1, 4, 7, 10}) b.fill(x, 0, 5, x, 0, 6, "glass");
  return b.model();
}

// Closed box: plank floor, stone walls with one window per long side, slab roof.
VoxelModel box_house() {
  Builder b("box_house");
  b.fill(0, 0, 0, 7, 5, 0, "planks");
  b.fill(0, 0, 1, 7, 5, 3, "stone");
  for (int z = 1; z <= 3; ++z)
    for (int y = 1; y <= 4; ++y)
      for (int x = 1; x <= 6; ++x) b.clear(x, y, z);
  b.fill(3, 0, 2, 4, 0, 2, "glass");
  b.fill(3, 5, 2, 4, 5, 2, "glass");
  b.fill(0, 0, 4, 7, 5, 4, "slab");
  return b.model();
}

// Planted symmetry: two identical windows with sills in a stone wall.
VoxelModel two_window_facade() {
  Builder b("two_window_facade");
  b.fill(0, 0, 0, 13, 0, 6, "stone");
  for (int x : {2, 10}) {
    b.fill(x, 0, 3, x + 1, 0, 4, "glass");
    b.fill(x, 0, 2, x + 1, 0, 2, "quartz");
  }
  return b.model();
}

// One type only, in the x = 0 plane.
VoxelModel mono_wall() {
  Builder b("mono_wall");
  b.fill(0, 0, 0, 0, 9, 5, "stone");
  return b.model();
}

// 5 x 5 hollow tower, ten high, with a window on every face and a cap.
VoxelModel tower() {
  Builder b("tower");
  b.fill(0, 0, 0, 4, 4, 0, "cobble");
  for (int z = 1; z <= 9; ++z) {
    for (int k = 0; k <= 4; ++k) {
      b.set(k, 0, z, "stone");
      b.set(k, 4, z, "stone");
      b.set(0, k, z, "stone");
      b.set(4, k, z, "stone");
    }
  }
  for (int z : {4, 5, 7, 8}) {
    b.set(2, 0, z, "glass");
    b.set(2, 4, z, "glass");
    b.set(0, 2, z, "glass");
    b.set(4, 2, z, "glass");
  }
  b.fill(0, 0, 10, 4, 4, 10, "slab");
  return b.model();
}

// Open porch: floor, four log pillars with fence rails between, plank roof.
VoxelModel pillared_porch() {
  Builder b("pillared_porch");
  b.fill(0, 0, 0, 8, 4, 0, "slab");
  for (int x : {0, 8})
    for (int y : {0, 4}) b.fill(x, y, 1, x, y, 4, "log");
  b.fill(1, 0, 1, 7, 0, 1, "fence");
  b.fill(0, 0, 5, 8, 4, 5, "planks");
  return b.model();
}

// Small house whose roof steps in by one cell per layer from both long sides.
VoxelModel stepped_roof_house() {
  Builder b("stepped_roof_house");
  b.fill(0, 0, 0, 8, 6, 0, "planks");
  for (int z = 1; z <= 3; ++z) {
    for (int x = 0; x <= 8; ++x) {
      b.set(x, 0, z, "brick");
      b.set(x, 6, z, "brick");
    }
    for (int y = 0; y <= 6; ++y) {
      b.set(0, y, z, "brick");
      b.set(8, y, z, "brick");
    }
  }
  b.fill(4, 0, 1, 4, 0, 2, "door");
  b.fill(2, 6, 2, 2, 6, 2, "glass");
  b.fill(6, 6, 2, 6, 6, 2, "glass");
  for (int step = 0; step <= 3; ++step) {
    const int z = 4 + step;
    b.fill(0, step, z, 8, step, z, "roof");
    b.fill(0, 6 - step, z, 8, 6 - step, z, "roof");
    if (step < 3) {
      b.fill(0, step + 1, z, 0, 5 - step, z, "planks");
      b.fill(8, step + 1, z, 8, 5 - step, z, "planks");
    }
  }
  return b.model();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_corpus <output dir>\n";
    return 2;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir);
  for (const auto& m : {facade_flat(), box_house(), two_window_facade(), mono_wall(), tower(), pillared_porch(),
                        stepped_roof_house()}) {
    io::write_file(dir / (m.name() + ".json"), io::save_model(m));
    std::cout << m.name() << ": " << m.size() << " blocks\n";
  }
  return 0;
}
