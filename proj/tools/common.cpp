#include "common.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "brl/error.hpp"

namespace brlgan {

std::vector<std::array<double, 3>> palette_colors(std::size_t count) {
  static const std::vector<std::array<double, 3>> kTable = {
      {1.0, -0.8, -0.8},   // red
      {-0.8, 1.0, -0.8},   // green
      {-0.7, -0.7, 1.0},   // blue
      {1.0, 1.0, -0.8},    // yellow
      {1.0, -0.7, 1.0},    // magenta
      {-0.8, 1.0, 1.0},    // cyan
      {1.0, 0.1, -0.8},    // orange
      {0.9, 0.9, 0.9},     // white
  };
  if (count < 2 || count > kTable.size()) {
    throw brl::ConfigError("color count must lie in [2, " + std::to_string(kTable.size()) +
                           "], got " + std::to_string(count));
  }
  return {kTable.begin(), kTable.begin() + static_cast<std::ptrdiff_t>(count)};
}

brl::data::ShapeWorldSpec make_spec(std::size_t image_size, std::size_t colors,
                                    const std::string& shapes, std::size_t per_class,
                                    double noise_std) {
  brl::data::ShapeWorldSpec spec;
  spec.image_size = image_size;
  spec.palette = palette_colors(colors);
  spec.per_class = per_class;
  spec.noise_std = noise_std;
  spec.shapes.clear();
  std::stringstream ss(shapes);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) spec.shapes.push_back(brl::data::shape_from_name(token));
  }
  spec.validate();
  return spec;
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw brl::IoError("cannot write " + path);
  os << text;
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

}  // namespace brlgan
