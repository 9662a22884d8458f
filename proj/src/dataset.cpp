#include "brl/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "brl/error.hpp"

namespace brl::data {

namespace {
constexpr double kBackground = -0.9;
}

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::kSquare: return "square";
    case Shape::kCircle: return "circle";
    case Shape::kTriangle: return "triangle";
  }
  throw ValueError("unknown shape enum value");
}

Shape shape_from_name(const std::string& name) {
  if (name == "square") return Shape::kSquare;
  if (name == "circle") return Shape::kCircle;
  if (name == "triangle") return Shape::kTriangle;
  throw ValueError("unknown shape name '" + name + "'");
}

ShapeWorldSpec ShapeWorldSpec::defaults() {
  ShapeWorldSpec spec;
  spec.palette = {
      {1.0, -0.8, -0.8},   // red
      {-0.8, 1.0, -0.8},   // green
      {-0.7, -0.7, 1.0},   // blue
      {1.0, 1.0, -0.8},    // yellow
  };
  spec.shapes = {Shape::kSquare, Shape::kCircle};
  return spec;
}

void ShapeWorldSpec::validate() const {
  if (palette.size() < 2) {
    throw ConfigError("shape-world palette needs at least two colors for editing targets");
  }
  if (shapes.empty()) throw ConfigError("shape-world needs at least one shape");
  if (image_size < 8 || image_size % 8 != 0) {
    throw ConfigError("image size must be a positive multiple of 8");
  }
  if (per_class == 0) throw ConfigError("per_class must be positive");
  if (noise_std < 0.0) throw ConfigError("noise std must be non-negative");
  for (const auto& c : palette) {
    for (double v : c) {
      if (v < -1.0 || v > 1.0) throw ConfigError("palette values must lie in [-1,1]");
    }
  }
}

std::size_t class_id(const ShapeWorldSpec& spec, std::size_t color_idx,
                     std::size_t shape_idx) {
  return shape_idx * spec.palette.size() + color_idx;
}

std::size_t color_of(const ShapeWorldSpec& spec, std::size_t cls) {
  return cls % spec.palette.size();
}

std::size_t shape_of(const ShapeWorldSpec& spec, std::size_t cls) {
  return cls / spec.palette.size();
}

std::string class_name(const ShapeWorldSpec& spec, std::size_t cls) {
  static const char* kColorNames[] = {"c0", "c1", "c2", "c3", "c4", "c5", "c6", "c7"};
  const std::size_t color = color_of(spec, cls);
  const std::string cname = color < 8 ? kColorNames[color] : std::to_string(color);
  return cname + "-" + shape_name(spec.shapes[shape_of(spec, cls)]);
}

namespace {

bool inside_shape(Shape shape, std::size_t size, std::size_t y, std::size_t x) {
  const double c = (static_cast<double>(size) - 1.0) / 2.0;
  const double dy = static_cast<double>(y) - c;
  const double dx = static_cast<double>(x) - c;
  const double half = static_cast<double>(size) * 0.28;
  switch (shape) {
    case Shape::kSquare:
      return std::fabs(dy) <= half && std::fabs(dx) <= half;
    case Shape::kCircle:
      return dy * dy + dx * dx <= (half * 1.15) * (half * 1.15);
    case Shape::kTriangle: {
      // Upward triangle: apex near the top, base near the bottom.
      const double top = c - half * 1.2;
      const double bottom = c + half * 1.2;
      if (y < top || y > bottom) return false;
      const double progress = (static_cast<double>(y) - top) / (bottom - top);
      return std::fabs(dx) <= progress * half * 1.25;
    }
  }
  return false;
}

}  // namespace

Tensor render_class(const ShapeWorldSpec& spec, std::size_t cls) {
  if (cls >= spec.num_classes()) {
    throw ValueError("class id " + std::to_string(cls) + " out of range for " +
                     std::to_string(spec.num_classes()) + " classes");
  }
  const auto& color = spec.palette[color_of(spec, cls)];
  const Shape shape = spec.shapes[shape_of(spec, cls)];
  const std::size_t s = spec.image_size;
  Tensor img({s, s, 3});
  for (std::size_t y = 0; y < s; ++y) {
    for (std::size_t x = 0; x < s; ++x) {
      const bool in = inside_shape(shape, s, y, x);
      for (std::size_t ch = 0; ch < 3; ++ch) {
        img(y, x, ch) = in ? color[ch] : kBackground;
      }
    }
  }
  return img;
}

gan::Dataset generate_dataset(const ShapeWorldSpec& spec, Rng& rng) {
  spec.validate();
  gan::Dataset data;
  data.num_classes = spec.num_classes();

  for (std::size_t cls = 0; cls < spec.num_classes(); ++cls) {
    const Tensor proto = render_class(spec, cls);
    for (std::size_t k = 0; k < spec.per_class; ++k) {
      gan::SamplePair sample;
      sample.image = proto;
      if (spec.noise_std > 0.0) {
        for (std::size_t i = 0; i < sample.image.size(); ++i) {
          sample.image[i] = std::clamp(sample.image[i] + rng.normal() * spec.noise_std,
                                       -1.0, 1.0);
        }
      }
      sample.match_id = cls;
      // Edit: same shape, different color.
      const std::size_t color = color_of(spec, cls);
      const std::size_t new_color =
          (color + 1 + rng.uniform_u64(spec.palette.size() - 1)) % spec.palette.size();
      sample.edit_id = class_id(spec, new_color, shape_of(spec, cls));
      data.samples.push_back(std::move(sample));
    }
  }
  for (auto& sample : data.samples) {
    sample.mismatch_id = gan::sample_mismatch(data, sample.match_id, rng);
  }
  return data;
}

}  // namespace brl::data
