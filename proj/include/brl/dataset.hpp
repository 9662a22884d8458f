#ifndef BRL_DATASET_HPP_
#define BRL_DATASET_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "brl/gan.hpp"
#include "brl/rng.hpp"
#include "brl/tensor.hpp"

// Synthetic editing dataset: one colored shape per image on a dark
// background. An attribute class is a (color, shape) pair; the editing
// target keeps the shape and switches the color.

namespace brl::data {

enum class Shape { kSquare, kCircle, kTriangle };

std::string shape_name(Shape s);
Shape shape_from_name(const std::string& name);

struct ShapeWorldSpec {
  std::size_t image_size = 16;
  std::vector<std::array<double, 3>> palette;  // RGB in [-1,1]
  std::vector<Shape> shapes;
  std::size_t per_class = 12;
  double noise_std = 0.05;

  /// 4 colors x {square, circle}, 16x16, mild pixel noise.
  static ShapeWorldSpec defaults();

  std::size_t num_classes() const { return palette.size() * shapes.size(); }
  void validate() const;  // needs >= 2 colors and >= 1 shape
};

/// class id = shape index * palette size + color index.
std::size_t class_id(const ShapeWorldSpec& spec, std::size_t color_idx, std::size_t shape_idx);
std::size_t color_of(const ShapeWorldSpec& spec, std::size_t cls);
std::size_t shape_of(const ShapeWorldSpec& spec, std::size_t cls);
std::string class_name(const ShapeWorldSpec& spec, std::size_t cls);

/// Noise-free class prototype image, [size,size,3] in [-1,1].
Tensor render_class(const ShapeWorldSpec& spec, std::size_t cls);

/// per_class samples per attribute class. Pixel noise is Gaussian, clamped
/// to [-1,1]. The editing id keeps the shape and draws a different color;
/// the mismatching id comes from sample_mismatch.
gan::Dataset generate_dataset(const ShapeWorldSpec& spec, Rng& rng);

}  // namespace brl::data

#endif  // BRL_DATASET_HPP_
