#ifndef BRL_IMAGE_IO_HPP_
#define BRL_IMAGE_IO_HPP_

#include <string>
#include <vector>

#include "brl/tensor.hpp"

namespace brl::img {

/// Binary PPM (P6), 8-bit. Values in [-1,1] map to round((v+1)*127.5);
/// out-of-range values raise RangeError-style ValueError, never clamp.
void write_image_ppm(const Tensor& image, const std::string& path);

/// Inverse mapping byte -> byte/127.5 - 1; write(read(p)) is byte-identical.
Tensor read_image_ppm(const std::string& path);

/// Tiles rows x cols images (all same shape) into one [H',W',3] image with a
/// 1-pixel border of `border_value` between cells.
Tensor montage(const std::vector<std::vector<Tensor>>& grid, double border_value = -1.0);

}  // namespace brl::img

#endif  // BRL_IMAGE_IO_HPP_
