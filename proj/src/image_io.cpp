#include "brl/image_io.hpp"

#include <cmath>
#include <fstream>

#include "brl/error.hpp"

namespace brl::img {

void write_image_ppm(const Tensor& image, const std::string& path) {
  if (image.rank() != 3 || image.dim(2) != 3) {
    throw ShapeError("ppm writer expects [H,W,3], got " + image.shape_str());
  }
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (!(image[i] >= -1.0 && image[i] <= 1.0)) {
      throw ValueError("ppm writer: value " + std::to_string(image[i]) +
                       " outside [-1,1]; refusing to clamp");
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "P6\n" << image.dim(1) << " " << image.dim(0) << "\n255\n";
  std::vector<unsigned char> bytes(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    bytes[i] = static_cast<unsigned char>(std::lround((image[i] + 1.0) * 127.5));
  }
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed: " + path);
}

Tensor read_image_ppm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  std::string magic;
  is >> magic;
  if (magic != "P6") throw IoError("not a binary PPM: " + path);
  std::size_t w = 0, h = 0;
  int maxval = 0;
  is >> w >> h >> maxval;
  if (!is || maxval != 255 || w == 0 || h == 0) {
    throw IoError("unsupported PPM header in " + path);
  }
  is.get();  // single whitespace after header
  std::vector<unsigned char> bytes(w * h * 3);
  is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!is) throw IoError("truncated PPM payload in " + path);
  Tensor img({h, w, 3});
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    img[i] = static_cast<double>(bytes[i]) / 127.5 - 1.0;
  }
  return img;
}

Tensor montage(const std::vector<std::vector<Tensor>>& grid, double border_value) {
  if (grid.empty() || grid.front().empty()) throw ValueError("montage: empty grid");
  const std::size_t rows = grid.size(), cols = grid.front().size();
  const Tensor& first = grid[0][0];
  const std::size_t h = first.dim(0), w = first.dim(1);
  const std::size_t out_h = rows * h + (rows + 1);
  const std::size_t out_w = cols * w + (cols + 1);
  Tensor out = Tensor::full({out_h, out_w, 3}, border_value);
  for (std::size_t r = 0; r < rows; ++r) {
    if (grid[r].size() != cols) throw ShapeError("montage: ragged grid");
    for (std::size_t c = 0; c < cols; ++c) {
      const Tensor& img = grid[r][c];
      if (img.dim(0) != h || img.dim(1) != w || img.dim(2) != 3) {
        throw ShapeError("montage: image shapes differ");
      }
      const std::size_t y0 = 1 + r * (h + 1);
      const std::size_t x0 = 1 + c * (w + 1);
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
          for (std::size_t ch = 0; ch < 3; ++ch) {
            out(y0 + y, x0 + x, ch) = img(y, x, ch);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace brl::img
