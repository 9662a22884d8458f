#ifndef BRL_TENSOR_HPP_
#define BRL_TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include "brl/rng.hpp"

namespace brl {

/// Dense n-dimensional array of 64-bit floats in row-major order.
///
/// Values produced by library operations are always finite; operations that
/// could produce NaN/Inf raise NumericError instead of returning silently.
/// Tensors are plain values: cheap to move, deep-copied on copy, and safe to
/// share read-only across threads.
class Tensor {
 public:
  Tensor() = default;

  /// Zero-initialized tensor of the given shape. Every dim must be positive.
  explicit Tensor(std::vector<std::size_t> shape);

  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  /// 1-D convenience constructor: Tensor({1.0, 2.0}).
  static Tensor vector(std::initializer_list<double> values);
  static Tensor vector(std::vector<double> values);

  /// 2-D convenience constructor from nested lists of equal length rows.
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor full(std::vector<std::size_t> shape, double value);
  static Tensor identity(std::size_t n);

  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t dim(std::size_t i) const { return shape_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& operator()(std::size_t i) { return data_[i]; }
  double operator()(std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
  }

  /// Same data, new shape; element count must match.
  Tensor reshaped(std::vector<std::size_t> shape) const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  /// "[2x3]" — used in error messages.
  std::string shape_str() const;

  /// Throws NumericError naming `label` if any element is NaN/Inf.
  void check_finite(const std::string& label) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// Readable shape string for an arbitrary dim list.
std::string shape_str(const std::vector<std::size_t>& shape);

/// Exact element-wise equality (shapes and all bits).
bool bits_equal(const Tensor& a, const Tensor& b);

// ---- arithmetic ------------------------------------------------------------

/// Matrix product of 2-D tensors. Per output element the k-summation runs
/// left to right, so results are bit-reproducible.
Tensor matmul(const Tensor& a, const Tensor& b);

/// Elementwise product; shapes must be identical (no broadcasting).
Tensor hadamard(const Tensor& a, const Tensor& b);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);

/// Outer product u vᵀ of two 1-D tensors.
Tensor outer(const Tensor& u, const Tensor& v);

/// 2-D transpose.
Tensor transpose(const Tensor& a);

/// Stacks `copies` copies of a 1-D tensor into a [copies x D] matrix. The
/// library has no implicit broadcasting; this is the explicit form.
Tensor tile(const Tensor& v, std::size_t copies);

double sum(const Tensor& a);
double max_abs(const Tensor& a);

/// I.i.d. normal samples with mean 0 and the given std (> 0).
Tensor gaussian_init(Rng& rng, std::vector<std::size_t> shape, double stddev);

// ---- serialization ---------------------------------------------------------
//
// .ten container: magic "TEN1", then rank and dims as little-endian u64,
// then the row-major payload as little-endian f64. Round-trips are bit-exact.

void save_tensor(const Tensor& t, const std::string& path);
Tensor load_tensor(const std::string& path);
void write_tensor(const Tensor& t, std::ostream& os);
Tensor read_tensor(std::istream& is);

}  // namespace brl

#endif  // BRL_TENSOR_HPP_
