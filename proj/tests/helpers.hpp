#ifndef BRL_TESTS_HELPERS_HPP_
#define BRL_TESTS_HELPERS_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "brl/rng.hpp"
#include "brl/tensor.hpp"

namespace brl::testing {

inline Tensor random_tensor(Rng& rng, std::vector<std::size_t> shape, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.normal() * scale;
  return t;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

/// max_i |a_i - b_i| / max(|b_i|, floor). With floor = 1e-3 a result <= 1e-4
/// is the usual "relative error 1e-4 with absolute floor 1e-7" criterion.
inline double max_rel_err(const Tensor& a, const Tensor& b, double floor_ = 1e-3) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a[i] - b[i]) / std::max(std::fabs(b[i]), floor_));
  }
  return m;
}

/// Random orthogonal matrix via modified Gram-Schmidt on a Gaussian draw.
inline Tensor random_orthogonal(Rng& rng, std::size_t n) {
  Tensor q = random_tensor(rng, {n, n});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t prev = 0; prev < j; ++prev) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += q(i, j) * q(i, prev);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, prev);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

}  // namespace brl::testing

#endif  // BRL_TESTS_HELPERS_HPP_
