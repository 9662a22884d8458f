#ifndef BRL_ANALYSIS_HPP_
#define BRL_ANALYSIS_HPP_

#include <cstddef>
#include <vector>

#include "brl/conditioning.hpp"
#include "brl/rng.hpp"
#include "brl/tensor.hpp"

// Mechanical verification that film conditioning is an instance of the
// bilinear transform whose per-output matrix has rank at most 2: the sum of
// one outer product (the gain path) and one single-row matrix (the bias
// path divided through a chosen feature coordinate).

namespace brl::analysis {

struct EquivalenceReport {
  double max_deviation = 0.0;        // max |bilinear - film| over all checks
  std::vector<int> feature_ranks;    // per output feature, max rank observed
  bool pass = false;                 // deviation <= tol and all ranks <= 2
  double deviation_tol = 1e-9;
  double rank_tol = 1e-10;
};

struct VerifyOptions {
  double deviation_tol = 1e-9;
  double rank_tol = 1e-10;
  // Number of conditioning vectors checked against each constructed matrix.
  std::size_t cond_draws = 10;
  // Feature draws are rejected while max |feat_k| stays below this.
  double resample_threshold = 1e-6;
};

/// Singular values in descending order, via one-sided (Hestenes) Jacobi
/// rotations: columns are iteratively orthogonalized; their final norms are
/// the singular values. Accurate for the small dense matrices used here.
std::vector<double> singular_values(const Tensor& m);

/// Number of singular values above tol * sigma_max. tol must be positive.
int numerical_rank(const Tensor& m, double tol);

/// Builds the [D x D'] matrix W_i with feat · W_i · condᵀ equal to output
/// feature i of film_condition(p, feat, ·) for this feat and every cond.
/// The construction divides by the largest-magnitude element of feat
/// (lowest index on ties) and fails on an all-zero feat.
Tensor film_to_bilinear_matrix(const FilmParams& p, std::size_t output_index,
                               const Tensor& feat);

/// Draws `trials` random feature vectors (resampling near-zero draws); for
/// each, constructs every W_i, measures |bilinear - film| over random
/// conditioning vectors, and certifies rank(W_i) <= 2.
EquivalenceReport verify_film_equivalence(const FilmParams& p, std::size_t trials, Rng& rng,
                                          const VerifyOptions& opts = {});

}  // namespace brl::analysis

#endif  // BRL_ANALYSIS_HPP_
