#ifndef BRL_METRICS_HPP_
#define BRL_METRICS_HPP_

#include <cstddef>
#include <vector>

#include "brl/classifier.hpp"
#include "brl/tensor.hpp"

namespace brl::data {

struct IsScore {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Inception-style score from class posteriors [N,C]:
/// exp(mean_x KL(p(y|x) || p(y))) with p(y) the split's mean posterior.
///
/// The image list is partitioned into `splits` contiguous near-equal chunks
/// in the given order (the metric's usual protocol; the op itself draws no
/// randomness) and mean/std are taken over the per-chunk scores. Every
/// per-chunk score is checked against the analytic bounds [1, C].
IsScore inception_score_from_posteriors(const Tensor& posteriors, std::size_t splits = 10);

/// Convenience wrapper: posteriors come from the classifier.
IsScore inception_score(const ClassifierModel& clf, const std::vector<Tensor>& images,
                        std::size_t splits = 10);

}  // namespace brl::data

#endif  // BRL_METRICS_HPP_
