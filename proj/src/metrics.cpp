#include "brl/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "brl/error.hpp"

namespace brl::data {

namespace {
constexpr double kLogFloor = 1e-12;
}

IsScore inception_score_from_posteriors(const Tensor& posteriors, std::size_t splits) {
  if (posteriors.rank() != 2 || posteriors.dim(0) < 2 || posteriors.dim(1) < 1) {
    throw ValueError("inception score needs a [N>=2, C] posterior matrix, got " +
                     posteriors.shape_str());
  }
  if (splits == 0) throw ValueError("inception score needs at least one split");
  const std::size_t n = posteriors.dim(0), c = posteriors.dim(1);
  const std::size_t effective = std::min(splits, n);

  std::vector<double> scores;
  scores.reserve(effective);
  const std::size_t base = n / effective, rem = n % effective;
  std::size_t begin = 0;
  for (std::size_t s = 0; s < effective; ++s) {
    const std::size_t len = base + (s < rem ? 1 : 0);
    const std::size_t end = begin + len;

    // Split marginal p(y).
    std::vector<double> marginal(c, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < c; ++j) marginal[j] += posteriors(i, j);
    }
    double mass = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      marginal[j] /= static_cast<double>(len);
      mass += marginal[j];
    }
    if (std::fabs(mass - 1.0) > 1e-9) {
      throw NumericError("split marginal does not sum to 1 (got " + std::to_string(mass) + ")");
    }

    double mean_kl = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      double kl = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        const double p = posteriors(i, j);
        if (p <= 0.0) continue;  // 0 * log 0 = 0
        kl += p * (std::log(std::max(p, kLogFloor)) - std::log(std::max(marginal[j], kLogFloor)));
      }
      mean_kl += kl;
    }
    mean_kl /= static_cast<double>(len);

    const double score = std::exp(mean_kl);
    // Analytic bounds: KL >= 0 and mean KL over a split is the mutual
    // information, at most log C.
    if (score < 1.0 - 1e-9 || score > static_cast<double>(c) + 1e-6) {
      throw NumericError("inception score " + std::to_string(score) +
                         " violates bounds [1, " + std::to_string(c) + "]");
    }
    scores.push_back(score);
    begin = end;
  }

  IsScore out;
  for (double s : scores) out.mean += s;
  out.mean /= static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - out.mean) * (s - out.mean);
  out.stddev = std::sqrt(var / static_cast<double>(scores.size()));
  return out;
}

IsScore inception_score(const ClassifierModel& clf, const std::vector<Tensor>& images,
                        std::size_t splits) {
  if (images.size() < 2) throw ValueError("inception score needs at least two images");
  const std::size_t h = images.front().dim(0), w = images.front().dim(1);
  Tensor batch({images.size(), h, w, 3});
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].size() != h * w * 3) {
      throw ShapeError("inception score: inconsistent image shapes");
    }
    std::copy(images[i].data(), images[i].data() + images[i].size(),
              batch.data() + i * h * w * 3);
  }
  return inception_score_from_posteriors(clf.posteriors(batch), splits);
}

}  // namespace brl::data
