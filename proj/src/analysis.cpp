#include "brl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "brl/error.hpp"

namespace brl::analysis {

std::vector<double> singular_values(const Tensor& m_in) {
  if (m_in.rank() != 2 || m_in.size() == 0) {
    throw ValueError("singular_values: expected a non-empty matrix, got " + m_in.shape_str());
  }
  // Work on the tall orientation so the sweep runs over the smaller side.
  Tensor a = m_in.dim(0) >= m_in.dim(1) ? m_in : transpose(m_in);
  const std::size_t rows = a.dim(0), cols = a.dim(1);

  const double eps = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          alpha += ap * ap;
          beta += aq * aq;
          gamma += ap * aq;
        }
        if (std::fabs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) norm2 += a(i, j) * a(i, j);
    sv[j] = std::sqrt(norm2);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

int numerical_rank(const Tensor& m, double tol) {
  if (!(tol > 0.0)) throw ValueError("numerical_rank: tol must be positive");
  const std::vector<double> sv = singular_values(m);
  const double sigma_max = sv.front();
  if (sigma_max == 0.0) return 0;
  int rank = 0;
  for (double s : sv) {
    if (s > tol * sigma_max) ++rank;
  }
  return rank;
}

Tensor film_to_bilinear_matrix(const FilmParams& p, std::size_t output_index,
                               const Tensor& feat) {
  if (output_index >= p.out_dim()) {
    throw ValueError("film_to_bilinear_matrix: output index " + std::to_string(output_index) +
                     " out of range for O=" + std::to_string(p.out_dim()));
  }
  if (feat.rank() != 1 || feat.size() != p.feat_dim()) {
    throw ShapeError("film_to_bilinear_matrix: feat " + feat.shape_str() + " vs D=" +
                     std::to_string(p.feat_dim()));
  }
  // k = argmax |feat|, lowest index on ties; the division below needs it
  // nonzero.
  std::size_t k = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < feat.size(); ++i) {
    if (std::fabs(feat[i]) > best) {
      best = std::fabs(feat[i]);
      k = i;
    }
  }
  if (best == 0.0) {
    throw NumericError("film_to_bilinear_matrix: feat is all-zero; construction divides by "
                       "a feature element");
  }

  const std::size_t d = p.feat_dim(), dc = p.cond_dim();
  Tensor w({d, dc});
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < dc; ++j) {
      w(i, j) = p.w_feat(i, output_index) * p.w_gain(j, output_index);
    }
  }
  for (std::size_t j = 0; j < dc; ++j) {
    w(k, j) += p.w_bias(j, output_index) / feat[k];
  }
  return w;
}

EquivalenceReport verify_film_equivalence(const FilmParams& p, std::size_t trials, Rng& rng,
                                          const VerifyOptions& opts) {
  if (trials < 1) throw ValueError("verify_film_equivalence: trials must be >= 1");
  EquivalenceReport report;
  report.deviation_tol = opts.deviation_tol;
  report.rank_tol = opts.rank_tol;
  report.feature_ranks.assign(p.out_dim(), 0);

  const std::size_t d = p.feat_dim(), dc = p.cond_dim(), o = p.out_dim();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Tensor feat({d});
    do {
      for (std::size_t i = 0; i < d; ++i) feat[i] = rng.normal();
    } while (max_abs(feat) < opts.resample_threshold);

    std::vector<Tensor> mats;
    mats.reserve(o);
    for (std::size_t oi = 0; oi < o; ++oi) {
      mats.push_back(film_to_bilinear_matrix(p, oi, feat));
      report.feature_ranks[oi] =
          std::max(report.feature_ranks[oi], numerical_rank(mats.back(), opts.rank_tol));
    }

    for (std::size_t draw = 0; draw < opts.cond_draws; ++draw) {
      Tensor cond({dc});
      for (std::size_t j = 0; j < dc; ++j) cond[j] = rng.normal();
      const Tensor film_out = film_condition(p, feat, cond);
      for (std::size_t oi = 0; oi < o; ++oi) {
        double bil = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          double inner = 0.0;
          for (std::size_t j = 0; j < dc; ++j) inner += mats[oi](i, j) * cond[j];
          bil += feat[i] * inner;
        }
        report.max_deviation = std::max(report.max_deviation, std::fabs(bil - film_out[oi]));
      }
    }
  }

  bool ranks_ok = true;
  for (int r : report.feature_ranks) ranks_ok = ranks_ok && r <= 2;
  report.pass = ranks_ok && report.max_deviation <= opts.deviation_tol;
  return report;
}

}  // namespace brl::analysis
