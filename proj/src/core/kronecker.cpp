#include "kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtucker {

ImplicitKronecker::ImplicitKronecker(std::vector<DenseMatrix> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw std::invalid_argument("ImplicitKronecker: needs at least one factor");
  }
  svds_.reserve(factors_.size());
  scores_.reserve(factors_.size());
  for (const DenseMatrix& f : factors_) {
    if (f.empty()) {
      throw std::invalid_argument("ImplicitKronecker: empty factor");
    }
    total_rows_ *= f.rows();
    total_cols_ *= f.cols();
    svds_.push_back(compact_svd(f));
    scores_.push_back(ridge_scores(svds_.back(), f.rows(), 0.0));
    const ScoreVector& sv = scores_.back();
    std::vector<double> cdf(sv.size());
    double running = 0.0;
    for (std::size_t i = 0; i < sv.size(); ++i) {
      running += sv.scores[i];
      cdf[i] = running;
    }
    score_sums_.push_back(running);  // = rank of the factor
    score_l1_ *= running;
    score_cdfs_.push_back(std::move(cdf));
  }
}

std::size_t ImplicitKronecker::linearize(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t n = 0; n < factors_.size(); ++n) {
    flat = flat * factors_[n].rows() + idx[n];
  }
  return flat;
}

std::vector<std::size_t> ImplicitKronecker::delinearize(std::size_t flat) const {
  std::vector<std::size_t> idx(factors_.size());
  for (std::size_t n = factors_.size(); n-- > 0;) {
    idx[n] = flat % factors_[n].rows();
    flat /= factors_[n].rows();
  }
  return idx;
}

void ImplicitKronecker::copy_row(std::span<const std::size_t> idx,
                                 std::span<double> out) const {
  for (std::size_t n = 0; n < factors_.size(); ++n) {
    if (idx[n] >= factors_[n].rows()) {
      throw std::out_of_range("ImplicitKronecker: row index out of range");
    }
  }
  // Iterated outer product, growing left to right.
  std::size_t width = factors_[0].cols();
  const auto first = factors_[0].row(idx[0]);
  for (std::size_t j = 0; j < width; ++j) out[j] = first[j];
  for (std::size_t n = 1; n < factors_.size(); ++n) {
    const auto next = factors_[n].row(idx[n]);
    const std::size_t next_width = next.size();
    for (std::size_t j = width; j-- > 0;) {
      const double v = out[j];
      double* dst = out.data() + j * next_width;
      for (std::size_t k = 0; k < next_width; ++k) dst[k] = v * next[k];
    }
    width *= next_width;
  }
}

std::vector<double> ImplicitKronecker::row(std::span<const std::size_t> idx) const {
  std::vector<double> out(total_cols_);
  copy_row(idx, out);
  return out;
}

double ImplicitKronecker::factored_leverage_score(std::span<const std::size_t> idx) const {
  double score = 1.0;
  for (std::size_t n = 0; n < factors_.size(); ++n) {
    score *= scores_[n].scores[idx[n]];
  }
  return score;
}

double ImplicitKronecker::ridge_cross_score(std::span<const std::size_t> row_idx,
                                            std::span<const std::size_t> col_row_idx,
                                            double lambda) const {
  const std::size_t order = factors_.size();
  for (std::size_t n = 0; n < order; ++n) {
    if (svds_[n].rank() == 0) return 0.0;  // a zero factor zeroes the product
  }
  // Sum over rank tuples t of the factor SVDs:
  //   prod sigma_{t_n}^2 / (prod sigma_{t_n}^2 + lambda) *
  //   (prod u_{i_n t_n}) (prod u_{j_n t_n}).
  std::vector<std::size_t> t(order, 0);
  double total = 0.0;
  for (;;) {
    double sigma2 = 1.0;
    double ui = 1.0;
    double uj = 1.0;
    for (std::size_t n = 0; n < order; ++n) {
      const CompactSvd& svd = svds_[n];
      const double s = svd.singular_values[t[n]];
      sigma2 *= s * s;
      ui *= svd.u(row_idx[n], t[n]);
      uj *= svd.u(col_row_idx[n], t[n]);
    }
    total += sigma2 / (sigma2 + lambda) * ui * uj;

    std::size_t n = order;
    while (n-- > 0) {
      if (++t[n] < svds_[n].rank()) break;
      t[n] = 0;
      if (n == 0) return total;
    }
  }
}

std::pair<std::vector<std::size_t>, double> ImplicitKronecker::sample_row_index(
    SplitMix64& rng) const {
  std::vector<std::size_t> idx(factors_.size());
  double probability = 1.0;
  for (std::size_t n = 0; n < factors_.size(); ++n) {
    if (score_sums_[n] <= 0.0) {
      throw std::invalid_argument(
          "ImplicitKronecker: cannot sample, factor has no nonzero rows");
    }
    const std::vector<double>& cdf = score_cdfs_[n];
    const double u = rng.next_double() * score_sums_[n];
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    if (i >= cdf.size()) i = cdf.size() - 1;
    while (i > 0 && scores_[n].scores[i] == 0.0) --i;
    idx[n] = i;
    probability *= scores_[n].scores[i] / score_sums_[n];
  }
  return {std::move(idx), probability};
}

DenseMatrix ImplicitKronecker::materialize() const {
  DenseMatrix k = factors_[0];
  for (std::size_t n = 1; n < factors_.size(); ++n) {
    k = kronecker_product(k, factors_[n]);
  }
  return k;
}

void KroneckerRowSource::copy_row(std::size_t i, std::span<double> out) const {
  const std::vector<std::size_t> idx = k_->delinearize(i);
  k_->copy_row(idx, out);
}

ProductLeverageSampler::ProductLeverageSampler(const ImplicitKronecker& k,
                                               double d_eff_lower)
    : k_(&k) {
  const double d = static_cast<double>(k.cols());
  if (d_eff_lower < 0.0 || d_eff_lower > d) {
    throw std::invalid_argument("ProductLeverageSampler: d_eff_lower outside [0, d]");
  }
  aug_mass_per_row_ = std::min(1.0, d - d_eff_lower);
  // After the solver's normalization the data block carries mass d and the
  // augmented block d * m, so the branch probability is 1 / (1 + m).
  data_block_probability_ = 1.0 / (1.0 + aug_mass_per_row_);
}

std::pair<std::size_t, double> ProductLeverageSampler::draw(SplitMix64& rng) const {
  if (rng.next_double() < data_block_probability_) {
    auto [idx, prob] = k_->sample_row_index(rng);
    return {k_->linearize(idx), prob * data_block_probability_};
  }
  const std::size_t d = k_->cols();
  const std::size_t j = static_cast<std::size_t>(rng.next_below(d));
  const double prob = (1.0 - data_block_probability_) / static_cast<double>(d);
  return {k_->rows() + j, prob};
}

}  // namespace rtucker
