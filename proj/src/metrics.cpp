#include "leosb/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace leosb {

double nmse(const ComplexMatrix& reference, const ComplexMatrix& estimate) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols()) {
    throw DimensionError("nmse: shape mismatch " + shape_of(reference) + " vs " + shape_of(estimate));
  }
  const double denom = reference.frobenius_norm2();
  if (!(denom > 0.0)) throw std::invalid_argument("nmse: reference is all zero");
  double num = 0.0;
  const auto r = reference.values();
  const auto e = estimate.values();
  for (std::size_t i = 0; i < r.size(); ++i) num += std::norm(r[i] - e[i]);
  return num / denom;
}

double ser(const ComplexMatrix& truth, const ComplexMatrix& detected) {
  if (truth.rows() != detected.rows() || truth.cols() != detected.cols()) {
    throw DimensionError("ser: shape mismatch " + shape_of(truth) + " vs " + shape_of(detected));
  }
  if (truth.empty()) throw DimensionError("ser: empty input");
  std::size_t errors = 0;
  const auto t = truth.values();
  const auto d = detected.values();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] != d[i]) ++errors;
  return static_cast<double>(errors) / static_cast<double>(t.size());
}

double empirical_snr(const ComplexMatrix& noiseless, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("empirical_snr: sigma2 must be positive");
  if (noiseless.empty()) throw DimensionError("empirical_snr: empty signal");
  const double per_entry = noiseless.frobenius_norm2() / static_cast<double>(noiseless.size());
  return 10.0 * std::log10(per_entry / sigma2);
}

}  // namespace leosb
