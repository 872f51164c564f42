#pragma once

#include "leosb/numerics.hpp"

namespace leosb {

/// ||ref - est||^2 / ||ref||^2 over all entries.
double nmse(const ComplexMatrix& reference, const ComplexMatrix& estimate);

/// Fraction of entries where the detected point differs from the transmitted one.
double ser(const ComplexMatrix& truth, const ComplexMatrix& detected);

/// 10 log10 of per-entry signal energy over the per-entry noise variance.
double empirical_snr(const ComplexMatrix& noiseless, double sigma2);

}  // namespace leosb
