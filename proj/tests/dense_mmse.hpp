#pragma once

// Dense evaluation of the conditional-Gaussian estimator with explicit
// inverses, used to cross-check the structured implementation.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "sra/snr_model.hpp"

namespace sra::test {

struct DenseMmse {
  Eigen::MatrixXcd gain;  // R_hy R_yy^{-1}
  Eigen::MatrixXcd cov;   // posterior covariance of h
};

inline DenseMmse dense_mmse(const ChannelConfig& c) {
  const int n = c.n_subchannels;
  Eigen::MatrixXcd f(n, c.tap_count);
  for (int r = 0; r < n; ++r) {
    for (int l = 0; l < c.tap_count; ++l) f(r, l) = std::exp(std::complex<double>(0.0, -2.0 * M_PI * r * l / n));
  }
  const double var = c.tap_var();
  const double p = std::pow(10.0, c.pilot_snr_db / 10.0);
  const Eigen::MatrixXcd ffh = f * f.adjoint();
  const Eigen::MatrixXcd r_hy = std::sqrt(p) * var * ffh;
  const Eigen::MatrixXcd r_yy = p * var * ffh + Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd inv = r_yy.fullPivLu().inverse();
  return {r_hy * inv, var * ffh - r_hy * inv * r_hy.adjoint()};
}

}  // namespace sra::test
