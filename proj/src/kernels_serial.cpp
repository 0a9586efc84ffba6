#include <algorithm>
#include <limits>
#include <random>

#include "glmmp/kernels.hpp"

namespace glmmp::kernels::serial {

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  for (std::size_t m = 0; m < a.rows(); ++m) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.cols(); ++n) s += a(m, n) * x[n];
    out[m] = s;
  }
}

void matvec_transposed(const Matrix& a, std::span<const double> r, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t m = 0; m < a.rows(); ++m) {
    for (std::size_t n = 0; n < a.cols(); ++n) out[n] += a(m, n) * r[m];
  }
}

Matrix squared(const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t m = 0; m < a.rows(); ++m) {
    for (std::size_t n = 0; n < a.cols(); ++n) out(m, n) = a(m, n) * a(m, n);
  }
  return out;
}

void rowwise_dot(const Matrix& a, const Matrix& panel, std::span<double> out) {
  for (std::size_t m = 0; m < a.rows(); ++m) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.cols(); ++n) s += a(m, n) * panel(m, n);
    out[m] = s;
  }
}

void edge_sum_to_variable(const Matrix& a, const Matrix& a_sq, const Matrix& x_v, std::span<const double> c,
                          std::span<const double> r, Matrix& prec_s, Matrix& wmean_s, std::span<double> col_prec,
                          std::span<double> col_wmean) {
  std::fill(col_prec.begin(), col_prec.end(), 0.0);
  std::fill(col_wmean.begin(), col_wmean.end(), 0.0);
  for (std::size_t m = 0; m < a.rows(); ++m) {
    for (std::size_t n = 0; n < a.cols(); ++n) {
      prec_s(m, n) = a_sq(m, n) * c[m];
      wmean_s(m, n) = a(m, n) * (c[m] * r[m]) + prec_s(m, n) * x_v(m, n);
      col_prec[n] += prec_s(m, n);
      col_wmean[n] += wmean_s(m, n);
    }
  }
}

void edge_variable_to_sum(const Matrix& wmean_s, std::span<const double> post_mean, std::span<const double> post_var,
                          double damping, Matrix& x_v, Matrix& v_v) {
  for (std::size_t m = 0; m < wmean_s.rows(); ++m) {
    for (std::size_t n = 0; n < wmean_s.cols(); ++n) {
      const double fresh = post_mean[n] - post_var[n] * wmean_s(m, n);
      x_v(m, n) = damping * fresh + (1.0 - damping) * x_v(m, n);
      v_v(m, n) = post_var[n];
    }
  }
}

double panel_max_excess(const Matrix& panel, std::span<const double> node) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < panel.rows(); ++m) {
    for (std::size_t n = 0; n < panel.cols(); ++n) worst = std::max(worst, panel(m, n) - node[n]);
  }
  return worst;
}

void fill_gaussian(Matrix& a, double stddev, std::uint64_t seed) {
  for (std::size_t lo = 0, b = 0; lo < a.rows(); lo += kRowBlock, ++b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), 0xa11au};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, stddev);
    for (std::size_t m = lo; m < std::min(lo + kRowBlock, a.rows()); ++m) {
      for (std::size_t n = 0; n < a.cols(); ++n) a(m, n) = gauss(rng);
    }
  }
}

} // namespace glmmp::kernels::serial
