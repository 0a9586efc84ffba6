#include "glmmp/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <random>
#include <vector>

#include "glmmp/omp.hpp"

namespace glmmp::kernels {

namespace {

std::size_t block_count(std::size_t rows) { return (rows + kRowBlock - 1) / kRowBlock; }

// Sums block partials (blocks x cols, row-major) column by column in block order.
void reduce_blocks(const std::vector<double>& partial, std::size_t blocks, std::span<double> out) {
  const auto cols = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < cols; ++n) {
    double s = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) s += partial[b * out.size() + static_cast<std::size_t>(n)];
    out[static_cast<std::size_t>(n)] = s;
  }
}

} // namespace

void matvec(const Matrix& a, std::span<const double> x, std::span<double> out) {
  assert(x.size() == a.cols() && out.size() == a.rows());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < rows; ++m) {
    const auto row = a.row(static_cast<std::size_t>(m));
    double s = 0.0;
    for (std::size_t n = 0; n < row.size(); ++n) s += row[n] * x[n];
    out[static_cast<std::size_t>(m)] = s;
  }
}

void matvec_transposed(const Matrix& a, std::span<const double> r, std::span<double> out) {
  assert(r.size() == a.rows() && out.size() == a.cols());
  const std::size_t cols = a.cols();
  const std::size_t blocks = block_count(a.rows());
  std::vector<double> partial(blocks * cols, 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    double* acc = partial.data() + static_cast<std::size_t>(b) * cols;
    const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
    const std::size_t hi = std::min(lo + kRowBlock, a.rows());
    for (std::size_t m = lo; m < hi; ++m) {
      const auto row = a.row(m);
      const double rm = r[m];
      for (std::size_t n = 0; n < cols; ++n) acc[n] += row[n] * rm;
    }
  }
  reduce_blocks(partial, blocks, out);
}

Matrix squared(const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  const auto src = a.data();
  auto dst = out.data();
  const auto size = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < size; ++i) dst[i] = src[i] * src[i];
  return out;
}

void rowwise_dot(const Matrix& a, const Matrix& panel, std::span<double> out) {
  assert(a.rows() == panel.rows() && a.cols() == panel.cols() && out.size() == a.rows());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < rows; ++m) {
    const auto ar = a.row(static_cast<std::size_t>(m));
    const auto pr = panel.row(static_cast<std::size_t>(m));
    double s = 0.0;
    for (std::size_t n = 0; n < ar.size(); ++n) s += ar[n] * pr[n];
    out[static_cast<std::size_t>(m)] = s;
  }
}

void edge_sum_to_variable(const Matrix& a, const Matrix& a_sq, const Matrix& x_v, std::span<const double> c,
                          std::span<const double> r, Matrix& prec_s, Matrix& wmean_s, std::span<double> col_prec,
                          std::span<double> col_wmean) {
  const std::size_t cols = a.cols();
  const std::size_t blocks = block_count(a.rows());
  std::vector<double> partial_prec(blocks * cols, 0.0);
  std::vector<double> partial_wmean(blocks * cols, 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    double* acc_p = partial_prec.data() + static_cast<std::size_t>(b) * cols;
    double* acc_w = partial_wmean.data() + static_cast<std::size_t>(b) * cols;
    const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
    const std::size_t hi = std::min(lo + kRowBlock, a.rows());
    for (std::size_t m = lo; m < hi; ++m) {
      const auto ar = a.row(m);
      const auto asr = a_sq.row(m);
      const auto xr = x_v.row(m);
      auto pr = prec_s.row(m);
      auto wr = wmean_s.row(m);
      const double cm = c[m];
      const double crm = c[m] * r[m];
      for (std::size_t n = 0; n < cols; ++n) {
        const double p = asr[n] * cm;
        const double w = ar[n] * crm + p * xr[n];
        pr[n] = p;
        wr[n] = w;
        acc_p[n] += p;
        acc_w[n] += w;
      }
    }
  }
  reduce_blocks(partial_prec, blocks, col_prec);
  reduce_blocks(partial_wmean, blocks, col_wmean);
}

void edge_variable_to_sum(const Matrix& wmean_s, std::span<const double> post_mean, std::span<const double> post_var,
                          double damping, Matrix& x_v, Matrix& v_v) {
  const auto rows = static_cast<std::ptrdiff_t>(wmean_s.rows());
  const std::size_t cols = wmean_s.cols();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < rows; ++m) {
    const auto wr = wmean_s.row(static_cast<std::size_t>(m));
    auto xr = x_v.row(static_cast<std::size_t>(m));
    auto vr = v_v.row(static_cast<std::size_t>(m));
    for (std::size_t n = 0; n < cols; ++n) {
      const double fresh = post_mean[n] - post_var[n] * wr[n];
      xr[n] = damping == 1.0 ? fresh : damping * fresh + (1.0 - damping) * xr[n];
      vr[n] = post_var[n];
    }
  }
}

double panel_max_excess(const Matrix& panel, std::span<const double> node) {
  const auto rows = static_cast<std::ptrdiff_t>(panel.rows());
  double worst = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t m = 0; m < rows; ++m) {
    const auto pr = panel.row(static_cast<std::size_t>(m));
    for (std::size_t n = 0; n < pr.size(); ++n) worst = std::max(worst, pr[n] - node[n]);
  }
  return worst;
}

void fill_gaussian(Matrix& a, double stddev, std::uint64_t seed) {
  const std::size_t blocks = block_count(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), 0xa11au};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, stddev);
    const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
    const std::size_t hi = std::min(lo + kRowBlock, a.rows());
    for (std::size_t m = lo; m < hi; ++m) {
      for (double& v : a.row(m)) v = gauss(rng);
    }
  }
}

} // namespace glmmp::kernels
