#pragma once

// Data-parallel building blocks for the solvers. The top-level namespace holds
// the OpenMP versions used in production; kernels::serial holds plain loops
// kept as the reference the parallel versions are tested and benchmarked
// against.
//
// Column reductions are accumulated over fixed blocks of kRowBlock rows and the
// block partials summed in order, so results do not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <span>

#include "glmmp/matrix.hpp"

namespace glmmp::kernels {

inline constexpr std::size_t kRowBlock = 128;

/// out = A x
void matvec(const Matrix& a, std::span<const double> x, std::span<double> out);
/// out = A^T r
void matvec_transposed(const Matrix& a, std::span<const double> r, std::span<double> out);
/// Elementwise square.
Matrix squared(const Matrix& a);
/// out_m = sum_n A_mn P_mn for an M x N panel P.
void rowwise_dot(const Matrix& a, const Matrix& panel, std::span<double> out);

/// Sum-node to variable-node edge update. For every edge (m, n), in
/// information form,
///   prec_s(m,n)   = A_mn^2 c_m
///   wmean_s(m,n)  = A_mn c_m r_m + A_mn^2 c_m x_v(m,n)
/// with c_m = 1 / (v~_m + v^s_m) and r_m = z~_m - z^s_m; then the node sums
/// col_prec_n = sum_m prec_s(m,n), col_wmean_n = sum_m wmean_s(m,n).
void edge_sum_to_variable(const Matrix& a, const Matrix& a_sq, const Matrix& x_v, std::span<const double> c,
                          std::span<const double> r, Matrix& prec_s, Matrix& wmean_s, std::span<double> col_prec,
                          std::span<double> col_wmean);

/// Variable-node to sum-node edge update:
///   x_v(m,n) <- damping * (post_mean_n - post_var_n * wmean_s(m,n)) + (1 - damping) * x_v(m,n)
///   v_v(m,n) <- post_var_n
void edge_variable_to_sum(const Matrix& wmean_s, std::span<const double> post_mean, std::span<const double> post_var,
                          double damping, Matrix& x_v, Matrix& v_v);

/// max over (m, n) of panel(m,n) - node_n.
double panel_max_excess(const Matrix& panel, std::span<const double> node);

/// Fills A with i.i.d. N(0, stddev^2). Each row block draws from its own
/// stream seeded by (seed, block), so the result is thread-count independent.
void fill_gaussian(Matrix& a, double stddev, std::uint64_t seed);

namespace serial {
void matvec(const Matrix& a, std::span<const double> x, std::span<double> out);
void matvec_transposed(const Matrix& a, std::span<const double> r, std::span<double> out);
Matrix squared(const Matrix& a);
void rowwise_dot(const Matrix& a, const Matrix& panel, std::span<double> out);
void edge_sum_to_variable(const Matrix& a, const Matrix& a_sq, const Matrix& x_v, std::span<const double> c,
                          std::span<const double> r, Matrix& prec_s, Matrix& wmean_s, std::span<double> col_prec,
                          std::span<double> col_wmean);
void edge_variable_to_sum(const Matrix& wmean_s, std::span<const double> post_mean, std::span<const double> post_var,
                          double damping, Matrix& x_v, Matrix& v_v);
double panel_max_excess(const Matrix& panel, std::span<const double> node);
void fill_gaussian(Matrix& a, double stddev, std::uint64_t seed);
} // namespace serial

} // namespace glmmp::kernels
