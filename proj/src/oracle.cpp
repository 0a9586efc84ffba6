#include "glmmp/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "glmmp/error.hpp"
#include "glmmp/normal.hpp"
#include "glmmp/problem.hpp"

namespace glmmp {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod(F&& g, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = g(c);
  double kronrod = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    const double s = g(c - dx) + g(c + dx);
    kronrod += kWk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {lo, hi, kronrod * h, std::abs((kronrod - gauss) * h)};
}

// Globally adaptive integration: bisect the worst panel until the summed
// error estimate is below tol relative to the integral of |g|.
template <class F>
double integrate(F&& g, const std::vector<double>& edges, double tol) {
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    Panel p = gauss_kronrod(g, edges[i], edges[i + 1]);
    total += p.value;
    error += p.error;
    heap.push(p);
  }
  auto abs_g = [&](double x) { return std::abs(g(x)); };
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] > edges[i]) scale += gauss_kronrod(abs_g, edges[i], edges[i + 1]).value;
  }

  for (int iter = 0; iter < 200000 && !heap.empty() && error > tol * scale; ++iter) {
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break; // panel no longer divisible
    const Panel left = gauss_kronrod(g, worst.lo, mid);
    const Panel right = gauss_kronrod(g, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Recompute the sum from the final panels to shed accumulated rounding.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

} // namespace

FactorFn FactorFn::constant() {
  FactorFn f;
  f.log_density = [](double) { return 0.0; };
  return f;
}

FactorFn FactorFn::gaussian(double mean, double var) {
  FactorFn f;
  f.log_density = [mean, var](double x) { return normal::log_pdf(x, mean, var); };
  f.breakpoints = {mean - 8.0 * std::sqrt(var), mean, mean + 8.0 * std::sqrt(var)};
  return f;
}

FactorFn FactorFn::prior(const PriorSpec& spec) {
  spec.validate();
  FactorFn f;
  switch (spec.kind) {
  case PriorKind::gaussian:
    return gaussian(spec.mean0, spec.var0);
  case PriorKind::point_mass:
    f.atoms.push_back({spec.mean0, 1.0});
    return f;
  case PriorKind::bernoulli_gaussian: {
    const double s = spec.var0 / spec.lambda;
    const double lambda = spec.lambda;
    const double mu = spec.mean0;
    f.log_density = [lambda, mu, s](double x) { return std::log(lambda) + normal::log_pdf(x, mu, s); };
    if (lambda < 1.0) f.atoms.push_back({0.0, 1.0 - lambda});
    f.breakpoints = {mu - 8.0 * std::sqrt(s), mu, mu + 8.0 * std::sqrt(s)};
    return f;
  }
  }
  return f;
}

FactorFn FactorFn::likelihood(const ChannelSpec& spec, double y) {
  spec.validate();
  FactorFn f;
  const double nv = spec.noise_var;
  const double sd = std::sqrt(nv);
  if (spec.kind == ChannelKind::awgn) {
    f.log_density = [y, nv](double z) { return normal::log_pdf(y, z, nv); };
    f.breakpoints = {y - 8.0 * sd, y, y + 8.0 * sd};
    return f;
  }
  const double theta = spec.clip_threshold;
  f.log_density = [y, nv, theta](double z) { return normal::log_pdf(y, clip(z, theta), nv); };
  f.breakpoints = {-theta, theta, y - 8.0 * sd, y, y + 8.0 * sd};
  // When y lies beyond a threshold the interior branch decays into the
  // boundary over a width of about noise_var / |y -+ theta|, which can be far
  // narrower than any uniform panel. Geometric edges on both sides of each
  // threshold let the adaptive rule find it.
  for (double edge : {-theta, theta}) {
    for (double d = 4.0 * sd; d > 1e-9 * sd; d *= 0.25) {
      f.breakpoints.push_back(edge - d);
      f.breakpoints.push_back(edge + d);
    }
  }
  return f;
}

QuadMoments quad_moments(const FactorFn& f, double gauss_mean, double gauss_var, double tol) {
  if (!(gauss_var > 0.0) || !std::isfinite(gauss_var) || !std::isfinite(gauss_mean)) {
    throw DomainError("quad_moments: gaussian variance must be positive and finite");
  }
  if (!(tol > 0.0 && tol <= 1e-4)) throw DomainError("quad_moments: tol must lie in (0, 1e-4]");

  // The Gaussian's +/- 12 sd window, widened to the factor's breakpoints: a
  // sharp factor far out in the Gaussian's tail can still carry the mass.
  const double sd = std::sqrt(gauss_var);
  double lo = gauss_mean - 12.0 * sd;
  double hi = gauss_mean + 12.0 * sd;
  if (f.log_density) {
    for (double b : f.breakpoints) {
      lo = std::min(lo, b);
      hi = std::max(hi, b);
    }
  }
  lo = std::max(lo, f.support_lo);
  hi = std::min(hi, f.support_hi);

  auto log_integrand = [&](double x) { return f.log_density(x) + normal::log_pdf(x, gauss_mean, gauss_var); };

  // Common log-scale so that tiny integrands neither underflow nor dominate.
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& atom : f.atoms) {
    shift = std::max(shift, std::log(atom.weight) + normal::log_pdf(atom.location, gauss_mean, gauss_var));
  }
  if (f.log_density && hi > lo) {
    for (int i = 0; i <= 2048; ++i) shift = std::max(shift, log_integrand(lo + (hi - lo) * i / 2048.0));
    for (double b : f.breakpoints) {
      if (b >= lo && b <= hi) shift = std::max(shift, log_integrand(b));
    }
  }
  if (!std::isfinite(shift)) throw DegeneratePosterior("quad_moments: factor vanishes on the window");

  // Push each end out until the integrand is negligible there. A posterior
  // pinned against a flat factor in the Gaussian's tail decays on a scale set
  // by the Gaussian's slope there, not by either width.
  if (f.log_density) {
    constexpr double kNegligible = 60.0;
    for (double step = sd; lo > f.support_lo && log_integrand(lo) > shift - kNegligible; step *= 2.0) {
      lo = std::max(lo - step, f.support_lo);
    }
    for (double step = sd; hi < f.support_hi && log_integrand(hi) > shift - kNegligible; step *= 2.0) {
      hi = std::min(hi + step, f.support_hi);
    }
  }

  std::vector<double> edges{lo, hi};
  if (f.log_density) {
    // 32 uniform panels plus the factor's own breakpoints.
    for (int i = 1; i < 32; ++i) edges.push_back(lo + (hi - lo) * i / 32.0);
    for (double b : f.breakpoints) {
      if (b > lo && b < hi) edges.push_back(b);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  auto density = [&](double x) { return std::exp(log_integrand(x) - shift); };
  const bool continuous = f.log_density && hi > lo;

  double z0 = 0.0;
  double z1 = 0.0;
  for (const auto& atom : f.atoms) {
    const double w = std::exp(std::log(atom.weight) + normal::log_pdf(atom.location, gauss_mean, gauss_var) - shift);
    z0 += w;
    z1 += w * atom.location;
  }
  if (continuous) {
    z0 += integrate(density, edges, tol);
    z1 += integrate([&](double x) { return x * density(x); }, edges, tol);
  }
  if (!(z0 > 0.0)) throw DegeneratePosterior("quad_moments: zero normalizing constant");
  const double mean = z1 / z0;

  double z2 = 0.0;
  for (const auto& atom : f.atoms) {
    const double w = std::exp(std::log(atom.weight) + normal::log_pdf(atom.location, gauss_mean, gauss_var) - shift);
    z2 += w * (atom.location - mean) * (atom.location - mean);
  }
  if (continuous) {
    z2 += integrate([&](double x) { return (x - mean) * (x - mean) * density(x); }, edges, tol);
  }
  return {mean, z2 / z0};
}

std::vector<double> epmpa_first_iteration_reference(const ProblemInstance& problem) {
  const Matrix& a = problem.a();
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  const PriorMoments start = prior_moments(problem.prior());
  const FactorFn prior_factor = FactorFn::prior(problem.prior());

  // Step I with every edge at the prior moments.
  std::vector<double> z_s(rows, 0.0), v_s(rows, 0.0);
  for (std::size_t m = 0; m < rows; ++m) {
    for (std::size_t n = 0; n < cols; ++n) {
      z_s[m] += a(m, n) * start.mean;
      v_s[m] += a(m, n) * a(m, n) * start.variance;
    }
  }

  // Step II by quadrature, then the edgewise sums of steps III and IV.
  std::vector<double> prec(cols, 0.0), weighted(cols, 0.0);
  for (std::size_t m = 0; m < rows; ++m) {
    const FactorFn lik = FactorFn::likelihood(problem.channel(), problem.y()[m]);
    const QuadMoments post = quad_moments(lik, z_s[m], v_s[m]);
    const double v_tilde = 1.0 / (1.0 / post.variance - 1.0 / v_s[m]);
    const double z_tilde = v_tilde * (post.mean / post.variance - z_s[m] / v_s[m]);
    for (std::size_t n = 0; n < cols; ++n) {
      const double amn = a(m, n);
      const double v_edge = (v_tilde + v_s[m]) / (amn * amn);
      const double x_edge = (z_tilde - z_s[m] + amn * start.mean) / amn;
      prec[n] += 1.0 / v_edge;
      weighted[n] += x_edge / v_edge;
    }
  }

  // Step V by quadrature on the prior.
  std::vector<double> x_hat(cols);
  for (std::size_t n = 0; n < cols; ++n) {
    const double v_node = 1.0 / prec[n];
    x_hat[n] = quad_moments(prior_factor, v_node * weighted[n], v_node).mean;
  }
  return x_hat;
}

} // namespace glmmp
