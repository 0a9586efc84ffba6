#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "glmmp/channels.hpp"
#include "glmmp/error.hpp"
#include "glmmp/oracle.hpp"

using glmmp::ChannelSpec;

TEST_CASE("awgn posterior by substitution") {
  const auto c = glmmp::channel_moments(ChannelSpec::awgn(1.0), 2.0, 0.0, 1.0);
  CHECK(c.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.variance == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("awgn equals the two-gaussian product and its l-stats") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0), logv(-3.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double s2 = std::pow(10.0, logv(rng)), vs = std::pow(10.0, logv(rng));
    const double y = u(rng), zs = u(rng);
    const auto c = glmmp::channel_moments(ChannelSpec::awgn(s2), y, zs, vs);
    const double var = 1.0 / (1.0 / s2 + 1.0 / vs);
    CHECK(c.variance == doctest::Approx(var).epsilon(1e-12));
    CHECK(c.mean == doctest::Approx(var * (y / s2 + zs / vs)).epsilon(1e-12));

    const auto l = glmmp::l_stats(ChannelSpec::awgn(s2), y, zs, vs);
    CHECK(l.l_prime == doctest::Approx((y - zs) / (s2 + vs)).epsilon(1e-12));
    CHECK(l.l_doubleprime == doctest::Approx(1.0 / (s2 + vs)).epsilon(1e-12));
  }
  CHECK(glmmp::l_stats(ChannelSpec::awgn(0.3), 1.25, 1.25, 0.7).l_prime == 0.0);
}

TEST_CASE("awgn posterior mean is increasing in y") {
  double prev = -1e300;
  for (double y = -5.0; y <= 5.0; y += 0.01) {
    const double m = glmmp::channel_moments(ChannelSpec::awgn(0.2), y, 0.3, 1.5).mean;
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("a wide clip behaves like awgn") {
  const auto c = glmmp::channel_moments(ChannelSpec::clipped(1.0, 1e3), 0.5, 0.0, 1.0);
  const auto a = glmmp::channel_moments(ChannelSpec::awgn(1.0), 0.5, 0.0, 1.0);
  CHECK(std::abs(c.mean - a.mean) < 1e-10);
  CHECK(std::abs(c.variance - a.variance) < 1e-10);
}

TEST_CASE("posterior mass in a sliver inside the threshold") {
  // y is 78 noise sd above theta; the interior branch is a spike of width
  // ~1e-4 against the boundary and carries 1.2e-4 of the mass. Reference
  // from the exact two-branch decomposition in 60-digit arithmetic.
  const auto spec = ChannelSpec::clipped(0.000173882, 1.55882);
  const auto c = glmmp::channel_moments(spec, 2.59018, -1.95941, 6.37007);
  CHECK(c.mean == doctest::Approx(2.70708572638178).epsilon(1e-11));
  CHECK(c.variance == doctest::Approx(1.01090620320627).epsilon(1e-11));
  const auto q = glmmp::quad_moments(glmmp::FactorFn::likelihood(spec, 2.59018), -1.95941, 6.37007);
  CHECK(std::abs(q.mean - c.mean) < 1e-7);
  CHECK(std::abs(q.variance - c.variance) < 1e-7);
}

TEST_CASE("clipped reference value") {
  // Independent evaluation with 40-digit arithmetic.
  const double mean = 1.2434969279580018873;
  const double var = 0.086017033073502296958;
  const auto spec = ChannelSpec::clipped(0.01, 1.0);
  const auto c = glmmp::channel_moments(spec, 1.0, 0.8, 0.25);
  CHECK(c.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(c.variance == doctest::Approx(var).epsilon(1e-12));

  const auto q = glmmp::quad_moments(glmmp::FactorFn::likelihood(spec, 1.0), 0.8, 0.25);
  CHECK(std::abs(q.mean - mean) < 1e-7);
  CHECK(std::abs(q.variance - var) < 1e-7);
}

TEST_CASE("clip") {
  CHECK(glmmp::clip(0.3, 1.0) == 0.3);
  CHECK(glmmp::clip(-5.0, 1.0) == -1.0);
  CHECK(glmmp::clip(1.0, 1.0) == 1.0);
  CHECK(glmmp::clip(-1.0, 1.0) == -1.0);
  CHECK(glmmp::clip(7.0, 1.0) == 1.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(glmmp::channel_moments(ChannelSpec::awgn(1.0), 0.0, 0.0, 0.0), glmmp::DomainError);
  CHECK_THROWS_AS(glmmp::channel_moments(ChannelSpec::clipped(1.0, 1.0), 0.0, 0.0, -1.0), glmmp::DomainError);
  CHECK_THROWS_AS(ChannelSpec::clipped(1.0, -1.0).validate(), glmmp::DomainError);
  CHECK_THROWS_AS(ChannelSpec::awgn(0.0).validate(), glmmp::DomainError);
}

TEST_CASE("clipped closed form and l-stats agree with quadrature on random draws") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const double theta = 0.2 + 2.8 * u(rng);
    const double s2 = std::pow(10.0, -4.0 + 4.0 * u(rng));
    const double y = -2.0 * theta + 4.0 * theta * u(rng);
    const double zs = -3.0 + 6.0 * u(rng);
    const double vs = std::pow(10.0, -3.0 + 4.0 * u(rng));
    const auto spec = ChannelSpec::clipped(s2, theta);
    const auto c = glmmp::channel_moments(spec, y, zs, vs);
    const auto q = glmmp::quad_moments(glmmp::FactorFn::likelihood(spec, y), zs, vs);
    const auto l = glmmp::l_stats(spec, y, zs, vs);
    const bool ok = std::abs(c.mean - q.mean) <= 1e-7 && std::abs(c.variance - q.variance) <= 1e-7 &&
                    std::abs(l.l_prime - (q.mean - zs) / vs) <= 1e-7 * std::max(1.0, 1.0 / vs) &&
                    std::abs(l.l_doubleprime - (1.0 - q.variance / vs) / vs) <= 1e-7 * std::max(1.0, 1.0 / (vs * vs));
    if (!ok) {
      ++bad;
      MESSAGE("theta=" << theta << " s2=" << s2 << " y=" << y << " zs=" << zs << " vs=" << vs << " closed=" << c.mean
                       << "," << c.variance << " quad=" << q.mean << "," << q.variance);
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("variance contraction") {
  // Pointwise for awgn.
  for (double vs : {1e-3, 1.0, 1e3}) {
    CHECK(glmmp::channel_moments(ChannelSpec::awgn(0.1), 0.4, -1.0, vs).variance <= vs);
  }
  // The clipped likelihood is flat beyond the threshold, so a posterior can
  // split between a saturated branch and the interior and be wider than the
  // pseudo-prior. On average over the generative model it still contracts.
  CHECK(glmmp::channel_moments(ChannelSpec::clipped(0.00805318, 0.648942), 0.147918, -2.82713, 0.106881).variance >
        0.106881);

  const auto spec = ChannelSpec::clipped(0.01, 1.0);
  for (double vs : {0.01, 0.1, 1.0}) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    double avg = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double z = g(rng);
      const double zs = z + std::sqrt(vs) * g(rng); // z | zs is then N(zs', vs') with vs' <= vs
      const double y = glmmp::clip(z, 1.0) + 0.1 * g(rng);
      avg += glmmp::channel_moments(spec, y, zs / (1.0 + vs), vs / (1.0 + vs)).variance;
    }
    CHECK(avg / n <= vs / (1.0 + vs));
  }
}

TEST_CASE("sampling") {
  std::vector<double> z{-3.0, -0.5, 0.0, 0.9, 4.0};
  const auto y0 = glmmp::channel_sample(ChannelSpec::awgn(1e-30), z, 1);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(y0[i] == doctest::Approx(z[i]).epsilon(1e-12));

  std::vector<double> big(20000);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 3.0);
  for (auto& v : big) v = g(rng);
  const auto spec = ChannelSpec::clipped(0.01, 1.0);
  const auto y = glmmp::channel_sample(spec, big, 17);
  const auto y_noiseless = glmmp::channel_sample(ChannelSpec::clipped(1e-300, 1.0), big, 17);
  double noise_power = 0.0;
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK(std::abs(y_noiseless[i]) <= 1.0);
    noise_power += (y[i] - glmmp::clip(big[i], 1.0)) * (y[i] - glmmp::clip(big[i], 1.0));
  }
  CHECK(noise_power / big.size() == doctest::Approx(0.01).epsilon(0.05));
  CHECK(glmmp::channel_sample(spec, big, 17) == y);

  CHECK(glmmp::noise_var_from_snr_db(20.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(glmmp::noise_var_from_snr_db(0.0) == 1.0);
}
