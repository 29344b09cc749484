#include <doctest.h>

#include <cmath>
#include <vector>

#include "rjmix/errors.hpp"
#include "rjmix/rng.hpp"

using namespace rjmix;

namespace {

struct Moments {
  double mean;
  double var;
};

template <typename Draw>
Moments sample_moments(int n, Draw draw) {
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  return {mean, sumsq / n - mean * mean};
}

}  // namespace

TEST_SUITE("rng") {

TEST_CASE("uniform stays in [0,1) and has the right first two moments") {
  RngStream rng(42);
  const int n = 200000;
  double lo = 1.0, hi = 0.0;
  auto m = sample_moments(n, [&] {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    return u;
  });
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(m.mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(m.var == doctest::Approx(1.0 / 12.0).epsilon(0.03));
}

TEST_CASE("normal moments") {
  RngStream rng(7);
  auto m = sample_moments(200000, [&] { return rng.normal(); });
  // 4 sigma bands around the Monte Carlo error
  CHECK(std::abs(m.mean) < 4.0 / std::sqrt(200000.0));
  CHECK(m.var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma moments, both shape branches") {
  RngStream rng(11);
  const int n = 200000;
  for (auto [shape, rate] : {std::pair{2.5, 1.5}, {0.2, 10.0}, {7.0, 0.5}}) {
    auto m = sample_moments(n, [&] { return rng.gamma(shape, rate); });
    const double true_mean = shape / rate;
    const double true_var = shape / (rate * rate);
    const double se_mean = std::sqrt(true_var / n);
    CHECK(std::abs(m.mean - true_mean) < 5.0 * se_mean);
    CHECK(m.var == doctest::Approx(true_var).epsilon(0.1));
  }
  CHECK_THROWS_AS(rng.gamma(0.0, 1.0), invalid_input);
  CHECK_THROWS_AS(rng.gamma(1.0, -1.0), invalid_input);
}

TEST_CASE("beta moments") {
  RngStream rng(13);
  const int n = 200000;
  for (auto [a, b] : {std::pair{2.0, 2.0}, {1.0, 5.0}, {0.5, 0.5}}) {
    auto m = sample_moments(n, [&] { return rng.beta(a, b); });
    const double true_mean = a / (a + b);
    const double true_var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    CHECK(std::abs(m.mean - true_mean) < 5.0 * std::sqrt(true_var / n));
    CHECK(m.var == doctest::Approx(true_var).epsilon(0.1));
  }
}

TEST_CASE("dirichlet draws sit on the simplex with mean alpha_i/sum") {
  RngStream rng(17);
  const std::vector<double> alpha = {1.0, 2.0, 5.0};
  const double total = 8.0;
  const int n = 100000;
  std::vector<double> mean(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto d = rng.dirichlet(alpha);
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
      s += d[j];
      mean[j] += d[j];
    }
    REQUIRE(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int j = 0; j < 3; ++j) {
    const double t = alpha[j] / total;
    const double var = t * (1.0 - t) / (total + 1.0);
    CHECK(std::abs(mean[j] / n - t) < 5.0 * std::sqrt(var / n));
  }
}

TEST_CASE("categorical matches the normalized probabilities") {
  RngStream rng(23);
  const std::vector<double> logits = {-1.0, 0.5, 2.0, -3.0};
  const auto p = probs_from_logits(logits);

  // Oracle: direct normalization without the max shift.
  double total = 0.0;
  for (double l : logits) total += std::exp(l);
  for (std::size_t j = 0; j < logits.size(); ++j)
    CHECK(p[j] == doctest::Approx(std::exp(logits[j]) / total).epsilon(1e-14));

  const int n = 200000;
  std::vector<long> counts(4, 0);
  for (int i = 0; i < n; ++i) {
    double lp = 0.0;
    const int j = rng.categorical_from_logits(logits, &lp);
    ++counts[j];
    CHECK(lp == doctest::Approx(std::log(p[j])).epsilon(1e-12));
  }
  for (std::size_t j = 0; j < 4; ++j) {
    const double se = std::sqrt(p[j] * (1.0 - p[j]) / n);
    CHECK(std::abs(static_cast<double>(counts[j]) / n - p[j]) < 5.0 * se);
  }
}

TEST_CASE("derived seeds are deterministic and distinct") {
  const auto a = derive_seed(1234, 0);
  CHECK(a == derive_seed(1234, 0));
  CHECK(a != derive_seed(1234, 1));
  CHECK(a != derive_seed(1235, 0));

  RngStream r1(a), r2(a);
  for (int i = 0; i < 100; ++i) REQUIRE(r1.uniform() == r2.uniform());
}

TEST_CASE("log_sum_exp handles extremes") {
  const std::vector<double> v = {-1000.0, -1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-14));
  CHECK(log_sum_exp(std::vector<double>{}) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("uniform_int covers its range") {
  RngStream rng(31);
  std::vector<long> counts(5, 0);
  for (int i = 0; i < 100000; ++i) ++counts[rng.uniform_int(2, 6) - 2];
  for (long c : counts) CHECK(std::abs(c / 100000.0 - 0.2) < 0.01);
}

}  // TEST_SUITE
