#include "rjmix/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rjmix/errors.hpp"

namespace rjmix {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64: advance by (index+1) increments, one mixing round.
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngStream::uniform() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  double u = uniform();
  return u > 0.0 ? u : 0x1.0p-53;
}

int RngStream::uniform_int(int lo, int hi) {
  int span = hi - lo + 1;
  int v = lo + static_cast<int>(uniform() * span);
  return v > hi ? hi : v;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = uniform_pos();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw invalid_input("gamma: shape and rate must be positive");
  // Marsaglia-Tsang (2000). Shapes below 1 are boosted and corrected
  // with U^(1/shape).
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(uniform_pos(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return boost * d * v / rate;
  }
}

double RngStream::beta(double a, double b) {
  double x = gamma(a, 1.0);
  double y = gamma(b, 1.0);
  return x / (x + y);
}

std::vector<double> RngStream::dirichlet(std::span<const double> alpha) {
  std::vector<double> v(alpha.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) total += v[i] = gamma(alpha[i], 1.0);
  for (double& x : v) x /= total;
  return v;
}

std::vector<double> RngStream::dirichlet_symmetric(double alpha, int k) {
  std::vector<double> a(static_cast<std::size_t>(k), alpha);
  return dirichlet(a);
}

int RngStream::categorical_from_logits(std::span<const double> logits,
                                       double* log_prob_out) {
  if (logits.empty()) throw invalid_input("categorical: no categories");
  double m = -std::numeric_limits<double>::infinity();
  for (double l : logits)
    if (l > m) m = l;
  double total = 0.0;
  std::vector<double> p(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) total += p[j] = std::exp(logits[j] - m);
  const double target = uniform() * total;
  double cum = 0.0;
  std::size_t idx = logits.size() - 1;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    cum += p[j];
    if (target < cum) {
      idx = j;
      break;
    }
  }
  if (log_prob_out) *log_prob_out = (logits[idx] - m) - std::log(total);
  return static_cast<int>(idx);
}

std::vector<double> probs_from_logits(std::span<const double> logits) {
  double m = -std::numeric_limits<double>::infinity();
  for (double l : logits)
    if (l > m) m = l;
  std::vector<double> p(logits.size());
  double total = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) total += p[j] = std::exp(logits[j] - m);
  for (double& x : p) x /= total;
  return p;
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v)
    if (x > m) m = x;
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace rjmix
