#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace kelly {

// Deterministic sampling built on raw mt19937_64 output only, so the same
// seed gives identical streams on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform on [0, 1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

  // flat Dirichlet: normalized Exp(1) draws via inverse transform
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
      x = -std::log1p(-uniform01());
      sum += x;
    }
    if (sum <= 0.0) {
      for (double& x : v) x = 1.0 / static_cast<double>(n);
      return v;
    }
    for (double& x : v) x /= sum;
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace kelly
