#pragma once

// Seeded model generators. The stream is std::mt19937_64 (bit-exact by the
// standard) with Box-Muller on 53-bit uniforms, so models are reproducible across
// compilers and platforms.

#include "liouv/model.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace liouv {

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on (0, 1].
  double uniform() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// K = (G - G^T)/2 from row-major standard normals G; then each l_mu has entries
/// (a + ib)/sqrt2 with a, b standard normal, drawn in order.
inline QuadraticLindbladModel random_model(int n, std::uint64_t seed, int lindblad_count = -1) {
  if (lindblad_count < 0) lindblad_count = n;
  NormalStream rng(seed);
  QuadraticLindbladModel m;
  m.n = n;
  const int d = 2 * n;
  RMatrix G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = rng.normal();
  m.K = 0.5 * (G - G.transpose());
  const double s = 1.0 / std::sqrt(2.0);
  for (int mu = 0; mu < lindblad_count; ++mu) {
    CVector l(d);
    for (int j = 0; j < d; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      l(j) = Complex(s * re, s * im);
    }
    m.lindblad_vectors.push_back(l);
  }
  return m;
}

/// Random model whose first two Majoranas form a closed block with coupling h
/// (rapidities +-2ih, or a double zero when h = 0); the bath lives on the rest.
inline QuadraticLindbladModel random_model_with_decoupled_block(int n, std::uint64_t seed, double h) {
  auto m = random_model(n, seed);
  const int d = 2 * n;
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < d; ++j) {
      m.K(i, j) = 0.0;
      m.K(j, i) = 0.0;
    }
  m.K(0, 1) = h;
  m.K(1, 0) = -h;
  for (auto& l : m.lindblad_vectors) {
    l(0) = 0.0;
    l(1) = 0.0;
  }
  return m;
}

/// Random model with the defective single-qubit block (h = Gamma cos theta) on the
/// first two Majoranas, decoupled from the rest.
inline QuadraticLindbladModel random_model_with_defective_block(int n, std::uint64_t seed, double gamma = 1.0,
                                                                double theta = std::numbers::pi / 3.0) {
  auto m = random_model_with_decoupled_block(n, seed, gamma * std::cos(theta));
  CVector l = CVector::Zero(2 * n);
  l(0) = std::sqrt(gamma);
  l(1) = std::sqrt(gamma) * std::polar(1.0, theta);
  m.lindblad_vectors.push_back(l);
  return m;
}

}  // namespace liouv
