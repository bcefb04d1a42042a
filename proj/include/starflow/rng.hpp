#pragma once

#include <cstdint>
#include <random>

#include "starflow/algebra.hpp"

namespace starflow {

// Deterministic random source. Distribution helpers are hand-rolled on top of
// the raw mt19937_64 stream so generated batteries are byte-stable across
// standard libraries.
class Rng {
 public:
  static constexpr const char* kGeneratorName = "mt19937_64";

  explicit Rng(uint64_t seed) : gen_(seed), seed_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t next() { return gen_(); }

  // Uniform in [lo, hi], inclusive.
  long uniform_int(long lo, long hi) {
    if (hi < lo) throw std::invalid_argument("empty integer range");
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
  }

  // Uniform in [lo, hi) with 53-bit resolution.
  double uniform_real(double lo, double hi) {
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  // Small nonzero rational p/q (or complex combination) for exact batteries.
  Scalar small_scalar(Backend b, bool allow_complex = true) {
    long num = uniform_int(-6, 6);
    if (num == 0) num = 1;
    long den = uniform_int(1, 4);
    Scalar s = Scalar::ratio(num, den, b);
    if (allow_complex && uniform_int(0, 2) == 0) {
      long inum = uniform_int(-4, 4);
      s += Scalar::ratio(inum, den, b) * Scalar::imaginary_unit(b);
    }
    return s;
  }

  Monomial monomial(int max_degree) {
    std::array<int, kDim> e{0, 0, 0, 0};
    int degree = static_cast<int>(uniform_int(0, max_degree));
    for (int d = 0; d < degree; ++d) e[uniform_int(0, kDim - 1)] += 1;
    return Monomial(e);
  }

  Polynomial polynomial(FrameId frame, Backend backend, int max_degree, int terms,
                        bool allow_complex = true) {
    Polynomial p(frame, backend);
    for (int t = 0; t < terms; ++t)
      p.add_term(monomial(max_degree), small_scalar(backend, allow_complex));
    return p;
  }

  // Series with a handful of polynomial coefficients at low hbar orders.
  FormalSeries series(FrameId frame, Backend backend, int order, int max_degree,
                      int terms, bool allow_complex = true) {
    FormalSeries s =
        FormalSeries::of_polynomial(polynomial(frame, backend, max_degree, terms,
                                               allow_complex),
                                    order);
    if (order >= 1 && uniform_int(0, 1) == 0)
      s.set(1, polynomial(frame, backend, std::max(0, max_degree - 1), 2, allow_complex));
    return s;
  }

 private:
  std::mt19937_64 gen_;
  uint64_t seed_;
};

}  // namespace starflow
