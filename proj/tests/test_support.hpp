#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lindblad3q/model.hpp"
#include "lindblad3q/types.hpp"

namespace l3qtest {

using lindblad3q::CMat;
using lindblad3q::cdouble;

// Deterministic xoshiro-style generator; identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    return state_ = x;
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  cdouble complex_unit_box() { return {symmetric(), symmetric()}; }

  CMat matrix(int rows, int cols, double scale = 1.0) {
    CMat a(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) a(i, j) = scale * complex_unit_box();
    return a;
  }
  CMat hermitian(int n, double scale = 1.0) {
    CMat a = matrix(n, n, scale);
    return (a + a.adjoint()) / 2.0;
  }

 private:
  std::uint64_t state_;
};

// Random stable U(1)-symmetric spec: loss and pumping live in separate
// channels (so C = 0), full-rank loss dominates pumping so that H_eff decays
// (bosons) and the Pauli inequality holds (fermions).
inline lindblad3q::QuadraticLindbladSpec random_stable_spec(
    lindblad3q::Statistics stat, int modes, int baths, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    CMat h = rng.hermitian(modes);
    CMat l = CMat::Zero(2 * baths, modes), p = CMat::Zero(2 * baths, modes);
    l.topRows(baths) = rng.matrix(baths, modes) + 0.8 * CMat::Identity(baths, modes);
    p.bottomRows(baths) =
        rng.matrix(baths, modes, stat == lindblad3q::Statistics::boson ? 0.25 : 0.35);
    auto spec = lindblad3q::QuadraticLindbladSpec::from_matrices(stat, h, CMat(), l, p);
    // bosons decay iff L - P > 0; keep a positive margin so downstream
    // Lyapunov solves are comfortably stable
    CMat gap = spec.diss.L - spec.diss.P;
    if (stat == lindblad3q::Statistics::fermion) gap = spec.diss.L + spec.diss.P;
    if (lindblad3q::min_eigenvalue(gap) > 0.05) return spec;
  }
  throw std::runtime_error("random_stable_spec failed to find a stable draw");
}

// Random spec with loss-pump coherence (C != 0): breaks the U(1) symmetry.
inline lindblad3q::QuadraticLindbladSpec random_u1_breaking_spec(
    lindblad3q::Statistics stat, int modes, int baths, Rng& rng) {
  CMat h = rng.hermitian(modes);
  CMat l = rng.matrix(baths, modes) + 0.8 * CMat::Identity(baths, modes);
  CMat p = rng.matrix(baths, modes, 0.3);
  return lindblad3q::QuadraticLindbladSpec::from_matrices(stat, h, CMat(), l, p);
}

// Greedy multiset match: the largest nearest-neighbour distance after pairing
// each entry of `a` with its closest remaining entry of `b`.
inline double multiset_distance(std::vector<cdouble> a, std::vector<cdouble> b) {
  double worst = 0.0;
  for (const cdouble& x : a) {
    std::size_t best = 0;
    double dist = 1e300;
    for (std::size_t k = 0; k < b.size(); ++k)
      if (std::abs(b[k] - x) < dist) {
        dist = std::abs(b[k] - x);
        best = k;
      }
    worst = std::max(worst, dist);
    if (!b.empty()) b.erase(b.begin() + best);
  }
  return worst;
}

}  // namespace l3qtest
