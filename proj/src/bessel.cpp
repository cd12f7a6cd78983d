#include "lindblad3q/bessel.hpp"

#include <cmath>
#include <vector>

#include "lindblad3q/errors.hpp"

namespace lindblad3q {

namespace {

constexpr int kMaxOrder = 200;
constexpr double kMaxArg = 200.0;

// Ascending power series; well conditioned for |z| small or order >= |z|.
cdouble series_j(int l, cdouble z) {
  const cdouble half = z / 2.0;
  cdouble term = 1.0;
  for (int k = 1; k <= l; ++k) term *= half / static_cast<double>(k);
  cdouble sum = term;
  const cdouble mh2 = -half * half;
  for (int k = 1; k <= 400; ++k) {
    term *= mh2 / static_cast<double>(k * (k + l));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

void rescale(std::vector<cdouble>& f, cdouble& fkp1) {
  double peak = 0.0;
  for (const auto& v : f) peak = std::max(peak, std::abs(v));
  peak = std::max(peak, std::abs(fkp1));
  if (peak > 1e250) {
    for (auto& v : f) v /= peak;
    fkp1 /= peak;
  }
}

// Downward recurrence f_{k-1} = (2k/z) f_k - f_{k+1}, seeded far above the
// target orders, normalized by J_0 + 2 J_2 + 2 J_4 + ... = 1 (valid for any
// complex z). Falls back to a series pivot when the sum itself cancels badly.
void miller_ladder(int lmax, cdouble z, cdouble* out) {
  const double az = std::abs(z);
  const int pivot = static_cast<int>(std::ceil(1.2 * az)) + 6;
  int start = std::max(lmax, pivot) + 24 + static_cast<int>(std::sqrt(60.0 * az));
  if (start % 2) ++start;
  std::vector<cdouble> f(start + 1, 0.0);
  cdouble fkp1 = 0.0;
  f[start] = 1e-280;
  for (int k = start; k > 0; --k) {
    cdouble fkm1 = (2.0 * k / z) * f[k] - fkp1;
    fkp1 = f[k];
    f[k - 1] = fkm1;
    if (std::abs(fkm1) > 1e250) rescale(f, fkp1);
  }
  cdouble norm_sum = f[0];
  double gross = std::abs(f[0]);
  for (int k = 2; k <= start; k += 2) {
    norm_sum += 2.0 * f[k];
    gross += 2.0 * std::abs(f[k]);
  }
  cdouble scale;
  if (std::abs(norm_sum) > 1e-4 * gross)
    scale = 1.0 / norm_sum;
  else
    scale = series_j(pivot, z) / f[pivot];
  for (int l = 0; l <= lmax; ++l) out[l] = f[l] * scale;
}

}  // namespace

void bessel_j_complex_ladder(int lmax, cdouble z, cdouble* out) {
  if (lmax < 0 || lmax > kMaxOrder || std::abs(z) > kMaxArg)
    throw validation_error("bessel_j_complex outside documented envelope");
  if (std::abs(z) < 1e-300) {
    out[0] = 1.0;
    for (int l = 1; l <= lmax; ++l) out[l] = 0.0;
    return;
  }
  if (std::abs(z) <= 12.0) {
    for (int l = 0; l <= lmax; ++l) out[l] = series_j(l, z);
    return;
  }
  miller_ladder(lmax, z, out);
}

namespace detail {

cdouble bessel_j_wide(int l, cdouble z) {
  const int al = std::abs(l);
  if (al > kMaxOrder || std::abs(z) > 600.0)
    throw validation_error("bessel argument outside the computable range");
  cdouble value;
  if (std::abs(z) < 1e-300) {
    value = al == 0 ? 1.0 : 0.0;
  } else if (std::abs(z) <= 12.0) {
    value = series_j(al, z);
  } else {
    std::vector<cdouble> ladder(al + 1);
    miller_ladder(al, z, ladder.data());
    value = ladder[al];
  }
  if (l < 0 && (al % 2) == 1) value = -value;
  return value;
}

}  // namespace detail

cdouble bessel_j_complex(int l, cdouble z) {
  if (std::abs(l) > kMaxOrder || std::abs(z) > kMaxArg)
    throw validation_error("bessel_j_complex outside documented envelope");
  return detail::bessel_j_wide(l, z);
}

}  // namespace lindblad3q
