#include "lindblad3q/kerr.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "lindblad3q/bessel.hpp"
#include "lindblad3q/errors.hpp"
#include "lindblad3q/parallel.hpp"

namespace lindblad3q {

namespace {

// i^{-l} stays on the unit circle exactly.
cdouble i_pow_minus(int l) {
  switch (((l % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace

cdouble kerr_gamma(const KerrModel& m, int l) {
  if (l == 0) return m.kappa;  // exact: keeps the l = 0 coefficients clean
  const double w = 2.0 * m.nth + 1.0;
  return std::sqrt(cdouble(m.kappa * m.kappa - m.U * m.U * l * l,
                           2.0 * m.kappa * m.U * l * w));
}

KerrCoefficients kerr_coefficients_with_gamma(const KerrModel& m, int l, double t,
                                              cdouble g) {
  KerrCoefficients c;
  c.Gamma = g;
  const double w = 2.0 * m.nth + 1.0;
  const cdouble iUl(0.0, m.U * l);
  // rotating phase + the e^{kappa t/2} growth folded into one exponent so the
  // e^{-Gamma t/2} decay cancels it before anything can overflow
  const cdouble rot(0.0, -(m.omega0 - m.U) * l * t);
  const cdouble damped_half = std::exp(rot + (m.kappa - g) * (t / 2.0));

  if (l == 0 && m.kappa == 0.0) {
    // Gamma = 0: closed-Kerr limits of the l = 0 coefficients; the
    // classical-classical propagator is distributional here.
    c.A = 1.0;
    c.Bq = c.Bcl = 0.0;
    c.Kpre = 1.0;
    c.P = 2.0;
    c.Q = c.R = 1.0;
    c.S = I;
    c.propagator_valid = false;
    c.D = c.Eminus = c.Eplus = c.F = 0.0;
    return c;
  }

  // Hyperbolics rewritten via x = e^{-Gamma t}; the principal branch has
  // Re(Gamma) >= 0 so |x| <= 1 at any t.
  const cdouble x = std::exp(-g * t);
  const cdouble xh = std::exp(-g * t / 2.0);
  const cdouble omx = 1.0 - x;

  const cdouble dK = (g + m.kappa) + (g - m.kappa) * x;
  c.A = 2.0 * g * xh / dK;
  c.Bq = (iUl + 2.0 * m.kappa * w) * omx / dK;
  c.Bcl = iUl * omx / dK;
  c.Kpre = damped_half * (2.0 * g / dK);

  const cdouble w2 = iUl + 2.0 * m.kappa * w;
  if (m.kappa == 0.0 || t == 0.0) {
    c.propagator_valid = false;
    c.D = c.Eminus = c.Eplus = c.F = 0.0;
  } else {
    c.D = damped_half * i_pow_minus(l) * 4.0 * g / (w2 * omx);
    c.Eminus = ((g - m.kappa) + (g + m.kappa) * x) / (w2 * omx);
    c.Eplus = ((g + m.kappa) + (g - m.kappa) * x) / (w2 * omx);
    c.F = 2.0 * I * g * xh / (w2 * omx);
  }

  const cdouble w1 = iUl + m.kappa * (4.0 * m.nth + 1.0);
  const cdouble dC = (g + w1) + (g - w1) * x;
  c.P = damped_half * i_pow_minus(l) * 4.0 * g / dC;
  c.Q = ((g + iUl + m.kappa) + (g - iUl - m.kappa) * x) / dC;
  c.R = ((g - m.kappa) + (g + m.kappa) * x) / dC;
  c.S = 2.0 * I * g * xh / dC;
  return c;
}

KerrCoefficients kerr_coefficients(const KerrModel& m, int l, double t) {
  return kerr_coefficients_with_gamma(m, l, t, kerr_gamma(m, l));
}

namespace {

// term(0) + sum_{l>=1} [term(l) + term(-l)] under the truncation policy.
cdouble sum_pairs(const SeriesControl& ctrl,
                  const std::function<cdouble(int)>& term) {
  cdouble total = term(0);
  int quiet = 0;
  double last = std::abs(total);
  for (int l = 1; l <= ctrl.l_max; ++l) {
    const cdouble pair = term(l) + term(-l);
    total += pair;
    last = std::abs(pair);
    quiet = last < ctrl.term_tol ? quiet + 1 : 0;
    if (quiet >= 3) return total;
  }
  if (last >= ctrl.term_tol)
    throw series_convergence_error("Kerr series did not converge within l_max", last);
  return total;
}

}  // namespace

cdouble kerr_kernel(const KerrModel& m, cdouble eta, cdouble alpha, double t,
                    const SeriesControl& ctrl) {
  if (t < 0) throw validation_error("kerr_kernel requires t >= 0");
  const double ae = std::abs(eta), aa = std::abs(alpha);
  const double dphi = std::arg(eta) - std::arg(alpha);
  return sum_pairs(ctrl, [&](int l) {
    const auto c = kerr_coefficients(m, l, t);
    return c.Kpre * std::exp(-c.Bq * ae * ae - c.Bcl * aa * aa) *
           std::exp(cdouble(0.0, -l * dphi)) *
           detail::bessel_j_wide(l, 2.0 * ae * aa * c.A);
  });
}

cdouble kerr_average_a(const KerrModel& m, cdouble alpha0, double t,
                       const SeriesControl&) {
  if (t < 0) throw validation_error("kerr_average_a requires t >= 0");
  // sqrt(2)<a(t)> = e^{-i(w0-U)t + kt/2} A_1^2 int (d^2a/2pi) a e^{-Bcl |a|^2} W_0(a)
  // with W_0 = 2 e^{-|a-a0|^2}; the Gaussian moment integral gives
  // a0 e^{-|a0|^2 Bcl/(1+Bcl)} / (1+Bcl)^2.
  const auto c = kerr_coefficients(m, 1, t);
  const cdouble b1 = 1.0 + c.Bcl;
  return c.Kpre * c.A * alpha0 / (std::sqrt(2.0) * b1 * b1) *
         std::exp(-std::norm(alpha0) * c.Bcl / b1);
}

namespace {

void require_propagator_regular(const KerrModel& m, double t, cdouble alpha) {
  if (t <= 0.0 || m.kappa == 0.0) {
    const cdouble center = alpha * std::exp(cdouble(0.0, -m.omega0 * t));
    throw delta_distribution_error(
        "Kerr Wigner propagator is distributional at zero diffusion", center);
  }
}

}  // namespace

cdouble kerr_wigner_propagator(const KerrModel& m, cdouble beta, cdouble alpha, double t,
                               const SeriesControl& ctrl) {
  require_propagator_regular(m, t, alpha);
  const double ab = std::abs(beta), aa = std::abs(alpha);
  const double dphi = std::arg(beta) - std::arg(alpha);
  // E+ multiplies |beta|^2 and E- multiplies |alpha|^2: the U -> 0 limit must
  // collapse onto the damped Gaussian of width (2nth+1)(1-e^{-kt}) in beta,
  // and normalization integral over beta pins the same assignment.
  return sum_pairs(ctrl, [&](int l) {
    const auto c = kerr_coefficients(m, l, t);
    return c.D * std::exp(-c.Eplus * ab * ab - c.Eminus * aa * aa) *
           std::exp(cdouble(0.0, -l * dphi)) *
           detail::bessel_j_wide(l, 2.0 * ab * aa * c.F);
  });
}

double kerr_wigner_coherent(const KerrModel& m, cdouble alpha, cdouble alpha0, double t,
                            const SeriesControl& ctrl) {
  if (t < 0) throw validation_error("kerr_wigner_coherent requires t >= 0");
  const double aa = std::abs(alpha), a0 = std::abs(alpha0);
  const double dphi = std::arg(alpha) - std::arg(alpha0);
  const cdouble value = sum_pairs(ctrl, [&](int l) {
    const auto c = kerr_coefficients(m, l, t);
    return c.P * std::exp(-c.Q * aa * aa - c.R * a0 * a0) *
           std::exp(cdouble(0.0, -l * dphi)) *
           detail::bessel_j_wide(l, 2.0 * aa * a0 * c.S);
  });
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value.real())))
    throw series_convergence_error("Wigner series lost reality", std::abs(value.imag()));
  return value.real();
}

PhaseGrid evolve_wigner_grid(const KerrModel& m, const PhaseGrid& grid0, double t,
                             const SeriesControl& ctrl, double norm_drift_tol,
                             const PhaseGrid* output_geometry) {
  require_propagator_regular(m, t, 0.0);

  // Flatten the input samples, dropping the negligible tail.
  struct Sample {
    double r, phi, log_w;
    cdouble w0;
  };
  std::vector<Sample> in;
  in.reserve(grid0.values.size());
  const double cell = grid0.dre() * grid0.dim() / (2.0 * M_PI);
  double wmax = 0.0;
  for (Eigen::Index j = 0; j < grid0.im_axis.size(); ++j)
    for (Eigen::Index i = 0; i < grid0.re_axis.size(); ++i)
      wmax = std::max(wmax, std::abs(grid0.values(i, j)));
  for (Eigen::Index j = 0; j < grid0.im_axis.size(); ++j)
    for (Eigen::Index i = 0; i < grid0.re_axis.size(); ++i) {
      if (std::abs(grid0.values(i, j)) < 1e-14 * wmax) continue;
      const cdouble a = grid0.point(i, j);
      const cdouble w = grid0.values(i, j) * cell;
      in.push_back({std::abs(a), std::arg(a), std::log(std::abs(w)), w});
    }

  // Per-l tables shared by every (beta, alpha) pair: coefficients, and the
  // input-side factor w0 e^{-E- r^2} e^{+il phi}.
  std::vector<KerrCoefficients> coeff(ctrl.l_max + 1);
  std::vector<double> log_d(ctrl.l_max + 1);
  // w0 X and w0 conj(X) with X = e^{-E- r^2 + il phi}: the -l partner of a
  // sample's term is conj(term/w0) w0.
  std::vector<std::vector<cdouble>> in_factor(ctrl.l_max + 1);
  std::vector<std::vector<cdouble>> in_factor_conj(ctrl.l_max + 1);
  for (int l = 0; l <= ctrl.l_max; ++l) {
    coeff[l] = kerr_coefficients(m, l, t);
    log_d[l] = std::log(std::abs(coeff[l].D) + 1e-300);
    in_factor[l].resize(in.size());
    in_factor_conj[l].resize(in.size());
    for (std::size_t k = 0; k < in.size(); ++k) {
      const cdouble x = std::exp(-coeff[l].Eminus * in[k].r * in[k].r +
                                 cdouble(0.0, l * in[k].phi));
      in_factor[l][k] = in[k].w0 * x;
      in_factor_conj[l][k] = in[k].w0 * std::conj(x);
    }
  }
  const double skip_threshold = std::log(ctrl.term_tol) - 5.0;

  PhaseGrid out = output_geometry ? PhaseGrid::like(*output_geometry)
                                  : PhaseGrid::like(grid0);
  const Eigen::Index nre = out.re_axis.size();
  std::vector<int> failed(out.values.cols(), 0);
  parallel_for(static_cast<std::size_t>(out.values.cols()), [&](std::size_t col) {
    const Eigen::Index j = static_cast<Eigen::Index>(col);
    for (Eigen::Index i = 0; i < nre; ++i) {
      const cdouble beta = out.point(i, j);
      const double rb = std::abs(beta), pb = std::arg(beta);
      cdouble total = 0.0;
      int quiet = 0;
      bool converged = false;
      for (int l = 0; l <= ctrl.l_max; ++l) {
        const auto& c = coeff[l];
        const cdouble out_factor =
            c.D * std::exp(-c.Eplus * rb * rb + cdouble(0.0, -l * pb));
        const double log_out = log_d[l] - c.Eplus.real() * rb * rb;
        const double fmag = 2.0 * rb * std::abs(c.F);
        cdouble contrib = 0.0;
        for (std::size_t k = 0; k < in.size(); ++k) {
          const auto& s = in[k];
          // overbound |term| <= |D w0| e^{Re exponent + |z|}: drops far-corner
          // pairs before the Bessel call (whose argument may be enormous
          // there while the term itself is negligible)
          if (log_out + s.log_w - c.Eminus.real() * s.r * s.r + fmag * s.r <
              skip_threshold)
            continue;
          if (fmag * s.r > 590.0)
            throw series_convergence_error(
                "propagator series outside its numerical envelope (nearly closed "
                "cavity at short time?); increase kappa*t or shrink the grids",
                fmag * s.r);
          const cdouble core =
              out_factor * detail::bessel_j_wide(l, 2.0 * rb * s.r * c.F);
          contrib += l == 0 ? core * in_factor[l][k]
                            : core * in_factor[l][k] +
                                  std::conj(core) * in_factor_conj[l][k];
        }
        total += contrib;
        quiet = std::abs(contrib) < ctrl.term_tol * std::max(1.0, std::abs(total))
                    ? quiet + 1
                    : 0;
        if (quiet >= 3) {
          converged = true;
          break;
        }
      }
      if (!converged) failed[col] = 1;
      out.values(i, j) = total.real();
    }
  });
  for (int f : failed)
    if (f)
      throw series_convergence_error("Wigner grid propagation did not converge", 0.0);

  const double drift = std::abs(out.integral() - grid0.integral());
  if (drift > norm_drift_tol)
    throw validation_error("Wigner propagation lost normalization (drift " +
                           std::to_string(drift) + "); enlarge or refine the grids");
  return out;
}

}  // namespace lindblad3q
