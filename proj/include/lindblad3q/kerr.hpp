#pragma once

#include "lindblad3q/model.hpp"
#include "lindblad3q/phasespace.hpp"
#include "lindblad3q/types.hpp"

namespace lindblad3q {

// Truncation policy for the Bessel series: stop at |l| <= l_max or once three
// consecutive +-l pair magnitudes fall below term_tol, whichever comes first.
// Hitting l_max with the tail still above term_tol is a convergence error.
struct SeriesControl {
  int l_max = 80;
  double term_tol = 1e-14;
};

// Gamma_l = sqrt(kappa^2 - U^2 l^2 + 2i kappa U l (2nth+1)), principal branch.
// Every coefficient family is even in Gamma_l, so the branch is irrelevant.
cdouble kerr_gamma(const KerrModel& m, int l);

// The three coefficient families of the l-th harmonic at time t. Kpre, D and
// P carry the full per-term prefactors (rotating phase, e^{kappa t/2} growth,
// i^{-l}) folded into numerically safe combined exponents.
struct KerrCoefficients {
  cdouble Gamma;
  cdouble A, Bq, Bcl, Kpre;     // mixed kernel K(eta, alpha; t)
  cdouble D, Eminus, Eplus, F;  // Wigner propagator Xi(beta, alpha; t)
  cdouble P, Q, R, S;           // coherent-state Wigner evolution
  bool propagator_valid = true;  // false when Xi is distributional (kappa = 0)
};

KerrCoefficients kerr_coefficients(const KerrModel& m, int l, double t);
// Same with an explicit Gamma; exists so the branch-evenness invariant is testable.
KerrCoefficients kerr_coefficients_with_gamma(const KerrModel& m, int l, double t,
                                              cdouble gamma);

// Mixed phase-space propagator of the dissipative Kerr oscillator.
cdouble kerr_kernel(const KerrModel& m, cdouble eta, cdouble alpha, double t,
                    const SeriesControl& ctrl = {});

// Exact <a(t)> for an initial coherent state with phase-space center alpha0
// (Fock amplitude alpha0/sqrt(2)). Closed form, only the l = 1 coefficients
// enter; ctrl is accepted for interface uniformity.
cdouble kerr_average_a(const KerrModel& m, cdouble alpha0, double t,
                       const SeriesControl& ctrl = {});

// Classical-classical propagator Xi(beta, alpha; t); throws
// delta_distribution_error when it degenerates (t = 0 or kappa = 0).
cdouble kerr_wigner_propagator(const KerrModel& m, cdouble beta, cdouble alpha, double t,
                               const SeriesControl& ctrl = {});

// W(alpha, t) for an initial coherent state 2 e^{-|alpha-alpha0|^2}.
// Real up to a 1e-9 imaginary residue, which is checked.
double kerr_wigner_coherent(const KerrModel& m, cdouble alpha, cdouble alpha0, double t,
                            const SeriesControl& ctrl = {});

// Quadrature of Xi against an arbitrary sampled initial Wigner function.
// norm_drift_tol bounds |integral(out) - integral(in)|; the output is sampled
// on output_geometry's axes when given (values ignored), else on grid0's.
PhaseGrid evolve_wigner_grid(const KerrModel& m, const PhaseGrid& grid0, double t,
                             const SeriesControl& ctrl = {},
                             double norm_drift_tol = 1e-3,
                             const PhaseGrid* output_geometry = nullptr);

}  // namespace lindblad3q
