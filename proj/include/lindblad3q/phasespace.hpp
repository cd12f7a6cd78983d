#pragma once

#include <iosfwd>
#include <string>

#include "lindblad3q/types.hpp"

namespace lindblad3q {

// Rectangular sampling of a phase-space function in the sqrt2-scaled alpha
// convention. values(i, j) lives at re_axis(i) + i*im_axis(j).
struct PhaseGrid {
  RVec re_axis, im_axis;
  CMat values;

  static PhaseGrid regular(double extent, int resolution);
  static PhaseGrid like(const PhaseGrid& other);

  double dre() const { return re_axis.size() > 1 ? re_axis(1) - re_axis(0) : 0.0; }
  double dim() const { return im_axis.size() > 1 ? im_axis(1) - im_axis(0) : 0.0; }
  cdouble point(Eigen::Index i, Eigen::Index j) const {
    return {re_axis(i), im_axis(j)};
  }
  // sum * dre * dim / (2 pi): unit trace for a Wigner grid.
  cdouble integral() const;
  double max_boundary_magnitude() const;
};

// CSV columns re_alpha, im_alpha, re_value, im_value; header comments record
// the spacing, the alpha convention, and a caller-supplied metadata block.
void write_grid_csv(std::ostream& os, const PhaseGrid& grid, const std::string& metadata);
PhaseGrid read_grid_csv(std::istream& is);

struct DampedOscillatorParams {
  double omega0 = 0.0;
  double kappa = 0.0;
  double nth = 0.0;
};

// K(eta, alpha; t) = exp(-(2nth+1)(1-e^{-kt})|eta|^2
//                        + e^{-kt/2}(eta* alpha e^{-iw0 t} - c.c.)).
cdouble damped_kernel(const DampedOscillatorParams& p, cdouble eta, cdouble alpha, double t);

// Classical-classical propagator: Gaussian in beta centered at
// alpha e^{-iw0 t - kt/2} with variance (2nth+1)(1-e^{-kt}), normalized so
// integral d^2beta/(2pi) = 1. Throws delta_distribution_error at zero variance.
cdouble damped_wigner_propagator(const DampedOscillatorParams& p, cdouble beta,
                                 cdouble alpha, double t);

enum class FourierDirection {
  characteristic_to_wigner,  // W(a) = int (2 d^2eta/pi) e^{eta a* - eta* a} Lambda(eta)
  wigner_to_characteristic,  // Lambda(eta) = int (d^2a/2pi) e^{eta* a - eta a*} W(a)
};

// Direct quadrature with the exact measures (separable two-pass evaluation).
// Output sampled on the same axes as the input.
PhaseGrid fourier_wigner_characteristic(const PhaseGrid& grid, FourierDirection direction);

// W_out(a) = int d^2b/(width pi) e^{-|a-b|^2/width} W_in(b).
PhaseGrid gaussian_convolve(const PhaseGrid& grid, double width);

// Associated Laguerre L^k_n(x) by the three-term upward recurrence.
double associated_laguerre(int n, int k, double x);

// Wigner function of the right eigenvector r_{mu,nu} of the damped oscillator.
cdouble right_eigvec_wigner(int mu, int nu, double nth, cdouble alpha);

// Phase-space function of the left eigenvector l_{mu,nu}; biorthonormal to the
// right family under integral d^2a/(2pi) conj(l) r.
cdouble left_eigvec_phase(int mu, int nu, double nth, cdouble alpha);

// W_{|mu><mu|}(alpha) = 2 (-1)^mu e^{-|alpha|^2} L_mu(2|alpha|^2).
double wigner_of_fock_diagonal(int mu, cdouble alpha);

// Sampled Wigner of a coherent state with phase-space center alpha0: 2 e^{-|a-a0|^2}.
PhaseGrid coherent_state_grid(double extent, int resolution, cdouble alpha0);
// Thermal Wigner of width 2nth+1.
PhaseGrid thermal_state_grid(double extent, int resolution, double nth);

}  // namespace lindblad3q
