#include "lindblad3q/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "lindblad3q/errors.hpp"

namespace lindblad3q {

PhaseGrid PhaseGrid::regular(double extent, int resolution) {
  if (resolution < 2) throw validation_error("grid resolution must be >= 2");
  PhaseGrid g;
  g.re_axis = RVec::LinSpaced(resolution, -extent, extent);
  g.im_axis = g.re_axis;
  g.values = CMat::Zero(resolution, resolution);
  return g;
}

PhaseGrid PhaseGrid::like(const PhaseGrid& other) {
  PhaseGrid g;
  g.re_axis = other.re_axis;
  g.im_axis = other.im_axis;
  g.values = CMat::Zero(other.values.rows(), other.values.cols());
  return g;
}

cdouble PhaseGrid::integral() const {
  return values.sum() * dre() * dim() / (2.0 * M_PI);
}

double PhaseGrid::max_boundary_magnitude() const {
  double m = 0.0;
  const auto rows = values.rows(), cols = values.cols();
  for (Eigen::Index i = 0; i < rows; ++i)
    m = std::max({m, std::abs(values(i, 0)), std::abs(values(i, cols - 1))});
  for (Eigen::Index j = 0; j < cols; ++j)
    m = std::max({m, std::abs(values(0, j)), std::abs(values(rows - 1, j))});
  return m;
}

void write_grid_csv(std::ostream& os, const PhaseGrid& grid, const std::string& metadata) {
  char buf[128];
  os << "# lindblad3q phase-space grid\n";
  os << "# convention: sqrt2-scaled alpha\n";
  std::snprintf(buf, sizeof(buf), "# spacing: dre=%.17g dim=%.17g\n", grid.dre(), grid.dim());
  os << buf;
  std::snprintf(buf, sizeof(buf), "# boundary_max: %.17g\n", grid.max_boundary_magnitude());
  os << buf;
  std::istringstream meta(metadata);
  for (std::string line; std::getline(meta, line);) os << "# " << line << "\n";
  os << "re_alpha,im_alpha,re_value,im_value\n";
  for (Eigen::Index j = 0; j < grid.im_axis.size(); ++j)
    for (Eigen::Index i = 0; i < grid.re_axis.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", grid.re_axis(i),
                    grid.im_axis(j), grid.values(i, j).real(), grid.values(i, j).imag());
      os << buf;
    }
}

PhaseGrid read_grid_csv(std::istream& is) {
  std::vector<double> re, im;
  std::vector<cdouble> vals;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("re_alpha", 0) == 0) continue;
    double a, b, c, d;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg", &a, &b, &c, &d) != 4)
      throw validation_error("bad grid CSV row: " + line);
    re.push_back(a);
    im.push_back(b);
    vals.push_back({c, d});
  }
  if (vals.empty()) throw validation_error("empty grid CSV");
  // rows are emitted re-major within each im block
  Eigen::Index nre = 1;
  while (nre < static_cast<Eigen::Index>(re.size()) && im[nre] == im[0]) ++nre;
  const Eigen::Index nim = static_cast<Eigen::Index>(re.size()) / nre;
  if (nre * nim != static_cast<Eigen::Index>(re.size()))
    throw validation_error("grid CSV is not rectangular");
  PhaseGrid g;
  g.re_axis.resize(nre);
  g.im_axis.resize(nim);
  g.values.resize(nre, nim);
  for (Eigen::Index i = 0; i < nre; ++i) g.re_axis(i) = re[i];
  for (Eigen::Index j = 0; j < nim; ++j) g.im_axis(j) = im[j * nre];
  for (Eigen::Index j = 0; j < nim; ++j)
    for (Eigen::Index i = 0; i < nre; ++i) g.values(i, j) = vals[j * nre + i];
  return g;
}

cdouble damped_kernel(const DampedOscillatorParams& p, cdouble eta, cdouble alpha,
                      double t) {
  if (t < 0) throw validation_error("damped_kernel requires t >= 0");
  const double sigma = (2.0 * p.nth + 1.0) * (1.0 - std::exp(-p.kappa * t));
  const cdouble cross =
      std::exp(-p.kappa * t / 2.0) * std::conj(eta) * alpha * std::exp(-I * p.omega0 * t);
  return std::exp(-sigma * std::norm(eta) + cross - std::conj(cross));
}

cdouble damped_wigner_propagator(const DampedOscillatorParams& p, cdouble beta,
                                 cdouble alpha, double t) {
  if (t < 0) throw validation_error("damped_wigner_propagator requires t >= 0");
  const double sigma = (2.0 * p.nth + 1.0) * (1.0 - std::exp(-p.kappa * t));
  const cdouble center =
      alpha * std::exp(-I * p.omega0 * t) * std::exp(-p.kappa * t / 2.0);
  if (sigma <= 0.0)
    throw delta_distribution_error(
        "zero-variance propagator is a point mass at the rotated-decayed alpha", center);
  return (2.0 / sigma) * std::exp(-std::norm(beta - center) / sigma);
}

namespace {

// Phase matrix E(i, k) = exp(sign * 2i * u_i * v_k).
CMat phase_matrix(const RVec& u, const RVec& v, double sign) {
  CMat e(u.size(), v.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index k = 0; k < v.size(); ++k)
      e(i, k) = std::exp(cdouble(0.0, sign * 2.0 * u(i) * v(k)));
  return e;
}

}  // namespace

PhaseGrid fourier_wigner_characteristic(const PhaseGrid& grid, FourierDirection direction) {
  PhaseGrid out = PhaseGrid::like(grid);
  const double cell = grid.dre() * grid.dim();
  // exponent eta*alpha  - eta alpha* = -2i(Im eta Re alpha - Re eta Im alpha):
  // both directions factorize into two one-dimensional passes.
  if (direction == FourierDirection::characteristic_to_wigner) {
    // W(ax, ay) = (2/pi) cell * sum_{hx,hy} e^{2i hy ax} e^{-2i hx ay} L(hx, hy)
    CMat left = phase_matrix(out.re_axis, grid.im_axis, +1.0);   // (ax, hy)
    CMat right = phase_matrix(grid.re_axis, out.im_axis, -1.0);  // (hx, ay)
    out.values = (2.0 / M_PI) * cell * (left * grid.values.transpose() * right);
  } else {
    // Lambda(hx, hy) = (1/2pi) cell * sum_{ax,ay} e^{-2i hy ax} e^{2i hx ay} W(ax, ay)
    CMat left = phase_matrix(out.re_axis, grid.im_axis, +1.0);   // (hx, ay)
    CMat right = phase_matrix(grid.re_axis, out.im_axis, -1.0);  // (ax, hy)
    out.values = (0.5 / M_PI) * cell * (left * grid.values.transpose() * right);
  }
  return out;
}

PhaseGrid gaussian_convolve(const PhaseGrid& grid, double width) {
  if (width <= 0) throw validation_error("gaussian_convolve requires width > 0");
  PhaseGrid out = PhaseGrid::like(grid);
  auto gauss1d = [&](const RVec& u, const RVec& v) {
    Eigen::MatrixXd g(u.size(), v.size());
    for (Eigen::Index i = 0; i < u.size(); ++i)
      for (Eigen::Index k = 0; k < v.size(); ++k)
        g(i, k) = std::exp(-(u(i) - v(k)) * (u(i) - v(k)) / width);
    return g;
  };
  Eigen::MatrixXd gre = gauss1d(out.re_axis, grid.re_axis);
  Eigen::MatrixXd gim = gauss1d(grid.im_axis, out.im_axis);
  out.values = (grid.dre() * grid.dim() / (width * M_PI)) *
               (gre * grid.values * gim);
  return out;
}

double associated_laguerre(int n, int k, double x) {
  if (n < 0) throw validation_error("Laguerre order must be >= 0");
  double lm1 = 1.0;  // L^k_0
  if (n == 0) return lm1;
  double l = 1.0 + k - x;  // L^k_1
  for (int j = 1; j < n; ++j) {
    double lp1 = ((2.0 * j + 1.0 + k - x) * l - (j + k) * lm1) / (j + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

namespace {

double min_max_factorial_ratio_sqrt(int mu, int nu) {
  // sqrt(min! / max!) = 1 / sqrt((min+1)(min+2)...max)
  const int lo = std::min(mu, nu), hi = std::max(mu, nu);
  double prod = 1.0;
  for (int j = lo + 1; j <= hi; ++j) prod *= j;
  return 1.0 / std::sqrt(prod);
}

}  // namespace

cdouble right_eigvec_wigner(int mu, int nu, double nth, cdouble alpha) {
  if (mu < 0 || nu < 0 || nth < 0)
    throw validation_error("right_eigvec_wigner requires mu, nu >= 0 and nth >= 0");
  const double w = 2.0 * nth + 1.0;
  const int lo = std::min(mu, nu), hi = std::max(mu, nu);
  const double r2 = std::norm(alpha);
  const double phi = std::arg(alpha);
  const double radial = std::pow(std::abs(alpha), std::abs(mu - nu));
  const double lag = associated_laguerre(lo, std::abs(mu - nu), r2 / w);
  const double sign = (lo % 2 == 0) ? 1.0 : -1.0;
  const cdouble phase = std::exp(-I * phi * static_cast<double>(mu - nu));
  return min_max_factorial_ratio_sqrt(mu, nu) * 2.0 * sign * std::exp(-r2 / w) /
         std::pow(w, hi + 1) * phase * radial * lag;
}

cdouble left_eigvec_phase(int mu, int nu, double nth, cdouble alpha) {
  if (mu < 0 || nu < 0 || nth < 0)
    throw validation_error("left_eigvec_phase requires mu, nu >= 0 and nth >= 0");
  const double w = 2.0 * nth + 1.0;
  const int lo = std::min(mu, nu);
  const double r2 = std::norm(alpha);
  const double phi = std::arg(alpha);
  const double radial = std::pow(std::abs(alpha), std::abs(mu - nu));
  const double lag = associated_laguerre(lo, std::abs(mu - nu), r2 / w);
  const double sign = (lo % 2 == 0) ? 1.0 : -1.0;
  const cdouble phase = std::exp(-I * phi * static_cast<double>(mu - nu));
  return min_max_factorial_ratio_sqrt(mu, nu) * sign * std::pow(w, lo) * phase * radial *
         lag;
}

double wigner_of_fock_diagonal(int mu, cdouble alpha) {
  if (mu < 0) throw validation_error("Fock index must be >= 0");
  const double r2 = std::norm(alpha);
  const double sign = (mu % 2 == 0) ? 1.0 : -1.0;
  return 2.0 * sign * std::exp(-r2) * associated_laguerre(mu, 0, 2.0 * r2);
}

PhaseGrid coherent_state_grid(double extent, int resolution, cdouble alpha0) {
  PhaseGrid g = PhaseGrid::regular(extent, resolution);
  for (Eigen::Index j = 0; j < g.im_axis.size(); ++j)
    for (Eigen::Index i = 0; i < g.re_axis.size(); ++i)
      g.values(i, j) = 2.0 * std::exp(-std::norm(g.point(i, j) - alpha0));
  return g;
}

PhaseGrid thermal_state_grid(double extent, int resolution, double nth) {
  PhaseGrid g = PhaseGrid::regular(extent, resolution);
  const double w = 2.0 * nth + 1.0;
  for (Eigen::Index j = 0; j < g.im_axis.size(); ++j)
    for (Eigen::Index i = 0; i < g.re_axis.size(); ++i)
      g.values(i, j) = 2.0 / w * std::exp(-std::norm(g.point(i, j)) / w);
  return g;
}

}  // namespace lindblad3q
