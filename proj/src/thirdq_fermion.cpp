#include "lindblad3q/thirdq_fermion.hpp"

#include <algorithm>
#include <cmath>

#include "lindblad3q/errors.hpp"

namespace lindblad3q {

bool ThirdQuantizedFermion::u1_symmetric() const {
  const double scale = std::max(1.0, H_eff.norm());
  return K_eff.norm() <= tol::herm * scale && Q.norm() <= tol::herm * scale;
}

ThirdQuantizedFermion third_quantize_fermion(const QuadraticLindbladSpec& spec) {
  if (spec.statistics != Statistics::fermion)
    throw validation_error("third_quantize_fermion expects a fermionic spec");
  require_valid(spec);
  const CMat& L = spec.diss.L;
  const CMat& P = spec.diss.P;
  const CMat& C = spec.diss.C;
  ThirdQuantizedFermion tq;
  tq.H_eff = spec.H - 0.5 * I * (L + P);
  tq.K_eff = spec.K - 0.5 * I * (C + C.transpose());
  tq.N = L - P;
  tq.Q = 0.5 * (C - C.transpose());
  // Pauli exclusion: dissipation dominates noise, i(H_eff - H_eff^dag) >= N.
  const CMat slack = I * (tq.H_eff - tq.H_eff.adjoint()) - tq.N;
  if (min_eigenvalue(slack) < -tol::psd)
    throw validation_error("not a valid fermionic Lindbladian: noise exceeds dissipation");
  return tq;
}

CMat solve_steady_covariance_fermion(const ThirdQuantizedFermion& tq) {
  if (!tq.u1_symmetric())
    throw u1_breaking_error(
        "fermionic steady covariance requires the U(1)-symmetric sector");
  return solve_lyapunov(tq.H_eff, tq.N);
}

FermionSpectralData analyze_fermion(const ThirdQuantizedFermion& tq) {
  FermionSpectralData sd;
  auto sys = biorthogonal_eigensystem(tq.H_eff);
  sd.E = std::move(sys.E);
  sd.PsiR = std::move(sys.PsiR);
  sd.PsiL = std::move(sys.PsiL);
  sd.A_ss = solve_steady_covariance_fermion(tq);
  return sd;
}

std::vector<std::pair<FermionIndex, cdouble>> fermion_spectrum(const CVec& E,
                                                               std::uint64_t cap) {
  const int m = static_cast<int>(E.size());
  if (m >= 63 || (std::uint64_t{1} << (2 * m)) > cap)
    throw cap_exceeded_error("fermion spectrum enumeration exceeds the configured cap");
  std::vector<std::pair<FermionIndex, cdouble>> out;
  out.reserve(std::size_t{1} << (2 * m));
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (2 * m)); ++bits) {
    FermionIndex idx;
    idx.mu.resize(m);
    idx.nu.resize(m);
    cdouble value = 0.0;
    for (int s = 0; s < m; ++s) {
      idx.mu[s] = static_cast<int>((bits >> s) & 1);
      idx.nu[s] = static_cast<int>((bits >> (m + s)) & 1);
      value += E(s) * static_cast<double>(idx.mu[s]);
      value -= std::conj(E(s)) * static_cast<double>(idx.nu[s]);
    }
    out.emplace_back(std::move(idx), value);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const double ia = std::abs(a.second.imag()), ib = std::abs(b.second.imag());
    if (ia != ib) return ia < ib;
    if (a.second.real() != b.second.real()) return a.second.real() < b.second.real();
    if (a.first.mu != b.first.mu) return a.first.mu < b.first.mu;
    return a.first.nu < b.first.nu;
  });
  return out;
}

GrassmannKernelCoeffs fermion_kernel_single(double eps0, double gamma, double nbar,
                                            double t) {
  if (t < 0 || gamma < 0 || nbar < 0 || nbar > 1)
    throw validation_error("fermion_kernel_single requires t >= 0, gamma >= 0, nbar in [0,1]");
  GrassmannKernelCoeffs c;
  c.cK = -(1.0 - 2.0 * nbar) * (1.0 - std::exp(-gamma * t));
  c.cR = std::exp((-I * eps0 - gamma / 2.0) * t);
  c.cA = -std::exp((I * eps0 - gamma / 2.0) * t);
  return c;
}

}  // namespace lindblad3q
