#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lindblad3q/model.hpp"
#include "lindblad3q/spectral.hpp"
#include "lindblad3q/types.hpp"

namespace lindblad3q {

// Fermionic dynamics/noise split:
//   H_eff = H - i/2 (L + P)   K_eff = K - i/2 (C + C^T)
//   N     = L - P             Q     = (C - C^T)/2
struct ThirdQuantizedFermion {
  CMat H_eff, K_eff, N, Q;
  bool u1_symmetric() const;
};

ThirdQuantizedFermion third_quantize_fermion(const QuadraticLindbladSpec& spec);

// Steady state of i dA/dt = H_eff A - A H_eff^dag + iN; entries <[c_m, c_n^dag]>.
CMat solve_steady_covariance_fermion(const ThirdQuantizedFermion& tq);

struct FermionSpectralData {
  CVec E;
  CMat PsiR, PsiL;
  CMat A_ss;
};

FermionSpectralData analyze_fermion(const ThirdQuantizedFermion& tq);

// All 4^M eigenvalues E_{mu,nu} = sum_s (E_s mu_s - conj(E_s) nu_s) with
// occupation bits mu_s, nu_s in {0,1}; bosonic sort order.
struct FermionIndex {
  std::vector<int> mu, nu;  // entries 0/1
};

std::vector<std::pair<FermionIndex, cdouble>> fermion_spectrum(
    const CVec& E, std::uint64_t cap = 2'000'000);

// Exponent coefficients of the single-mode Grassmann kernel:
//   K = exp(cK psibar1' psi2' + cR psibar1' psi1 + cA psibar2 psi2').
struct GrassmannKernelCoeffs {
  cdouble cK, cR, cA;
};

GrassmannKernelCoeffs fermion_kernel_single(double eps0, double gamma, double nbar,
                                            double t);

}  // namespace lindblad3q
