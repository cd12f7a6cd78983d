#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lindblad3q/model.hpp"
#include "lindblad3q/spectral.hpp"
#include "lindblad3q/types.hpp"

namespace lindblad3q {

// Dynamics/noise split of a bosonic quadratic Lindbladian:
//   H_eff = H - i/2 (L - P)   K_eff = K - i/2 (C - C^T)
//   N     = L + P             Q     = (C + C^T)/2
struct ThirdQuantizedBoson {
  CMat H_eff, K_eff, N, Q;
  bool u1_symmetric() const;
};

ThirdQuantizedBoson third_quantize(const QuadraticLindbladSpec& spec);

// Spectral data of H_eff plus the steady-state symmetrized covariance.
struct SpectralData {
  CVec E;
  CMat PsiR;  // right eigenvectors as columns
  CMat PsiL;  // left eigenvectors as rows, PsiL * PsiR = 1
  CMat S_ss;
};

SpectralData analyze_boson(const ThirdQuantizedBoson& tq);

// Steady state of i dS/dt = H_eff S - S H_eff^dag + iN. Requires U(1) symmetry
// and strictly decaying H_eff; tolerates a defective H_eff.
CMat solve_steady_covariance(const ThirdQuantizedBoson& tq);

struct ExcitationIndex {
  std::vector<int> mu, nu;
  int total() const;
};

// E_{mu,nu} = sum_s (E_s mu_s - conj(E_s) nu_s).
cdouble liouvillian_eigenvalue(const CVec& E, const ExcitationIndex& idx);

// All indices with sum(mu)+sum(nu) <= max_excitations, sorted by ascending
// |Im|, ties by ascending Re, then lexicographic (mu, nu).
std::vector<std::pair<ExcitationIndex, cdouble>> enumerate_spectrum(
    const CVec& E, int max_excitations, std::uint64_t cap = 2'000'000);

// S(t) = e^{-i H_eff t} S0 e^{i H_eff^dag t} + noise integral. Marginal modes
// are allowed; growing ones are not.
CMat evolve_covariance(const ThirdQuantizedBoson& tq, const CMat& S0, double t);

// Mode-space coefficient table of the quasiparticle superoperators. Row s of
// `cl_on_cl`/`cl_on_q` gives the coefficients of a_cl(s) on the bare a_cl,m /
// a_q,n; column s of `qdag_on_qdag` those of a_q^dag(s); etc.
struct QuasiparticleCoefficients {
  CMat cl_on_cl;        // PsiL
  CMat cl_on_q;         // PsiL * S_ss
  CMat cldag_on_cldag;  // conj(PsiL)
  CMat cldag_on_qdag;   // -conj(PsiL * S_ss)
  CMat q_on_q;          // conj(PsiR), columns
  CMat qdag_on_qdag;    // PsiR, columns
  // [a_cl(s), a_q^dag(s')] and [a_cl^dag(s), -a_q(s')]; both = identity.
  CMat commutator() const;
  CMat commutator_dagger() const;
};

QuasiparticleCoefficients quasiparticle_coefficients(const SpectralData& sd);

// Mixed phase-space propagator <<eta_q| e^{-iLt} |alpha_cl>> for the
// U(1)-symmetric sector:
//   K = exp(-eta^dag S_int eta + eta^dag R alpha - alpha^dag R^dag eta),
// R = e^{-i H_eff t}, S_int the noise integral up to t.
cdouble gaussian_kernel(const ThirdQuantizedBoson& tq, const CVec& eta, const CVec& alpha,
                        double t);

}  // namespace lindblad3q
