#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "lindblad3q/model.hpp"
#include "lindblad3q/phasespace.hpp"
#include "lindblad3q/types.hpp"

namespace lindblad3q {

using SpMat = Eigen::SparseMatrix<cdouble>;

struct WarningSink {
  std::vector<std::string> messages;
  void add(std::string m) { messages.push_back(std::move(m)); }
};

// Dense brute-force Liouvillian in a truncated bosonic Fock space or the
// exact fermionic space, in the convention i d(rho)/dt = L rho. Stored as a
// term list coeff * left rho right; the D^2 x D^2 matrix is materialized on
// demand for spectra.
class FockLiouvillian {
 public:
  struct Term {
    SpMat left, right;
    cdouble coeff;
  };

  Statistics statistics = Statistics::boson;
  std::vector<int> dims;
  int D = 0;
  std::vector<Term> terms;

  CMat apply(const CMat& rho) const;  // L rho

  // Column-stacked superoperator matrix: vec(A rho B) = (B^T kron A) vec(rho).
  // Capped at D <= 64 (the matrix is D^2 x D^2).
  CMat dense(int dense_cap = 64) const;

  // residual of the trace functional: || sum_k coeff_k B_k A_k ||
  double trace_functional_residual() const;

  double norm_estimate() const;  // spectral-radius estimate, cached

 private:
  mutable double norm_cache_ = -1.0;
};

// dims: per-mode Fock cutoffs; product capped (default 256).
FockLiouvillian build_boson_liouvillian(const QuadraticLindbladSpec& spec,
                                        const std::vector<int>& dims, int cap = 256);
FockLiouvillian build_boson_liouvillian(const KerrModel& model, int cutoff, int cap = 256);
// Exact 2^M-dimensional fermionic space via Jordan-Wigner strings; M <= 8.
FockLiouvillian build_fermion_liouvillian(const QuadraticLindbladSpec& spec);

// vec(rho(t)) = expm(-i Lmat t) vec(rho0), evaluated as a scaled Taylor
// action of the term list (never materializes the dense superoperator).
CMat evolve_density(const FockLiouvillian& lio, const CMat& rho0, double t);

CVec liouvillian_eigenvalues(const FockLiouvillian& lio);
// Right eigenvector of the eigenvalue closest to zero, reshaped, Hermitized
// and trace-normalized: the numeric steady state.
CMat steady_state_numeric(const FockLiouvillian& lio);

// Bosonic mode operators on the tensor-product space (mode 0 slowest index).
SpMat mode_annihilation(const std::vector<int>& dims, int mode);
SpMat mode_number(const std::vector<int>& dims, int mode);
// Jordan-Wigner fermionic annihilation on the 2^M space.
SpMat fermion_annihilation(int modes, int mode);
// diag(+-1): e^{i pi N} over all modes.
CMat parity_operator(const std::vector<int>& dims);
// Single-mode displacement exp(beta a^dag - beta* a) in a cutoff space.
CMat displacement_operator(cdouble beta, int cutoff);

// Symmetrized covariance S_mn = <{a_m, a_n^dag}> of a bosonic state.
CMat boson_covariance(const CMat& rho, const std::vector<int>& dims);
// Anti-symmetrized covariance A_mn = <[c_m, c_n^dag]> of a fermionic state.
CMat fermion_covariance(const CMat& rho, int modes);
// <a_mode> (bosons) or <c_mode> (fermions, no JW phase needed for M = 1).
cdouble mean_amplitude(const CMat& rho, const SpMat& op);

// Single-mode numeric phase-space functions in the sqrt2-scaled convention:
//   W(alpha)  = 2 Tr(parity D^dag(alpha/sqrt2) rho D(alpha/sqrt2))
//   Lambda(eta) = Tr(D^dag(sqrt2 eta) rho)
// Warns when the displaced support approaches the cutoff.
double wigner_numeric(const CMat& rho, cdouble alpha, WarningSink* warn = nullptr);
// Same trace without taking the real part: the Wigner transform of a
// non-Hermitian operator (e.g. a right eigenvector) is complex.
cdouble wigner_numeric_complex(const CMat& op, cdouble alpha, WarningSink* warn = nullptr);
cdouble characteristic_numeric(const CMat& rho, cdouble eta, WarningSink* warn = nullptr);
// Fills grid.values with wigner_numeric(rho, point); axis displacement
// factors are cached, much faster than per-point calls.
void wigner_numeric_grid(const CMat& rho, PhaseGrid& grid, WarningSink* warn = nullptr);

enum class LadderKind { a_cl, a_q, a_cl_dag, a_q_dag };

// (1/sqrt2) {a_m, rho} / [a_m, rho] and the daggered versions. Wants
// truncation headroom: the top two Fock levels of the mode empty beyond
// 1e-12. A violation throws, or is reported to `warn` when one is given
// (exact algebra like the truncated identity or parity stays usable).
CMat apply_superoperator_ladder(const CMat& rho, LadderKind kind, int mode,
                                const std::vector<int>& dims,
                                WarningSink* warn = nullptr);

// States in a single-mode cutoff space.
CMat coherent_state(cdouble alpha0, int cutoff, WarningSink* warn = nullptr);
CMat fock_state(int n, int cutoff);
CMat thermal_state(double nth, int cutoff);

}  // namespace lindblad3q
