#pragma once

#include "lindblad3q/types.hpp"

namespace lindblad3q {

// Bi-orthonormal eigensystem of a non-Hermitian matrix A:
//   A * PsiR = PsiR * diag(E),  PsiL * A = diag(E) * PsiL,  PsiL * PsiR = 1.
// Right eigenvectors are columns, left eigenvectors are rows.
struct BiorthogonalEigensystem {
  CVec E;
  CMat PsiR;
  CMat PsiL;
  bool defective = false;
  double cluster_condition = 1.0;  // worst conditioning over degenerate clusters
};

BiorthogonalEigensystem biorthogonal_eigensystem(const CMat& a);

// Solves A X - X A^dag + iN = 0 by Schur back-substitution (Bartels-Stewart).
// Valid for defective A; requires Im(eig A) < 0 for uniqueness.
CMat solve_lyapunov(const CMat& a, const CMat& n);

double lyapunov_residual(const CMat& a, const CMat& x, const CMat& n);

// integral_0^t exp(-i a s) n exp(i a^dag s) ds, via a block matrix exponential.
// Well defined for any t >= 0, including marginal or defective a.
CMat noise_integral(const CMat& a, const CMat& n, double t);

bool all_decaying(const CVec& eigvals, double margin = tol::stab);
bool none_growing(const CVec& eigvals, double margin = tol::stab);

// Dense non-symmetric eigenvalues (LAPACK zgeev when available, else Eigen).
CVec dense_eigenvalues(const CMat& a);
// Same, also returning right eigenvectors as columns.
CVec dense_eigenvalues(const CMat& a, CMat& vectors);

}  // namespace lindblad3q
