#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lindblad3q {

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr cdouble I{0.0, 1.0};

// Shared numerical tolerances. Matrix-norm residuals unless stated otherwise.
namespace tol {
inline constexpr double herm = 1e-10;        // Hermiticity / (anti)symmetry residual
inline constexpr double psd = 1e-10;         // positive semi-definiteness slack
inline constexpr double eig = 1e-10;         // bi-orthonormality residual
inline constexpr double lyap = 1e-10;        // Lyapunov residual (Frobenius)
inline constexpr double stab = 1e-12;        // stability margin on Im(E)
inline constexpr double degenerate = 1e-8;   // eigenvalue cluster radius
inline constexpr double defect_cond = 1e8;   // cluster conditioning => defective
}  // namespace tol

inline bool is_hermitian(const CMat& a, double t = tol::herm) {
  return (a - a.adjoint()).norm() <= t * std::max(1.0, a.norm());
}

// Smallest eigenvalue of the Hermitian part; input assumed Hermitian.
inline double min_eigenvalue(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es((a + a.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

}  // namespace lindblad3q
