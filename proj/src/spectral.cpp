#include "lindblad3q/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#ifdef LINDBLAD3Q_HAVE_LAPACKE
#include <lapacke.h>
#endif

#include "lindblad3q/errors.hpp"

namespace lindblad3q {

BiorthogonalEigensystem biorthogonal_eigensystem(const CMat& a) {
  const Eigen::Index n = a.rows();
  Eigen::ComplexEigenSolver<CMat> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");

  BiorthogonalEigensystem sys;
  sys.E = es.eigenvalues();
  sys.PsiR = es.eigenvectors();

  // Degenerate clusters: |E_s - E_t| < tol::degenerate. Near-parallel right
  // eigenvectors within a cluster signal a defective (or numerically
  // defective) matrix; measured by the cluster cross-Gram conditioning.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const cdouble ei = sys.E(i), ej = sys.E(j);
    if (ei.real() != ej.real()) return ei.real() < ej.real();
    return ei.imag() < ej.imag();
  });
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n &&
           std::abs(sys.E(order[stop]) - sys.E(order[stop - 1])) < tol::degenerate)
      ++stop;
    if (stop - start > 1) {
      CMat block(n, stop - start);
      for (Eigen::Index k = start; k < stop; ++k)
        block.col(k - start) = sys.PsiR.col(order[k]).normalized();
      Eigen::JacobiSVD<CMat> svd(block);
      const double smin = svd.singularValues().minCoeff();
      const double cond = smin > 0 ? svd.singularValues().maxCoeff() / smin
                                   : std::numeric_limits<double>::infinity();
      sys.cluster_condition = std::max(sys.cluster_condition, cond);
    }
    start = stop;
  }
  sys.defective = !(sys.cluster_condition < tol::defect_cond);

  // Rows of PsiR^-1 are left eigenvectors normalized to PsiL * PsiR = 1.
  // For a defective matrix this inverse is meaningless; flag but still return.
  Eigen::PartialPivLU<CMat> lu(sys.PsiR);
  sys.PsiL = lu.solve(CMat::Identity(n, n));
  return sys;
}

CMat solve_lyapunov(const CMat& a, const CMat& n) {
  const Eigen::Index m = a.rows();
  Eigen::ComplexSchur<CMat> schur(a);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("Schur decomposition failed");
  const CMat& t = schur.matrixT();
  const CMat& u = schur.matrixU();

  for (Eigen::Index i = 0; i < m; ++i)
    if (t(i, i).imag() >= -tol::stab)
      throw instability_error("no steady state: eigenvalue with Im >= 0");

  // T Y - Y T^dag = -i (U^dag N U); solve columns right-to-left, each by a
  // triangular solve against (T - conj(T_jj) I).
  const CMat c = -I * (u.adjoint() * n * u);
  CMat y = CMat::Zero(m, m);
  for (Eigen::Index j = m - 1; j >= 0; --j) {
    CVec rhs = c.col(j);
    for (Eigen::Index k = j + 1; k < m; ++k) rhs += y.col(k) * std::conj(t(j, k));
    CMat lhs = t;
    lhs.diagonal().array() -= std::conj(t(j, j));
    y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  CMat x = u * y * u.adjoint();
  return (x + x.adjoint()) / 2.0;
}

double lyapunov_residual(const CMat& a, const CMat& x, const CMat& n) {
  return (a * x - x * a.adjoint() + I * n).norm();
}

CMat noise_integral(const CMat& a, const CMat& n, double t) {
  const Eigen::Index m = a.rows();
  if (t == 0.0) return CMat::Zero(m, m);
  // Gramian doubling: F(2t) = F(t) + e^{-iAt} F(t) e^{iA^dag t}. The base case
  // uses the block-exponential identity at an argument small enough that the
  // growing adjoint block cannot wash out the integral.
  int doublings = 0;
  double base = t;
  const double scale = a.norm();
  while (scale * base > 1.0 && doublings < 80) {
    base /= 2.0;
    ++doublings;
  }
  CMat big = CMat::Zero(2 * m, 2 * m);
  big.topLeftCorner(m, m) = I * a;
  big.topRightCorner(m, m) = n;
  big.bottomRightCorner(m, m) = I * a.adjoint();
  CMat e = (big * base).exp();
  CMat r = (-I * a * base).exp();
  CMat f = r * e.topRightCorner(m, m);
  f = (f + f.adjoint()).eval() / 2.0;
  for (int k = 0; k < doublings; ++k) {
    const CMat shifted = r * f * r.adjoint();
    f += shifted;
    f = (f + f.adjoint()).eval() / 2.0;
    r = (r * r).eval();
  }
  return f;
}

bool all_decaying(const CVec& eigvals, double margin) {
  for (Eigen::Index i = 0; i < eigvals.size(); ++i)
    if (eigvals(i).imag() >= -margin) return false;
  return true;
}

bool none_growing(const CVec& eigvals, double margin) {
  for (Eigen::Index i = 0; i < eigvals.size(); ++i)
    if (eigvals(i).imag() > margin) return false;
  return true;
}

#ifdef LINDBLAD3Q_HAVE_LAPACKE
namespace {
CVec zgeev(const CMat& a, CMat* vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  CMat work = a;
  CVec w(n);
  CMat vr;
  if (vectors) vr.resize(n, n);
  lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
      vectors ? reinterpret_cast<lapack_complex_double*>(vr.data()) : nullptr,
      vectors ? n : 1);
  if (info != 0) throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
  if (vectors) *vectors = std::move(vr);
  return w;
}
}  // namespace

CVec dense_eigenvalues(const CMat& a) { return zgeev(a, nullptr); }
CVec dense_eigenvalues(const CMat& a, CMat& vectors) { return zgeev(a, &vectors); }
#else
CVec dense_eigenvalues(const CMat& a) {
  Eigen::ComplexEigenSolver<CMat> es(a, false);
  return es.eigenvalues();
}
CVec dense_eigenvalues(const CMat& a, CMat& vectors) {
  Eigen::ComplexEigenSolver<CMat> es(a, true);
  vectors = es.eigenvectors();
  return es.eigenvalues();
}
#endif

}  // namespace lindblad3q
