#include "lindblad3q/oracle.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "lindblad3q/errors.hpp"
#include "lindblad3q/spectral.hpp"

namespace lindblad3q {

namespace {

SpMat identity_sp(int d) {
  SpMat id(d, d);
  id.setIdentity();
  return id;
}

SpMat kron_sp(const SpMat& a, const SpMat& b) {
  SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<cdouble>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()) * b.nonZeros());
  for (int ja = 0; ja < a.outerSize(); ++ja)
    for (SpMat::InnerIterator ita(a, ja); ita; ++ita)
      for (int jb = 0; jb < b.outerSize(); ++jb)
        for (SpMat::InnerIterator itb(b, jb); itb; ++itb)
          trip.emplace_back(ita.row() * b.rows() + itb.row(),
                            ita.col() * b.cols() + itb.col(), ita.value() * itb.value());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat single_mode_annihilation(int d) {
  SpMat a(d, d);
  std::vector<Eigen::Triplet<cdouble>> trip;
  for (int n = 1; n < d; ++n) trip.emplace_back(n - 1, n, std::sqrt(double(n)));
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

int dims_product(const std::vector<int>& dims) {
  int d = 1;
  for (int v : dims) {
    if (v < 2) throw validation_error("every Fock cutoff must be >= 2");
    d *= v;
  }
  return d;
}

}  // namespace

SpMat mode_annihilation(const std::vector<int>& dims, int mode) {
  if (mode < 0 || mode >= static_cast<int>(dims.size()))
    throw validation_error("mode index out of range");
  SpMat op = identity_sp(1);
  for (int m = 0; m < static_cast<int>(dims.size()); ++m)
    op = kron_sp(op, m == mode ? single_mode_annihilation(dims[m]) : identity_sp(dims[m]));
  return op;
}

SpMat mode_number(const std::vector<int>& dims, int mode) {
  SpMat a = mode_annihilation(dims, mode);
  return SpMat(a.adjoint()) * a;
}

SpMat fermion_annihilation(int modes, int mode) {
  if (mode < 0 || mode >= modes) throw validation_error("mode index out of range");
  SpMat z(2, 2), sigma(2, 2);
  z.insert(0, 0) = 1.0;
  z.insert(1, 1) = -1.0;
  sigma.insert(0, 1) = 1.0;  // c |1> = |0>
  SpMat op = identity_sp(1);
  for (int m = 0; m < modes; ++m) {
    if (m < mode)
      op = kron_sp(op, z);
    else if (m == mode)
      op = kron_sp(op, sigma);
    else
      op = kron_sp(op, identity_sp(2));
  }
  return op;
}

CMat parity_operator(const std::vector<int>& dims) {
  const int d = dims_product(dims);
  CMat p = CMat::Identity(d, d);
  for (int m = 0; m < static_cast<int>(dims.size()); ++m) {
    SpMat n = mode_number(dims, m);
    for (int k = 0; k < d; ++k) {
      const double nk = std::real(n.coeff(k, k));
      if (static_cast<long long>(std::llround(nk)) % 2 != 0) p(k, k) *= -1.0;
    }
  }
  return p;
}

CMat displacement_operator(cdouble beta, int cutoff) {
  SpMat a = single_mode_annihilation(cutoff);
  CMat gen = beta * CMat(a.adjoint()) - std::conj(beta) * CMat(a);
  return gen.exp();
}

CMat FockLiouvillian::apply(const CMat& rho) const {
  CMat out = CMat::Zero(D, D);
  for (const auto& t : terms) out += t.coeff * (t.left * rho * t.right);
  return out;
}

CMat FockLiouvillian::dense(int dense_cap) const {
  if (D > dense_cap)
    throw cap_exceeded_error("dense superoperator capped at D <= " +
                             std::to_string(dense_cap));
  const long n = static_cast<long>(D) * D;
  CMat lmat = CMat::Zero(n, n);
  // vec is column-stacked: (A rho B)(i,j) contributes at row i + D j from
  // column k + D l with weight A(i,k) B(l,j).
  for (const auto& t : terms)
    for (int ka = 0; ka < t.left.outerSize(); ++ka)
      for (SpMat::InnerIterator ita(t.left, ka); ita; ++ita)
        for (int jb = 0; jb < t.right.outerSize(); ++jb)
          for (SpMat::InnerIterator itb(t.right, jb); itb; ++itb)
            lmat(ita.row() + static_cast<long>(D) * itb.col(),
                 ita.col() + static_cast<long>(D) * itb.row()) +=
                t.coeff * ita.value() * itb.value();
  return lmat;
}

double FockLiouvillian::trace_functional_residual() const {
  // Tr(L rho) = Tr((sum_k coeff_k B_k A_k) rho) for all rho.
  CMat z = CMat::Zero(D, D);
  for (const auto& t : terms) z += t.coeff * CMat(t.right * t.left);
  return z.cwiseAbs().maxCoeff();
}

double FockLiouvillian::norm_estimate() const {
  if (norm_cache_ > 0) return norm_cache_;
  CMat v(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i)
      v(i, j) = cdouble(std::sin(1.3 * i + 0.7 * j + 0.1), std::cos(2.1 * i - 0.3 * j));
  v /= v.norm();
  double est = 1.0;
  for (int it = 0; it < 20; ++it) {
    CMat w = apply(v);
    const double n = w.norm();
    if (n == 0) break;
    est = n;
    v = w / n;
  }
  norm_cache_ = 1.2 * est + 1.0;
  return norm_cache_;
}

namespace {

void add_commutator(FockLiouvillian& lio, const SpMat& h) {
  const SpMat id = identity_sp(lio.D);
  lio.terms.push_back({h, id, 1.0});
  lio.terms.push_back({id, h, -1.0});
}

// i D[X] rho = i (X rho X^dag - {X^dag X, rho}/2)
void add_dissipator(FockLiouvillian& lio, const SpMat& x, cdouble rate = 1.0) {
  const SpMat id = identity_sp(lio.D);
  SpMat xdx = SpMat(x.adjoint()) * x;
  lio.terms.push_back({x, SpMat(x.adjoint()), I * rate});
  lio.terms.push_back({xdx, id, -0.5 * I * rate});
  lio.terms.push_back({id, xdx, -0.5 * I * rate});
}

// The (L, P, C) sandwich structure, valid for bosons and fermions alike.
void add_lpc_terms(FockLiouvillian& lio, const std::vector<SpMat>& ops,
                   const DissipatorMatrices& d) {
  const int m = static_cast<int>(ops.size());
  const SpMat id = identity_sp(lio.D);
  std::vector<SpMat> dag(ops.size());
  for (int k = 0; k < m; ++k) dag[k] = SpMat(ops[k].adjoint());

  SpMat anti(lio.D, lio.D);
  for (int n = 0; n < m; ++n)
    for (int k = 0; k < m; ++k) {
      if (d.L(n, k) != 0.0) {
        lio.terms.push_back({ops[k], dag[n], I * d.L(n, k)});
        anti = anti + SpMat(d.L(n, k) * (dag[n] * ops[k]));
      }
      if (d.P(n, k) != 0.0) {
        lio.terms.push_back({dag[n], ops[k], I * d.P(n, k)});
        anti = anti + SpMat(d.P(n, k) * (ops[k] * dag[n]));
      }
      if (d.C(n, k) != 0.0) {
        lio.terms.push_back({dag[k], dag[n], I * d.C(n, k)});
        anti = anti + SpMat(d.C(n, k) * (dag[n] * dag[k]));
      }
      if (std::conj(d.C(n, k)) != 0.0) {
        lio.terms.push_back({ops[n], ops[k], I * std::conj(d.C(n, k))});
        anti = anti + SpMat(std::conj(d.C(n, k)) * (ops[k] * ops[n]));
      }
    }
  lio.terms.push_back({anti, id, -0.5 * I});
  lio.terms.push_back({id, anti, -0.5 * I});
}

SpMat quadratic_hamiltonian(const std::vector<SpMat>& ops, const CMat& h, const CMat& k) {
  const int m = static_cast<int>(ops.size());
  SpMat hop(ops[0].rows(), ops[0].cols());
  for (int n = 0; n < m; ++n)
    for (int j = 0; j < m; ++j) {
      if (h(n, j) != 0.0) hop = hop + SpMat(h(n, j) * (SpMat(ops[n].adjoint()) * ops[j]));
      if (k(n, j) != 0.0)
        hop = hop + SpMat(0.5 * k(n, j) * (SpMat(ops[n].adjoint()) * SpMat(ops[j].adjoint())));
      if (std::conj(k(n, j)) != 0.0)
        hop = hop + SpMat(0.5 * std::conj(k(n, j)) * (ops[j] * ops[n]));
    }
  return hop;
}

}  // namespace

FockLiouvillian build_boson_liouvillian(const QuadraticLindbladSpec& spec,
                                        const std::vector<int>& dims, int cap) {
  if (spec.statistics != Statistics::boson)
    throw validation_error("bosonic oracle expects a bosonic spec");
  if (static_cast<int>(dims.size()) != spec.modes)
    throw validation_error("one Fock cutoff per mode required");
  FockLiouvillian lio;
  lio.statistics = Statistics::boson;
  lio.dims = dims;
  lio.D = dims_product(dims);
  if (lio.D > cap) throw cap_exceeded_error("oracle dimension exceeds the cap");

  std::vector<SpMat> a(spec.modes);
  for (int m = 0; m < spec.modes; ++m) a[m] = mode_annihilation(dims, m);

  add_commutator(lio, quadratic_hamiltonian(a, spec.H, spec.K));
  if (spec.has_bath_couplings) {
    for (Eigen::Index b = 0; b < spec.l.rows(); ++b) {
      SpMat x(lio.D, lio.D);
      for (int m = 0; m < spec.modes; ++m)
        x = x + SpMat(spec.l(b, m) * a[m]) +
            SpMat(std::conj(spec.p(b, m)) * SpMat(a[m].adjoint()));
      add_dissipator(lio, x);
    }
  } else {
    add_lpc_terms(lio, a, spec.diss);
  }
  return lio;
}

FockLiouvillian build_boson_liouvillian(const KerrModel& model, int cutoff, int cap) {
  FockLiouvillian lio;
  lio.statistics = Statistics::boson;
  lio.dims = {cutoff};
  lio.D = cutoff;
  if (lio.D > cap) throw cap_exceeded_error("oracle dimension exceeds the cap");
  if (cutoff < 2) throw validation_error("cutoff must be >= 2");

  SpMat a = single_mode_annihilation(cutoff);
  SpMat ad = SpMat(a.adjoint());
  SpMat n = SpMat(ad * a);
  SpMat hop = SpMat(model.omega0 * n) + SpMat(0.5 * model.U * (SpMat(ad * ad) * SpMat(a * a)));
  add_commutator(lio, hop);
  if (model.kappa > 0) {
    add_dissipator(lio, a, model.kappa * (model.nth + 1.0));
    if (model.nth > 0) add_dissipator(lio, ad, model.kappa * model.nth);
  }
  return lio;
}

FockLiouvillian build_fermion_liouvillian(const QuadraticLindbladSpec& spec) {
  if (spec.statistics != Statistics::fermion)
    throw validation_error("fermionic oracle expects a fermionic spec");
  if (spec.modes > 8) throw cap_exceeded_error("fermionic oracle capped at M <= 8");
  FockLiouvillian lio;
  lio.statistics = Statistics::fermion;
  lio.dims.assign(spec.modes, 2);
  lio.D = 1 << spec.modes;

  std::vector<SpMat> c(spec.modes);
  for (int m = 0; m < spec.modes; ++m) c[m] = fermion_annihilation(spec.modes, m);

  add_commutator(lio, quadratic_hamiltonian(c, spec.H, spec.K));
  if (spec.has_bath_couplings) {
    for (Eigen::Index b = 0; b < spec.l.rows(); ++b) {
      SpMat x(lio.D, lio.D);
      for (int m = 0; m < spec.modes; ++m)
        x = x + SpMat(spec.l(b, m) * c[m]) +
            SpMat(std::conj(spec.p(b, m)) * SpMat(c[m].adjoint()));
      add_dissipator(lio, x);
    }
  } else {
    add_lpc_terms(lio, c, spec.diss);
  }
  return lio;
}

CMat evolve_density(const FockLiouvillian& lio, const CMat& rho0, double t) {
  if (t < 0) throw validation_error("evolve_density requires t >= 0");
  if (rho0.rows() != lio.D || rho0.cols() != lio.D)
    throw validation_error("state dimension does not match the Liouvillian");
  if (t == 0) return rho0;

  int steps = std::max(1, static_cast<int>(std::ceil(lio.norm_estimate() * t / 5.0)));
  for (int attempt = 0; attempt < 5; ++attempt) {
    CMat rho = rho0;
    const cdouble h = cdouble(0.0, -t / steps);
    bool ok = true;
    for (int s = 0; s < steps && ok; ++s) {
      CMat term = rho;
      CMat acc = rho;
      ok = false;
      for (int k = 1; k <= 120; ++k) {
        term = lio.apply(term) * (h / static_cast<double>(k));
        acc += term;
        if (term.norm() <= 1e-16 * acc.norm()) {
          ok = true;
          break;
        }
      }
      rho = acc;
    }
    if (ok) return rho;
    steps *= 2;
  }
  throw std::runtime_error("expm action did not converge");
}

CVec liouvillian_eigenvalues(const FockLiouvillian& lio) {
  return dense_eigenvalues(lio.dense());
}

CMat steady_state_numeric(const FockLiouvillian& lio) {
  CMat lmat = lio.dense();
  CMat vectors;
  CVec vals = dense_eigenvalues(lmat, vectors);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < vals.size(); ++k)
    if (std::abs(vals(k)) < std::abs(vals(best))) best = k;
  // Polish the null vector by inverse iteration: eigenvectors of a strongly
  // non-normal superoperator can come back with sizeable residuals.
  CVec v = vectors.col(best);
  CMat shifted = lmat;
  shifted.diagonal().array() -= 1e-13;
  Eigen::PartialPivLU<CMat> lu(shifted);
  for (int it = 0; it < 3; ++it) {
    const double residual = (lmat * v).norm();
    if (residual < 1e-12) break;
    v = lu.solve(v);
    v /= v.norm();
  }
  CMat rho = Eigen::Map<const CMat>(v.data(), lio.D, lio.D);
  rho = (rho + rho.adjoint()) / 2.0;
  const cdouble tr = rho.trace();
  if (std::abs(tr) < 1e-14)
    throw std::runtime_error("null vector has vanishing trace; not a state");
  return rho / tr;
}

CMat boson_covariance(const CMat& rho, const std::vector<int>& dims) {
  const int m = static_cast<int>(dims.size());
  std::vector<SpMat> a(m);
  for (int k = 0; k < m; ++k) a[k] = mode_annihilation(dims, k);
  CMat s(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      CMat op = CMat(a[i] * SpMat(a[j].adjoint())) + CMat(SpMat(a[j].adjoint()) * a[i]);
      s(i, j) = (op * rho).trace();
    }
  return s;
}

CMat fermion_covariance(const CMat& rho, int modes) {
  std::vector<SpMat> c(modes);
  for (int k = 0; k < modes; ++k) c[k] = fermion_annihilation(modes, k);
  CMat s(modes, modes);
  for (int i = 0; i < modes; ++i)
    for (int j = 0; j < modes; ++j) {
      CMat op = CMat(c[i] * SpMat(c[j].adjoint())) - CMat(SpMat(c[j].adjoint()) * c[i]);
      s(i, j) = (op * rho).trace();
    }
  return s;
}

cdouble mean_amplitude(const CMat& rho, const SpMat& op) { return (op * rho).trace(); }

namespace {

void warn_envelope(int cutoff, double displaced_occupation, WarningSink* warn) {
  if (warn && displaced_occupation > 0.5 * cutoff)
    warn->add("displaced support (<n> ~ " + std::to_string(displaced_occupation) +
              ") approaches the cutoff " + std::to_string(cutoff));
}

}  // namespace

cdouble wigner_numeric_complex(const CMat& op, cdouble alpha, WarningSink* warn) {
  const int d = static_cast<int>(op.rows());
  warn_envelope(d, std::norm(alpha) / 2.0, warn);
  const CMat disp = displacement_operator(alpha / std::sqrt(2.0), d);
  const CMat shifted = disp.adjoint() * op * disp;
  cdouble w = 0.0;
  for (int n = 0; n < d; ++n) w += (n % 2 == 0 ? 2.0 : -2.0) * shifted(n, n);
  return w;
}

double wigner_numeric(const CMat& rho, cdouble alpha, WarningSink* warn) {
  return wigner_numeric_complex(rho, alpha, warn).real();
}

cdouble characteristic_numeric(const CMat& rho, cdouble eta, WarningSink* warn) {
  const int d = static_cast<int>(rho.rows());
  warn_envelope(d, 2.0 * std::norm(eta), warn);
  const CMat disp = displacement_operator(std::sqrt(2.0) * eta, d);
  return (disp.adjoint() * rho).trace();
}

void wigner_numeric_grid(const CMat& rho, PhaseGrid& grid, WarningSink* warn) {
  const int d = static_cast<int>(rho.rows());
  const SpMat a = single_mode_annihilation(d);
  // D(x + iy) = e^{ixy} D(x) D(iy); the phases cancel inside the parity trace.
  // Axis displacements via one Hermitian eigendecomposition per quadrature.
  const CMat gen_x = I * (CMat(SpMat(a.adjoint())) - CMat(a));  // Hermitian
  const CMat gen_y = CMat(SpMat(a.adjoint())) + CMat(a);        // Hermitian
  Eigen::SelfAdjointEigenSolver<CMat> ex(gen_x), ey(gen_y);

  double max_r2 = 0.0;
  for (Eigen::Index i = 0; i < grid.re_axis.size(); ++i)
    for (Eigen::Index j = 0; j < grid.im_axis.size(); ++j)
      max_r2 = std::max(max_r2, std::norm(grid.point(i, j)));
  warn_envelope(d, max_r2 / 2.0, warn);

  auto axis_disp = [&](const Eigen::SelfAdjointEigenSolver<CMat>& es, double coef) {
    // exp(-i coef G) for Hermitian G
    CVec ph(d);
    for (int k = 0; k < d; ++k) ph(k) = std::exp(cdouble(0.0, -coef * es.eigenvalues()(k)));
    return CMat(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint());
  };

  const CMat par = parity_operator({d});
  std::vector<CMat> q_right(grid.im_axis.size());
  for (Eigen::Index j = 0; j < grid.im_axis.size(); ++j) {
    // D(iy) = exp(iy(a^dag + a)) = exp(-i(-y)gen_y)
    const CMat dy = axis_disp(ey, -grid.im_axis(j) / std::sqrt(2.0));
    q_right[j] = dy * par * dy.adjoint();
  }
  for (Eigen::Index i = 0; i < grid.re_axis.size(); ++i) {
    // D(x) = exp(x(a^dag - a)) = exp(-i(-x)gen_x)... with gen_x = i(a^dag - a):
    // exp(x(a^dag - a)) = exp(-i x gen_x)
    const CMat dx = axis_disp(ex, grid.re_axis(i) / std::sqrt(2.0));
    const CMat mi = dx.adjoint() * rho * dx;
    for (Eigen::Index j = 0; j < grid.im_axis.size(); ++j)
      grid.values(i, j) = 2.0 * (q_right[j].transpose().cwiseProduct(mi)).sum().real();
  }
}

CMat apply_superoperator_ladder(const CMat& rho, LadderKind kind, int mode,
                                const std::vector<int>& dims, WarningSink* warn) {
  const int d = dims_product(dims);
  if (rho.rows() != d) throw validation_error("state does not match dims");
  // headroom: the top two Fock levels of the target mode must be unoccupied
  const SpMat num = mode_number(dims, mode);
  double top = 0.0;
  for (int k = 0; k < d; ++k) {
    const double nk = std::real(num.coeff(k, k));
    if (nk >= dims[mode] - 2)
      top = std::max({top, rho.row(k).cwiseAbs().maxCoeff(),
                      rho.col(k).cwiseAbs().maxCoeff()});
  }
  if (top > 1e-12) {
    const std::string msg =
        "truncation headroom violated: top Fock levels occupied (" + std::to_string(top) +
        ")";
    if (warn)
      warn->add(msg);
    else
      throw validation_error(msg);
  }
  const SpMat a = mode_annihilation(dims, mode);
  const double s = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case LadderKind::a_cl: return s * (a * rho + rho * a);
    case LadderKind::a_q: return s * (a * rho - rho * a);
    case LadderKind::a_cl_dag: return s * (SpMat(a.adjoint()) * rho + rho * SpMat(a.adjoint()));
    default: return s * (SpMat(a.adjoint()) * rho - rho * SpMat(a.adjoint()));
  }
}

CMat coherent_state(cdouble alpha0, int cutoff, WarningSink* warn) {
  if (warn && std::norm(alpha0) > 0.5 * cutoff)
    warn->add("coherent amplitude close to the cutoff");
  CVec psi(cutoff);
  cdouble amp = 1.0;
  for (int n = 0; n < cutoff; ++n) {
    if (n > 0) amp *= alpha0 / std::sqrt(double(n));
    psi(n) = amp;
  }
  psi *= std::exp(-std::norm(alpha0) / 2.0);
  psi /= psi.norm();  // renormalize the truncation remainder
  return psi * psi.adjoint();
}

CMat fock_state(int n, int cutoff) {
  if (n < 0 || n >= cutoff) throw validation_error("Fock index outside the cutoff");
  CMat rho = CMat::Zero(cutoff, cutoff);
  rho(n, n) = 1.0;
  return rho;
}

CMat thermal_state(double nth, int cutoff) {
  if (nth < 0) throw validation_error("nth must be >= 0");
  CMat rho = CMat::Zero(cutoff, cutoff);
  double w = 1.0, total = 0.0;
  const double q = nth / (nth + 1.0);
  for (int n = 0; n < cutoff; ++n) {
    rho(n, n) = w;
    total += w;
    w *= q;
  }
  rho /= total;
  return rho;
}

}  // namespace lindblad3q
