#include "lindblad3q/thirdq_boson.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <unsupported/Eigen/MatrixFunctions>

#include "lindblad3q/errors.hpp"

namespace lindblad3q {

bool ThirdQuantizedBoson::u1_symmetric() const {
  const double scale = std::max(1.0, H_eff.norm());
  return K_eff.norm() <= tol::herm * scale && Q.norm() <= tol::herm * scale;
}

ThirdQuantizedBoson third_quantize(const QuadraticLindbladSpec& spec) {
  if (spec.statistics != Statistics::boson)
    throw validation_error("third_quantize expects a bosonic spec");
  require_valid(spec);
  const CMat& L = spec.diss.L;
  const CMat& P = spec.diss.P;
  const CMat& C = spec.diss.C;
  ThirdQuantizedBoson tq;
  tq.H_eff = spec.H - 0.5 * I * (L - P);
  tq.K_eff = spec.K - 0.5 * I * (C - C.transpose());
  tq.N = L + P;
  tq.Q = 0.5 * (C + C.transpose());
  // Noise dominates dissipation: i(H_eff - H_eff^dag) <= N.
  const CMat slack = tq.N - I * (tq.H_eff - tq.H_eff.adjoint());
  if (min_eigenvalue(slack) < -tol::psd)
    throw validation_error("not a valid Lindbladian: dissipation exceeds noise");
  return tq;
}

CMat solve_steady_covariance(const ThirdQuantizedBoson& tq) {
  if (!tq.u1_symmetric())
    throw u1_breaking_error(
        "steady covariance requires the U(1)-symmetric sector (K_eff = Q = 0)");
  return solve_lyapunov(tq.H_eff, tq.N);
}

SpectralData analyze_boson(const ThirdQuantizedBoson& tq) {
  SpectralData sd;
  auto sys = biorthogonal_eigensystem(tq.H_eff);
  sd.E = std::move(sys.E);
  sd.PsiR = std::move(sys.PsiR);
  sd.PsiL = std::move(sys.PsiL);
  sd.S_ss = solve_steady_covariance(tq);
  return sd;
}

int ExcitationIndex::total() const {
  int t = 0;
  for (int m : mu) t += m;
  for (int n : nu) t += n;
  return t;
}

cdouble liouvillian_eigenvalue(const CVec& E, const ExcitationIndex& idx) {
  if (static_cast<Eigen::Index>(idx.mu.size()) != E.size() ||
      static_cast<Eigen::Index>(idx.nu.size()) != E.size())
    throw validation_error("excitation index length must equal the mode count");
  cdouble value = 0.0;
  for (Eigen::Index s = 0; s < E.size(); ++s) {
    value += E(s) * static_cast<double>(idx.mu[s]);
    value -= std::conj(E(s)) * static_cast<double>(idx.nu[s]);
  }
  return value;
}

namespace {

std::uint64_t lattice_count(int slots, int max_total, std::uint64_t cap) {
  // number of non-negative integer vectors of length `slots` with sum <= max:
  // C(slots + max, slots); accumulate with an overflow guard.
  std::uint64_t count = 1;
  for (int i = 1; i <= slots; ++i) {
    count = count * (max_total + i) / i;  // binomial prefix products stay integral
    if (count > cap) return cap + 1;
  }
  return count;
}

void enumerate_rec(std::vector<int>& idx, int pos, int remaining,
                   const std::function<void(const std::vector<int>&)>& emit) {
  if (pos == static_cast<int>(idx.size())) {
    emit(idx);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    idx[pos] = v;
    enumerate_rec(idx, pos + 1, remaining - v, emit);
  }
}

bool lex_less(const ExcitationIndex& a, const ExcitationIndex& b) {
  if (a.mu != b.mu) return a.mu < b.mu;
  return a.nu < b.nu;
}

}  // namespace

std::vector<std::pair<ExcitationIndex, cdouble>> enumerate_spectrum(const CVec& E,
                                                                    int max_excitations,
                                                                    std::uint64_t cap) {
  if (max_excitations < 0) throw validation_error("max_excitations must be >= 0");
  const int m = static_cast<int>(E.size());
  if (lattice_count(2 * m, max_excitations, cap) > cap)
    throw cap_exceeded_error("spectrum enumeration exceeds the configured cap");

  std::vector<std::pair<ExcitationIndex, cdouble>> out;
  std::vector<int> combined(2 * m, 0);
  enumerate_rec(combined, 0, max_excitations, [&](const std::vector<int>& v) {
    ExcitationIndex idx;
    idx.mu.assign(v.begin(), v.begin() + m);
    idx.nu.assign(v.begin() + m, v.end());
    out.emplace_back(std::move(idx), 0.0);
  });
  for (auto& [idx, val] : out) val = liouvillian_eigenvalue(E, idx);

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const double ia = std::abs(a.second.imag()), ib = std::abs(b.second.imag());
    if (ia != ib) return ia < ib;
    if (a.second.real() != b.second.real()) return a.second.real() < b.second.real();
    return lex_less(a.first, b.first);
  });
  return out;
}

CMat evolve_covariance(const ThirdQuantizedBoson& tq, const CMat& S0, double t) {
  if (t < 0) throw validation_error("evolve_covariance requires t >= 0");
  if (!tq.u1_symmetric())
    throw u1_breaking_error("covariance evolution requires K_eff = Q = 0");
  const CVec eigvals = dense_eigenvalues(tq.H_eff);
  if (!none_growing(eigvals))
    throw instability_error("H_eff has a growing mode; finite-time evolution refused");
  const CMat R = (-I * tq.H_eff * t).exp();
  CMat s = R * S0 * R.adjoint() + noise_integral(tq.H_eff, tq.N, t);
  return (s + s.adjoint()) / 2.0;
}

CMat QuasiparticleCoefficients::commutator() const {
  // [a_cl(s), a_q^dag(s')]: only [a_cl,m, a_q,n^dag] = delta_mn contributes.
  return cl_on_cl * qdag_on_qdag;
}

CMat QuasiparticleCoefficients::commutator_dagger() const {
  // [a_cl^dag(s), -a_q(s')]: only [a_cl,m^dag, -a_q,n] = delta_mn contributes.
  return cldag_on_cldag * q_on_q;
}

QuasiparticleCoefficients quasiparticle_coefficients(const SpectralData& sd) {
  const double biorth = (sd.PsiL * sd.PsiR - CMat::Identity(sd.E.size(), sd.E.size())).norm();
  if (biorth > 1e-6)
    throw defective_matrix_error(
        "quasiparticle coefficients need a diagonalizable H_eff (bi-orthonormality "
        "residual " +
        std::to_string(biorth) + ")");
  QuasiparticleCoefficients qc;
  qc.cl_on_cl = sd.PsiL;
  qc.cl_on_q = sd.PsiL * sd.S_ss;
  qc.cldag_on_cldag = sd.PsiL.conjugate();
  qc.cldag_on_qdag = -(sd.PsiL * sd.S_ss).conjugate();
  qc.q_on_q = sd.PsiR.conjugate();
  qc.qdag_on_qdag = sd.PsiR;
  return qc;
}

cdouble gaussian_kernel(const ThirdQuantizedBoson& tq, const CVec& eta, const CVec& alpha,
                        double t) {
  if (t < 0) throw validation_error("gaussian_kernel requires t >= 0");
  if (!tq.u1_symmetric())
    throw u1_breaking_error("gaussian kernel requires K_eff = Q = 0");
  if (eta.size() != tq.H_eff.rows() || alpha.size() != tq.H_eff.rows())
    throw validation_error("eta and alpha must have one entry per mode");
  const CMat R = (-I * tq.H_eff * t).exp();
  const CMat S_int = noise_integral(tq.H_eff, tq.N, t);
  const cdouble quad = (eta.adjoint() * S_int * eta).value();
  const cdouble cross = (eta.adjoint() * R * alpha).value();
  return std::exp(-quad + cross - std::conj(cross));
}

}  // namespace lindblad3q
