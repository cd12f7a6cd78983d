// Python bindings for the main operations: model handling, third quantization
// (bosonic and fermionic), phase-space functions, the Kerr series, and the
// brute-force Fock oracle.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lindblad3q/bessel.hpp"
#include "lindblad3q/errors.hpp"
#include "lindblad3q/kerr.hpp"
#include "lindblad3q/model.hpp"
#include "lindblad3q/oracle.hpp"
#include "lindblad3q/phasespace.hpp"
#include "lindblad3q/spectral.hpp"
#include "lindblad3q/thirdq_boson.hpp"
#include "lindblad3q/thirdq_fermion.hpp"

namespace py = pybind11;
using namespace lindblad3q;

PYBIND11_MODULE(lindblad3q, m) {
  m.doc() = "Third quantization of quadratic Lindbladians, Gaussian phase-space "
            "propagators, and the exact dissipative Kerr oscillator";

  py::register_exception<validation_error>(m, "ValidationError");
  py::register_exception<instability_error>(m, "InstabilityError");
  py::register_exception<series_convergence_error>(m, "SeriesConvergenceError");
  py::register_exception<delta_distribution_error>(m, "DeltaDistributionError");

  py::enum_<Statistics>(m, "Statistics")
      .value("boson", Statistics::boson)
      .value("fermion", Statistics::fermion);

  py::class_<DissipatorMatrices>(m, "DissipatorMatrices")
      .def_readonly("L", &DissipatorMatrices::L)
      .def_readonly("P", &DissipatorMatrices::P)
      .def_readonly("C", &DissipatorMatrices::C);

  py::class_<QuadraticLindbladSpec>(m, "QuadraticLindbladSpec")
      .def_static("from_matrices", &QuadraticLindbladSpec::from_matrices, py::arg("statistics"),
                  py::arg("H"), py::arg("K"), py::arg("l"), py::arg("p"))
      .def_static("from_dissipators", &QuadraticLindbladSpec::from_dissipators,
                  py::arg("statistics"), py::arg("H"), py::arg("K"), py::arg("d"))
      .def_readonly("statistics", &QuadraticLindbladSpec::statistics)
      .def_readonly("modes", &QuadraticLindbladSpec::modes)
      .def_readonly("H", &QuadraticLindbladSpec::H)
      .def_readonly("K", &QuadraticLindbladSpec::K)
      .def_readonly("dissipators", &QuadraticLindbladSpec::diss);

  m.def("build_dissipator_matrices", &build_dissipator_matrices, py::arg("l"), py::arg("p"));
  m.def("validate_spec",
        [](const QuadraticLindbladSpec& s) { return validate_spec(s).to_string(); });
  m.def("damped_oscillator_spec", &damped_oscillator_spec, py::arg("omega0"),
        py::arg("kappa"), py::arg("nth"));
  m.def("fermion_mode_spec", &fermion_mode_spec, py::arg("eps0"), py::arg("gamma"),
        py::arg("nbar"));
  m.def("load_model_quadratic", [](const std::string& path) {
    auto model = load_model(path);
    if (!model.quadratic) throw validation_error("not a quadratic model file");
    return *model.quadratic;
  });

  py::class_<ThirdQuantizedBoson>(m, "ThirdQuantizedBoson")
      .def_readonly("H_eff", &ThirdQuantizedBoson::H_eff)
      .def_readonly("K_eff", &ThirdQuantizedBoson::K_eff)
      .def_readonly("N", &ThirdQuantizedBoson::N)
      .def_readonly("Q", &ThirdQuantizedBoson::Q)
      .def("u1_symmetric", &ThirdQuantizedBoson::u1_symmetric);
  py::class_<SpectralData>(m, "SpectralData")
      .def_readonly("E", &SpectralData::E)
      .def_readonly("PsiR", &SpectralData::PsiR)
      .def_readonly("PsiL", &SpectralData::PsiL)
      .def_readonly("S_ss", &SpectralData::S_ss);

  m.def("third_quantize", &third_quantize);
  m.def("analyze_boson", &analyze_boson);
  m.def("solve_steady_covariance", &solve_steady_covariance);
  m.def("evolve_covariance", &evolve_covariance, py::arg("tq"), py::arg("S0"), py::arg("t"));
  m.def("liouvillian_eigenvalue",
        [](const CVec& e, std::vector<int> mu, std::vector<int> nu) {
          return liouvillian_eigenvalue(e, {std::move(mu), std::move(nu)});
        });
  m.def("enumerate_spectrum", [](const CVec& e, int max_excitations) {
    py::list out;
    for (const auto& [idx, val] : enumerate_spectrum(e, max_excitations))
      out.append(py::make_tuple(idx.mu, idx.nu, val));
    return out;
  });
  m.def("gaussian_kernel", &gaussian_kernel, py::arg("tq"), py::arg("eta"),
        py::arg("alpha"), py::arg("t"));

  py::class_<ThirdQuantizedFermion>(m, "ThirdQuantizedFermion")
      .def_readonly("H_eff", &ThirdQuantizedFermion::H_eff)
      .def_readonly("N", &ThirdQuantizedFermion::N)
      .def("u1_symmetric", &ThirdQuantizedFermion::u1_symmetric);
  m.def("third_quantize_fermion", &third_quantize_fermion);
  m.def("solve_steady_covariance_fermion", &solve_steady_covariance_fermion);
  m.def("fermion_spectrum", [](const CVec& e) {
    py::list out;
    for (const auto& [idx, val] : fermion_spectrum(e))
      out.append(py::make_tuple(idx.mu, idx.nu, val));
    return out;
  });
  m.def("fermion_kernel_single", [](double eps0, double gamma, double nbar, double t) {
    auto c = fermion_kernel_single(eps0, gamma, nbar, t);
    return py::make_tuple(c.cK, c.cR, c.cA);
  });
  m.def("biorthogonal_eigenvalues",
        [](const CMat& a) { return biorthogonal_eigensystem(a).E; });

  py::class_<DampedOscillatorParams>(m, "DampedOscillatorParams")
      .def(py::init([](double w0, double kappa, double nth) {
             return DampedOscillatorParams{w0, kappa, nth};
           }),
           py::arg("omega0"), py::arg("kappa"), py::arg("nth"))
      .def_readonly("omega0", &DampedOscillatorParams::omega0)
      .def_readonly("kappa", &DampedOscillatorParams::kappa)
      .def_readonly("nth", &DampedOscillatorParams::nth);
  m.def("damped_kernel", &damped_kernel);
  m.def("damped_wigner_propagator", &damped_wigner_propagator);
  m.def("right_eigvec_wigner", &right_eigvec_wigner);
  m.def("left_eigvec_phase", &left_eigvec_phase);
  m.def("wigner_of_fock_diagonal", &wigner_of_fock_diagonal);
  m.def("associated_laguerre", &associated_laguerre);

  py::class_<KerrModel>(m, "KerrModel")
      .def(py::init([](double w0, double U, double kappa, double nth) {
             return KerrModel{w0, U, kappa, nth};
           }),
           py::arg("omega0"), py::arg("U"), py::arg("kappa"), py::arg("nth"))
      .def_readonly("omega0", &KerrModel::omega0)
      .def_readonly("U", &KerrModel::U)
      .def_readonly("kappa", &KerrModel::kappa)
      .def_readonly("nth", &KerrModel::nth);
  py::class_<SeriesControl>(m, "SeriesControl")
      .def(py::init([](int l_max, double term_tol) {
             return SeriesControl{l_max, term_tol};
           }),
           py::arg("l_max") = 80, py::arg("term_tol") = 1e-14)
      .def_readonly("l_max", &SeriesControl::l_max)
      .def_readonly("term_tol", &SeriesControl::term_tol);

  m.def("bessel_j_complex", &bessel_j_complex);
  m.def("kerr_kernel", &kerr_kernel, py::arg("model"), py::arg("eta"), py::arg("alpha"),
        py::arg("t"), py::arg("ctrl") = SeriesControl{});
  m.def("kerr_average_a", &kerr_average_a, py::arg("model"), py::arg("alpha0"),
        py::arg("t"), py::arg("ctrl") = SeriesControl{});
  m.def("kerr_wigner_propagator", &kerr_wigner_propagator, py::arg("model"),
        py::arg("beta"), py::arg("alpha"), py::arg("t"), py::arg("ctrl") = SeriesControl{});
  m.def("kerr_wigner_coherent", &kerr_wigner_coherent, py::arg("model"), py::arg("alpha"),
        py::arg("alpha0"), py::arg("t"), py::arg("ctrl") = SeriesControl{});

  py::class_<FockLiouvillian>(m, "FockLiouvillian")
      .def_readonly("D", &FockLiouvillian::D)
      .def_readonly("dims", &FockLiouvillian::dims)
      .def("apply", &FockLiouvillian::apply)
      .def("dense", &FockLiouvillian::dense, py::arg("dense_cap") = 64)
      .def("trace_functional_residual", &FockLiouvillian::trace_functional_residual);
  m.def("build_boson_liouvillian",
        py::overload_cast<const QuadraticLindbladSpec&, const std::vector<int>&, int>(
            &build_boson_liouvillian),
        py::arg("spec"), py::arg("dims"), py::arg("cap") = 256);
  m.def("build_kerr_liouvillian",
        py::overload_cast<const KerrModel&, int, int>(&build_boson_liouvillian),
        py::arg("model"), py::arg("cutoff"), py::arg("cap") = 256);
  m.def("build_fermion_liouvillian", &build_fermion_liouvillian);
  m.def("evolve_density", &evolve_density, py::arg("liouvillian"), py::arg("rho0"),
        py::arg("t"));
  m.def("liouvillian_eigenvalues", &liouvillian_eigenvalues);
  m.def("steady_state_numeric", &steady_state_numeric);
  m.def("wigner_numeric",
        [](const CMat& rho, cdouble alpha) { return wigner_numeric(rho, alpha); });
  m.def("characteristic_numeric",
        [](const CMat& rho, cdouble eta) { return characteristic_numeric(rho, eta); });
  m.def("coherent_state",
        [](cdouble alpha0, int cutoff) { return coherent_state(alpha0, cutoff); });
  m.def("fock_state", &fock_state);
  m.def("thermal_state", &thermal_state);
  m.def("boson_covariance", &boson_covariance);
  m.def("fermion_covariance", &fermion_covariance);
}
