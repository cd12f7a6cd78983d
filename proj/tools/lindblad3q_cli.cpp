// Command-line front end: parse a model file, run the analytic or oracle
// pipeline, emit spectra / grids / reports plus gnuplot scripts.
//
// Exit codes: 0 ok, 1 parse/validation, 2 instability or no steady state,
// 3 series non-convergence, 4 oracle mismatch beyond tolerance.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <unsupported/Eigen/MatrixFunctions>
#include <json.hpp>

#include "lindblad3q/errors.hpp"
#include "lindblad3q/kerr.hpp"
#include "lindblad3q/model.hpp"
#include "lindblad3q/oracle.hpp"
#include "lindblad3q/phasespace.hpp"
#include "lindblad3q/spectral.hpp"
#include "lindblad3q/thirdq_boson.hpp"
#include "lindblad3q/thirdq_fermion.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lindblad3q;

namespace {

struct RunConfig {
  std::string command;
  std::string model_path;
  std::string out_dir = ".";
  std::vector<double> times;
  double grid_extent = 6.0;
  int grid_resolution = 161;
  int l_max = 80;
  double term_tol = 1e-14;
  int cutoff = 40;
  double check_tol = -1.0;  // command-specific default when negative
  int max_excitations = 2;
  std::string check_name;
  std::string initial = "coherent=1,0";
  std::string s0_path = "identity";
  cdouble alpha0{std::sqrt(2.0), std::sqrt(2.0)};
  ModelFile model;
  std::uint64_t hash = 0;
};

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json meta_block(const RunConfig& cfg) {
  return {{"model_hash", hash_hex(cfg.hash)},
          {"convention", "sqrt2-scaled alpha; i d(rho)/dt = L rho"},
          {"command", cfg.command},
          {"tolerances",
           {{"herm", tol::herm}, {"psd", tol::psd}, {"lyap", tol::lyap},
            {"stab", tol::stab}, {"series_term_tol", cfg.term_tol}}}};
}

std::string grid_metadata(const RunConfig& cfg, double t) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "model_hash: %s\ncommand: %s\ntime: %.17g",
                hash_hex(cfg.hash).c_str(), cfg.command.c_str(), t);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write " + path.string());
  out << text;
}

void write_report(const RunConfig& cfg, const std::string& name, json body) {
  body["_meta"] = meta_block(cfg);
  write_text(fs::path(cfg.out_dir) / name, body.dump(2) + "\n");
}

json matrix_json(const CMat& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_grid(const RunConfig& cfg, const std::string& name, const PhaseGrid& grid,
               double t) {
  std::ofstream out(fs::path(cfg.out_dir) / name, std::ios::binary);
  if (!out) throw validation_error("cannot write grid " + name);
  write_grid_csv(out, grid, grid_metadata(cfg, t));
}

// One heatmap panel per grid CSV (two columns for four or more), or a line plot.
void emit_plot_script(const RunConfig& cfg, const std::vector<std::string>& grid_files,
                      const std::string& line_file = "") {
  std::string gp = "# gnuplot script emitted by lindblad3q\n";
  gp += "set datafile separator ','\n";
  if (!grid_files.empty()) {
    const int n = static_cast<int>(grid_files.size());
    const int cols = n >= 4 ? 2 : n;
    const int rows = (n + cols - 1) / cols;
    if (n > 1)
      gp += "set multiplot layout " + std::to_string(rows) + "," + std::to_string(cols) +
            "\n";
    gp += "set view map\nset size ratio -1\nunset key\n";
    for (const auto& f : grid_files) {
      gp += "set title '" + f + "'\n";
      gp += "plot '" + f + "' every ::1 using 1:2:3 with image\n";
    }
    if (n > 1) gp += "unset multiplot\n";
  }
  if (!line_file.empty()) {
    gp += "set key top right\nset xlabel 't'\nset ylabel 'scaled |<a>|'\n";
    gp += "plot '" + line_file + "' every ::1 using 1:5 with lines title '|<a>| scaled'\n";
  }
  write_text(fs::path(cfg.out_dir) / "plot.gp", gp);
}

const QuadraticLindbladSpec& require_quadratic(const RunConfig& cfg) {
  if (!cfg.model.quadratic)
    throw validation_error(cfg.command + " needs a quadratic (statistics) model file");
  return *cfg.model.quadratic;
}

const KerrModel& require_kerr(const RunConfig& cfg) {
  if (!cfg.model.kerr) throw validation_error(cfg.command + " needs a kerr model file");
  return *cfg.model.kerr;
}

CVec u1_eigenvalues(const QuadraticLindbladSpec& spec) {
  if (spec.statistics == Statistics::boson) {
    auto tq = third_quantize(spec);
    if (!tq.u1_symmetric())
      throw u1_breaking_error(
          "analytic spectra cover the U(1)-symmetric sector only (K_eff = Q = 0); "
          "the oracle still handles such models numerically");
    return biorthogonal_eigensystem(tq.H_eff).E;
  }
  auto tq = third_quantize_fermion(spec);
  if (!tq.u1_symmetric())
    throw u1_breaking_error("analytic fermionic spectra require the U(1) sector");
  return biorthogonal_eigensystem(tq.H_eff).E;
}

PhaseGrid initial_grid(const RunConfig& cfg) {
  const auto eq = cfg.initial.find('=');
  const std::string kind = cfg.initial.substr(0, eq);
  const std::string arg = eq == std::string::npos ? "" : cfg.initial.substr(eq + 1);
  if (kind == "coherent") {
    double re = 0, im = 0;
    if (std::sscanf(arg.c_str(), "%lg,%lg", &re, &im) < 1)
      throw validation_error("bad --initial coherent=re,im");
    return coherent_state_grid(cfg.grid_extent, cfg.grid_resolution, {re, im});
  }
  if (kind == "fock") {
    const int n = std::atoi(arg.c_str());
    PhaseGrid g = PhaseGrid::regular(cfg.grid_extent, cfg.grid_resolution);
    for (Eigen::Index i = 0; i < g.re_axis.size(); ++i)
      for (Eigen::Index j = 0; j < g.im_axis.size(); ++j)
        g.values(i, j) = wigner_of_fock_diagonal(n, g.point(i, j));
    return g;
  }
  if (kind == "csv") {
    std::ifstream in(arg);
    if (!in) throw validation_error("cannot open initial grid " + arg);
    return read_grid_csv(in);
  }
  throw validation_error("--initial must be coherent=re,im, fock=n or csv=path");
}

// ---------------------------------------------------------------- commands

int cmd_spectrum(const RunConfig& cfg) {
  const auto& spec = require_quadratic(cfg);
  json arr = json::array();
  CVec e = u1_eigenvalues(spec);
  if (spec.statistics == Statistics::boson) {
    for (const auto& [idx, val] : enumerate_spectrum(e, cfg.max_excitations))
      arr.push_back(
          {{"mu", idx.mu}, {"nu", idx.nu}, {"re", val.real()}, {"im", val.imag()}});
  } else {
    for (const auto& [idx, val] : fermion_spectrum(e))
      arr.push_back(
          {{"mu", idx.mu}, {"nu", idx.nu}, {"re", val.real()}, {"im", val.imag()}});
  }
  write_report(cfg, "spectrum.json", {{"spectrum", std::move(arr)}});
  std::cout << "spectrum: wrote spectrum.json\n";
  return 0;
}

int cmd_steady_state(const RunConfig& cfg) {
  const auto& spec = require_quadratic(cfg);
  json out;
  if (spec.statistics == Statistics::boson) {
    auto tq = third_quantize(spec);
    CMat s = solve_steady_covariance(tq);
    out["S_ss"] = matrix_json(s);
    out["lyapunov_residual"] = lyapunov_residual(tq.H_eff, s, tq.N);
    out["min_eigenvalue"] = min_eigenvalue(s);
  } else {
    auto tq = third_quantize_fermion(spec);
    CMat a = solve_steady_covariance_fermion(tq);
    out["A_ss"] = matrix_json(a);
    out["lyapunov_residual"] = lyapunov_residual(tq.H_eff, a, tq.N);
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    out["min_eigenvalue"] = es.eigenvalues().minCoeff();
    out["max_eigenvalue"] = es.eigenvalues().maxCoeff();
  }
  write_report(cfg, "steady_state.json", std::move(out));
  std::cout << "steady-state: wrote steady_state.json\n";
  return 0;
}

int cmd_covariance_evolve(const RunConfig& cfg) {
  const auto& spec = require_quadratic(cfg);
  CMat s0;
  if (cfg.s0_path == "identity") {
    s0 = CMat::Identity(spec.modes, spec.modes);
  } else {
    std::ifstream in(cfg.s0_path);
    if (!in) throw validation_error("cannot open --s0 " + cfg.s0_path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("S0"))
      throw validation_error("--s0 file must hold {\"S0\": [[[re,im],...],...]}");
    s0.resize(spec.modes, spec.modes);
    for (int r = 0; r < spec.modes; ++r)
      for (int c = 0; c < spec.modes; ++c)
        s0(r, c) = cdouble(j["S0"][r][c][0].get<double>(), j["S0"][r][c][1].get<double>());
  }

  json states = json::array();
  for (double t : cfg.times) {
    CMat st;
    if (spec.statistics == Statistics::boson) {
      st = evolve_covariance(third_quantize(spec), s0, t);
    } else {
      auto tq = third_quantize_fermion(spec);
      if (!tq.u1_symmetric()) throw u1_breaking_error("U(1) sector required");
      const CMat r = (-I * tq.H_eff * t).exp();
      st = r * s0 * r.adjoint() + noise_integral(tq.H_eff, tq.N, t);
    }
    states.push_back({{"t", t}, {"S", matrix_json(st)}});
  }
  write_report(cfg, "covariance.json", {{"states", std::move(states)}});
  std::cout << "covariance-evolve: wrote covariance.json\n";
  return 0;
}

int cmd_wigner_evolve(const RunConfig& cfg) {
  const auto& spec = require_quadratic(cfg);
  if (spec.statistics != Statistics::boson || spec.modes != 1)
    throw validation_error("wigner-evolve works on single-mode bosonic models");
  auto tq = third_quantize(spec);
  if (!tq.u1_symmetric()) throw u1_breaking_error("U(1) sector required");
  const double omega0 = tq.H_eff(0, 0).real();
  const double kappa = -2.0 * tq.H_eff(0, 0).imag();
  if (kappa <= 0)
    throw instability_error("wigner-evolve needs a decaying mode (kappa > 0)");
  const DampedOscillatorParams osc{omega0, kappa,
                                   (tq.N(0, 0).real() / kappa - 1.0) / 2.0};

  PhaseGrid w0 = initial_grid(cfg);
  const double cell = w0.dre() * w0.dim() / (2.0 * M_PI);
  std::vector<std::string> files;
  json norms = json::array();
  int index = 0;
  for (double t : cfg.times) {
    PhaseGrid wt = PhaseGrid::like(w0);
    if (t == 0.0) {
      wt.values = w0.values;
    } else {
      for (Eigen::Index i = 0; i < wt.re_axis.size(); ++i)
        for (Eigen::Index j = 0; j < wt.im_axis.size(); ++j) {
          cdouble acc = 0.0;
          for (Eigen::Index k = 0; k < w0.re_axis.size(); ++k)
            for (Eigen::Index l = 0; l < w0.im_axis.size(); ++l)
              acc += damped_wigner_propagator(osc, wt.point(i, j), w0.point(k, l), t) *
                     w0.values(k, l) * cell;
          wt.values(i, j) = acc;
        }
    }
    const double norm = wt.integral().real();
    if (std::abs(norm - w0.integral().real()) > 1e-3)
      throw validation_error("normalization drift beyond threshold; refine the grid");
    norms.push_back({{"t", t}, {"trace", norm}});
    std::string name = "wigner_t" + std::to_string(index++) + ".csv";
    save_grid(cfg, name, wt, t);
    files.push_back(name);
  }
  emit_plot_script(cfg, files);
  write_report(cfg, "wigner_evolve.json", {{"normalization", std::move(norms)}});
  std::cout << "wigner-evolve: wrote " << files.size() << " grids and plot.gp\n";
  return 0;
}

int cmd_kerr_wigner(const RunConfig& cfg) {
  const auto& m = require_kerr(cfg);
  const SeriesControl ctrl{cfg.l_max, cfg.term_tol};
  std::vector<std::string> files;
  int index = 0;
  for (double t : cfg.times) {
    PhaseGrid g = PhaseGrid::regular(cfg.grid_extent, cfg.grid_resolution);
    for (Eigen::Index i = 0; i < g.re_axis.size(); ++i)
      for (Eigen::Index j = 0; j < g.im_axis.size(); ++j)
        g.values(i, j) = kerr_wigner_coherent(m, g.point(i, j), cfg.alpha0, t, ctrl);
    std::string name = "kerr_wigner_t" + std::to_string(index++) + ".csv";
    save_grid(cfg, name, g, t);
    files.push_back(name);
  }
  emit_plot_script(cfg, files);
  std::cout << "kerr-wigner: wrote " << files.size() << " grids and plot.gp\n";
  return 0;
}

int cmd_kerr_average(const RunConfig& cfg) {
  const auto& m = require_kerr(cfg);
  std::string csv = "t,re,im,abs,scaled_abs\n";
  char buf[160];
  const double scale = std::abs(cfg.alpha0) / std::sqrt(2.0);
  for (double t : cfg.times) {
    const cdouble a = kerr_average_a(m, cfg.alpha0, t);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, a.real(),
                  a.imag(), std::abs(a), scale > 0 ? std::abs(a) / scale : 0.0);
    csv += buf;
  }
  write_text(fs::path(cfg.out_dir) / "kerr_average.csv", csv);
  emit_plot_script(cfg, {}, "kerr_average.csv");
  std::cout << "kerr-average: wrote kerr_average.csv\n";
  return 0;
}

int cmd_kerr_propagate(const RunConfig& cfg) {
  const auto& m = require_kerr(cfg);
  const SeriesControl ctrl{cfg.l_max, cfg.term_tol};
  PhaseGrid w0 = initial_grid(cfg);
  std::vector<std::string> files;
  json norms = json::array();
  int index = 0;
  for (double t : cfg.times) {
    PhaseGrid wt = t == 0.0 ? w0 : evolve_wigner_grid(m, w0, t, ctrl);
    norms.push_back({{"t", t}, {"trace", wt.integral().real()}});
    std::string name = "kerr_prop_t" + std::to_string(index++) + ".csv";
    save_grid(cfg, name, wt, t);
    files.push_back(name);
  }
  emit_plot_script(cfg, files);
  write_report(cfg, "kerr_propagate.json", {{"normalization", std::move(norms)}});
  std::cout << "kerr-propagate: wrote " << files.size() << " grids and plot.gp\n";
  return 0;
}

// ------------------------------------------------------------ oracle-check

struct CheckResult {
  double max_abs_err = 0.0;
  double tolerance = 0.0;
  json detail;
};

double greedy_multiset_error(std::vector<cdouble> a, std::vector<cdouble> b) {
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = 0;
    double dist = 1e300;
    for (std::size_t k = 0; k < b.size(); ++k)
      if (std::abs(b[k] - x) < dist) {
        dist = std::abs(b[k] - x);
        best = k;
      }
    worst = std::max(worst, dist);
    if (!b.empty()) b.erase(b.begin() + best);
  }
  return worst;
}

CheckResult check_spectrum(const RunConfig& cfg) {
  const auto& spec = require_quadratic(cfg);
  CheckResult res;
  res.tolerance = cfg.check_tol > 0 ? cfg.check_tol : 1e-6;
  CVec e = u1_eigenvalues(spec);
  std::vector<cdouble> analytic, numeric;
  if (spec.statistics == Statistics::boson) {
    for (const auto& [idx, val] : enumerate_spectrum(e, cfg.max_excitations))
      analytic.push_back(val);
    auto lio = build_boson_liouvillian(spec, std::vector<int>(spec.modes, cfg.cutoff));
    CVec vals = liouvillian_eigenvalues(lio);
    numeric.assign(vals.data(), vals.data() + vals.size());
  } else {
    for (const auto& [idx, val] : fermion_spectrum(e)) analytic.push_back(val);
    CVec vals = liouvillian_eigenvalues(build_fermion_liouvillian(spec));
    numeric.assign(vals.data(), vals.data() + vals.size());
  }
  auto by_im = [](const cdouble& x, const cdouble& y) {
    if (std::abs(x.imag()) != std::abs(y.imag()))
      return std::abs(x.imag()) < std::abs(y.imag());
    return x.real() < y.real();
  };
  std::sort(analytic.begin(), analytic.end(), by_im);
  std::sort(numeric.begin(), numeric.end(), by_im);
  const std::size_t count = std::min(
      {analytic.size(), numeric.size(),
       spec.statistics == Statistics::boson ? std::size_t{10} : std::size_t{64}});
  analytic.resize(count);
  numeric.resize(count);
  res.max_abs_err = greedy_multiset_error(analytic, numeric);
  res.detail = {{"eigenvalues_compared", count}};
  return res;
}

CheckResult check_covariance(const RunConfig& cfg) {
  const auto& spec = require_quadratic(cfg);
  CheckResult res;
  res.tolerance = cfg.check_tol > 0 ? cfg.check_tol : 1e-6;
  std::vector<double> times = cfg.times;
  if (spec.statistics == Statistics::boson) {
    auto tq = third_quantize(spec);
    auto lio = build_boson_liouvillian(spec, std::vector<int>(spec.modes, cfg.cutoff));
    CMat vac = CMat::Zero(lio.D, lio.D);
    vac(0, 0) = 1.0;  // vacuum: S(0) = identity
    for (double t : times) {
      CMat analytic = evolve_covariance(tq, CMat::Identity(spec.modes, spec.modes), t);
      CMat numeric = boson_covariance(evolve_density(lio, vac, t), lio.dims);
      res.max_abs_err =
          std::max(res.max_abs_err, (analytic - numeric).cwiseAbs().maxCoeff());
    }
  } else {
    auto tq = third_quantize_fermion(spec);
    if (!tq.u1_symmetric()) throw u1_breaking_error("U(1) sector required");
    auto lio = build_fermion_liouvillian(spec);
    CMat vac = CMat::Zero(lio.D, lio.D);
    vac(0, 0) = 1.0;  // A(0) = identity
    for (double t : times) {
      const CMat r = (-I * tq.H_eff * t).exp();
      CMat analytic = r * r.adjoint() + noise_integral(tq.H_eff, tq.N, t);
      CMat numeric = fermion_covariance(evolve_density(lio, vac, t), spec.modes);
      res.max_abs_err =
          std::max(res.max_abs_err, (analytic - numeric).cwiseAbs().maxCoeff());
    }
  }
  res.detail = {{"times", times}};
  return res;
}

CheckResult check_kernel(const RunConfig& cfg) {
  const auto& spec = require_quadratic(cfg);
  if (spec.statistics != Statistics::boson || spec.modes != 1)
    throw validation_error("kernel check runs on single-mode bosonic models");
  auto tq = third_quantize(spec);
  if (!tq.u1_symmetric()) throw u1_breaking_error("U(1) sector required");
  CheckResult res;
  res.tolerance = cfg.check_tol > 0 ? cfg.check_tol : 1e-8;
  // Kernel probed through evolved coherent states:
  //   Lambda_{rho(t)}(eta) = K(eta, alpha; t) exp(-|R(t)|^2 |eta|^2), R = e^{-iH_eff t}.
  // A literally truncated displaced-parity ket never converges with the cutoff.
  const cdouble points[5][2] = {{{0.7, 0.2}, {1.0, 0.0}},
                                {{0.3, -0.6}, {0.5, 0.8}},
                                {{-0.4, 0.5}, {1.2, -0.3}},
                                {{0.9, 0.1}, {-0.6, 0.7}},
                                {{0.2, 0.8}, {0.9, 0.9}}};
  auto lio = build_boson_liouvillian(spec, {cfg.cutoff});
  for (std::size_t k = 0; k < 5; ++k) {
    const cdouble eta = points[k][0], alpha = points[k][1];
    const double t = cfg.times[k % cfg.times.size()];
    CMat rho_t = evolve_density(lio, coherent_state(alpha / std::sqrt(2.0), cfg.cutoff), t);
    const cdouble oracle = characteristic_numeric(rho_t, eta);
    CVec ev(1), av(1);
    ev(0) = eta;
    av(0) = alpha;
    const cdouble r = std::exp(-I * tq.H_eff(0, 0) * t);
    const cdouble smoothed =
        gaussian_kernel(tq, ev, av, t) * std::exp(-std::norm(r) * std::norm(eta));
    res.max_abs_err = std::max(res.max_abs_err, std::abs(smoothed - oracle));
  }
  res.detail = {{"points", 5}};
  return res;
}

CheckResult check_wigner(const RunConfig& cfg) {
  CheckResult res;
  if (cfg.model.kerr) {
    const auto& m = *cfg.model.kerr;
    res.tolerance = cfg.check_tol > 0 ? cfg.check_tol : 1e-3;
    const double t = cfg.times.front();
    auto lio = build_boson_liouvillian(m, cfg.cutoff);
    CMat rho_t =
        evolve_density(lio, coherent_state(cfg.alpha0 / std::sqrt(2.0), cfg.cutoff), t);
    PhaseGrid g = PhaseGrid::regular(cfg.grid_extent, cfg.grid_resolution);
    wigner_numeric_grid(rho_t, g);
    const SeriesControl ctrl{cfg.l_max, cfg.term_tol};
    for (Eigen::Index i = 0; i < g.re_axis.size(); ++i)
      for (Eigen::Index j = 0; j < g.im_axis.size(); ++j) {
        const double series = kerr_wigner_coherent(m, g.point(i, j), cfg.alpha0, t, ctrl);
        res.max_abs_err =
            std::max(res.max_abs_err, std::abs(series - g.values(i, j).real()));
      }
    res.detail = {{"grid_resolution", cfg.grid_resolution}, {"t", t}};
  } else {
    const auto& spec = require_quadratic(cfg);
    if (spec.statistics != Statistics::boson || spec.modes != 1)
      throw validation_error("wigner check needs a kerr or single-mode bosonic model");
    res.tolerance = cfg.check_tol > 0 ? cfg.check_tol : 1e-6;
    auto tq = third_quantize(spec);
    const double s = solve_steady_covariance(tq)(0, 0).real();
    auto lio = build_boson_liouvillian(spec, {cfg.cutoff});
    CMat rho = steady_state_numeric(lio);
    PhaseGrid g = PhaseGrid::regular(std::min(cfg.grid_extent, 3.0), 21);
    wigner_numeric_grid(rho, g);
    for (Eigen::Index i = 0; i < g.re_axis.size(); ++i)
      for (Eigen::Index j = 0; j < g.im_axis.size(); ++j) {
        const double gauss = 2.0 / s * std::exp(-std::norm(g.point(i, j)) / s);
        res.max_abs_err =
            std::max(res.max_abs_err, std::abs(gauss - g.values(i, j).real()));
      }
    res.detail = {{"steady_width", s}};
  }
  return res;
}

int cmd_oracle_check(const RunConfig& cfg) {
  CheckResult res;
  if (cfg.check_name == "spectrum")
    res = check_spectrum(cfg);
  else if (cfg.check_name == "covariance")
    res = check_covariance(cfg);
  else if (cfg.check_name == "kernel")
    res = check_kernel(cfg);
  else if (cfg.check_name == "wigner")
    res = check_wigner(cfg);
  else
    throw validation_error("check must be spectrum | covariance | kernel | wigner");
  const bool pass = res.max_abs_err < res.tolerance;
  json report = {{"check", cfg.check_name},
                 {"max_abs_err", res.max_abs_err},
                 {"tolerance", res.tolerance},
                 {"pass", pass},
                 {"detail", res.detail}};
  write_report(cfg, "oracle_check.json", report);
  std::cout << report.dump(2) << "\n";
  return pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Third-quantized quadratic Lindbladians and the exact dissipative "
               "Kerr oscillator"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string t_list, t_range, grid_spec, alpha0_spec;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model_path, "model JSON file")->required();
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--t", t_list, "comma-separated times");
    sub->add_option("--t-range", t_range, "time range start:stop:count");
    sub->add_option("--grid", grid_spec, "grid as extent:resolution");
    sub->add_option("--lmax", cfg.l_max, "series l_max");
    sub->add_option("--term-tol", cfg.term_tol, "series term tolerance");
    sub->add_option("--cutoff", cfg.cutoff, "oracle Fock cutoff per mode");
    sub->add_option("--check-tol", cfg.check_tol, "oracle comparison tolerance");
    sub->add_option("--max-exc", cfg.max_excitations, "spectrum excitation cap");
    sub->add_option("--alpha0", alpha0_spec, "coherent center re,im (sqrt2-scaled)");
    sub->add_option("--initial", cfg.initial, "coherent=re,im | fock=n | csv=path");
    sub->add_option("--s0", cfg.s0_path, "initial covariance JSON or 'identity'");
  };

  for (const char* name : {"spectrum", "steady-state", "covariance-evolve",
                           "wigner-evolve", "kerr-wigner", "kerr-average",
                           "kerr-propagate", "oracle-check"})
    add_common(app.add_subcommand(name));
  app.get_subcommand("oracle-check")
      ->add_option("check", cfg.check_name, "spectrum | covariance | kernel | wigner")
      ->required();

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (!t_list.empty()) {
      std::stringstream ss(t_list);
      for (std::string tok; std::getline(ss, tok, ',');)
        cfg.times.push_back(std::stod(tok));
    }
    if (!t_range.empty()) {
      double a = 0, b = 0;
      int n = 0;
      if (std::sscanf(t_range.c_str(), "%lg:%lg:%d", &a, &b, &n) != 3 || n < 2)
        throw validation_error("--t-range wants start:stop:count with count >= 2");
      for (int k = 0; k < n; ++k) cfg.times.push_back(a + (b - a) * k / (n - 1));
    }
    if (cfg.times.empty()) cfg.times = {1.0};
    for (std::size_t k = 0; k + 1 < cfg.times.size(); ++k)
      if (cfg.times[k] > cfg.times[k + 1])
        throw validation_error("times must be ascending");
    if (cfg.times.front() < 0) throw validation_error("times must be non-negative");
    if (!grid_spec.empty()) {
      if (std::sscanf(grid_spec.c_str(), "%lg:%d", &cfg.grid_extent,
                      &cfg.grid_resolution) != 2 ||
          cfg.grid_resolution < 2)
        throw validation_error("--grid wants extent:resolution with resolution >= 2");
    }
    if (!alpha0_spec.empty()) {
      double re = 0, im = 0;
      if (std::sscanf(alpha0_spec.c_str(), "%lg,%lg", &re, &im) < 1)
        throw validation_error("--alpha0 wants re,im");
      cfg.alpha0 = {re, im};
    }

    cfg.model = load_model(cfg.model_path);
    if (cfg.model.quadratic) require_valid(*cfg.model.quadratic);
    cfg.hash = model_hash(cfg.model);
    fs::create_directories(cfg.out_dir);
    // canonical re-emission; reparsing this file reproduces the same hash
    write_text(fs::path(cfg.out_dir) / "model.resolved.json", serialize_model(cfg.model));

    if (cfg.command == "spectrum") return cmd_spectrum(cfg);
    if (cfg.command == "steady-state") return cmd_steady_state(cfg);
    if (cfg.command == "covariance-evolve") return cmd_covariance_evolve(cfg);
    if (cfg.command == "wigner-evolve") return cmd_wigner_evolve(cfg);
    if (cfg.command == "kerr-wigner") return cmd_kerr_wigner(cfg);
    if (cfg.command == "kerr-average") return cmd_kerr_average(cfg);
    if (cfg.command == "kerr-propagate") return cmd_kerr_propagate(cfg);
    if (cfg.command == "oracle-check") return cmd_oracle_check(cfg);
    throw validation_error("unknown command");
  } catch (const instability_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const series_convergence_error& e) {
    std::cerr << "error: " << e.what() << " (last term " << e.last_term << ")\n";
    return 3;
  } catch (const delta_distribution_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
