#include "lindblad3q/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lindblad3q/errors.hpp"

namespace lindblad3q {

using nlohmann::json;

DissipatorMatrices build_dissipator_matrices(const CMat& l, const CMat& p) {
  if (l.rows() != p.rows() || l.cols() != p.cols())
    throw validation_error("bath coupling matrices l and p must have the same shape");
  DissipatorMatrices d;
  d.L = l.adjoint() * l;
  d.P = p.adjoint() * p;
  d.C = l.adjoint() * p.conjugate();
  return d;
}

QuadraticLindbladSpec QuadraticLindbladSpec::from_matrices(Statistics s, CMat H, CMat K,
                                                           CMat l, CMat p) {
  QuadraticLindbladSpec spec;
  spec.statistics = s;
  spec.modes = static_cast<int>(H.rows());
  spec.H = std::move(H);
  spec.K = K.size() ? std::move(K) : CMat::Zero(spec.modes, spec.modes);
  spec.diss = build_dissipator_matrices(l, p);
  spec.l = std::move(l);
  spec.p = std::move(p);
  spec.has_bath_couplings = true;
  return spec;
}

QuadraticLindbladSpec QuadraticLindbladSpec::from_dissipators(Statistics s, CMat H, CMat K,
                                                              DissipatorMatrices d) {
  QuadraticLindbladSpec spec;
  spec.statistics = s;
  spec.modes = static_cast<int>(H.rows());
  spec.H = std::move(H);
  spec.K = K.size() ? std::move(K) : CMat::Zero(spec.modes, spec.modes);
  spec.diss = std::move(d);
  spec.has_bath_couplings = false;
  return spec;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "valid";
  std::ostringstream os;
  for (const auto& issue : issues)
    os << issue.what << " (residual " << issue.residual << ")\n";
  return os.str();
}

ValidationReport validate_spec(const QuadraticLindbladSpec& spec) {
  ValidationReport report;
  const int m = spec.modes;
  auto check_square = [&](const CMat& a, const char* name) {
    if (a.rows() != m || a.cols() != m) {
      report.issues.push_back({std::string(name) + " is not " + std::to_string(m) + "x" +
                                   std::to_string(m),
                               0.0});
      return false;
    }
    return true;
  };
  if (m <= 0) {
    report.issues.push_back({"mode count must be positive", 0.0});
    return report;
  }
  if (check_square(spec.H, "H")) {
    double r = (spec.H - spec.H.adjoint()).norm();
    if (r > tol::herm * std::max(1.0, spec.H.norm()))
      report.issues.push_back({"H is not Hermitian", r});
  }
  if (check_square(spec.K, "K")) {
    const bool boson = spec.statistics == Statistics::boson;
    double r = boson ? (spec.K - spec.K.transpose()).norm()
                     : (spec.K + spec.K.transpose()).norm();
    if (r > tol::herm * std::max(1.0, spec.K.norm()))
      report.issues.push_back(
          {boson ? "K is not symmetric (boson)" : "K is not antisymmetric (fermion)", r});
  }
  for (auto [mat, name] : {std::pair{&spec.diss.L, "L"}, std::pair{&spec.diss.P, "P"}}) {
    if (!check_square(*mat, name)) continue;
    double r = (*mat - mat->adjoint()).norm();
    if (r > tol::herm * std::max(1.0, mat->norm())) {
      report.issues.push_back({std::string(name) + " is not Hermitian", r});
      continue;
    }
    double lo = min_eigenvalue(*mat);
    if (lo < -tol::psd)
      report.issues.push_back({std::string(name) + " is not positive semi-definite", -lo});
  }
  check_square(spec.diss.C, "C");
  return report;
}

void require_valid(const QuadraticLindbladSpec& spec) {
  auto report = validate_spec(spec);
  if (!report.ok()) throw validation_error("invalid model: " + report.to_string());
}

namespace {

json matrix_to_json(const CMat& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.empty())
    throw validation_error(std::string("matrix ") + name + " must be a non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  CMat a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (!row.is_array() || row.size() != cols)
      throw validation_error(std::string("ragged rows in matrix ") + name);
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& e = row.at(k);
      if (!e.is_array() || e.size() != 2)
        throw validation_error(std::string("entries of ") + name + " must be [re, im] pairs");
      a(i, k) = cdouble(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return a;
}

}  // namespace

ModelFile parse_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw validation_error(std::string("model file is not valid JSON: ") + e.what());
  }

  ModelFile model;
  if (j.contains("kerr")) {
    const auto& k = j.at("kerr");
    KerrModel km;
    try {
      km.omega0 = k.at("omega0").get<double>();
      km.U = k.at("U").get<double>();
      km.kappa = k.at("kappa").get<double>();
      km.nth = k.at("nth").get<double>();
    } catch (const json::exception& e) {
      throw validation_error(std::string("bad kerr model: ") + e.what());
    }
    if (km.kappa < 0 || km.nth < 0)
      throw validation_error("kerr model requires kappa >= 0 and nth >= 0");
    model.kerr = km;
    return model;
  }

  try {
    Statistics s;
    const std::string stat = j.at("statistics").get<std::string>();
    if (stat == "boson")
      s = Statistics::boson;
    else if (stat == "fermion")
      s = Statistics::fermion;
    else
      throw validation_error("statistics must be \"boson\" or \"fermion\"");
    const int modes = j.at("modes").get<int>();
    if (modes <= 0) throw validation_error("modes must be a positive integer");
    CMat H = matrix_from_json(j.at("H"), "H");
    CMat K = j.contains("K") ? matrix_from_json(j.at("K"), "K") : CMat::Zero(modes, modes);
    if (H.rows() != modes || H.cols() != modes)
      throw validation_error("H must be modes x modes");

    if (j.contains("l") || j.contains("p")) {
      if (!(j.contains("l") && j.contains("p")))
        throw validation_error("bath couplings require both l and p");
      CMat l = matrix_from_json(j.at("l"), "l");
      CMat p = matrix_from_json(j.at("p"), "p");
      if (l.cols() != modes || p.cols() != modes)
        throw validation_error("l and p must have modes columns");
      model.quadratic = QuadraticLindbladSpec::from_matrices(s, std::move(H), std::move(K),
                                                             std::move(l), std::move(p));
    } else if (j.contains("L") && j.contains("P")) {
      DissipatorMatrices d;
      d.L = matrix_from_json(j.at("L"), "L");
      d.P = matrix_from_json(j.at("P"), "P");
      d.C = j.contains("C") ? matrix_from_json(j.at("C"), "C") : CMat::Zero(modes, modes);
      model.quadratic = QuadraticLindbladSpec::from_dissipators(s, std::move(H), std::move(K),
                                                                std::move(d));
    } else {
      throw validation_error("model must provide either (l, p) or (L, P[, C])");
    }
  } catch (const json::exception& e) {
    throw validation_error(std::string("bad model file: ") + e.what());
  }
  return model;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize_model(const ModelFile& model) {
  json j;
  if (model.kerr) {
    j["kerr"] = {{"omega0", model.kerr->omega0},
                 {"U", model.kerr->U},
                 {"kappa", model.kerr->kappa},
                 {"nth", model.kerr->nth}};
  } else if (model.quadratic) {
    const auto& s = *model.quadratic;
    j["statistics"] = s.statistics == Statistics::boson ? "boson" : "fermion";
    j["modes"] = s.modes;
    j["H"] = matrix_to_json(s.H);
    j["K"] = matrix_to_json(s.K);
    if (s.has_bath_couplings) {
      j["l"] = matrix_to_json(s.l);
      j["p"] = matrix_to_json(s.p);
    } else {
      j["L"] = matrix_to_json(s.diss.L);
      j["P"] = matrix_to_json(s.diss.P);
      j["C"] = matrix_to_json(s.diss.C);
    }
  } else {
    throw validation_error("empty model");
  }
  return j.dump(2) + "\n";
}

std::uint64_t model_hash(const ModelFile& model) {
  const std::string text = serialize_model(model);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Loss and pumping act through two independent channels, so the loss-pump
// coherence C stays zero (one mixed channel would break the U(1) symmetry).
QuadraticLindbladSpec damped_oscillator_spec(double omega0, double kappa, double nth) {
  CMat H(1, 1), l = CMat::Zero(2, 1), p = CMat::Zero(2, 1);
  H(0, 0) = omega0;
  l(0, 0) = std::sqrt(kappa * (nth + 1.0));
  p(1, 0) = std::sqrt(kappa * nth);
  return QuadraticLindbladSpec::from_matrices(Statistics::boson, H, CMat::Zero(1, 1), l, p);
}

QuadraticLindbladSpec fermion_mode_spec(double eps0, double gamma, double nbar) {
  CMat H(1, 1), l = CMat::Zero(2, 1), p = CMat::Zero(2, 1);
  H(0, 0) = eps0;
  l(0, 0) = std::sqrt(gamma * (1.0 - nbar));
  p(1, 0) = std::sqrt(gamma * nbar);
  return QuadraticLindbladSpec::from_matrices(Statistics::fermion, H, CMat::Zero(1, 1), l, p);
}

}  // namespace lindblad3q
