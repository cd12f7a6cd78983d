#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lindblad3q/types.hpp"

namespace lindblad3q {

enum class Statistics { boson, fermion };

// Hermitian PSD loss/pump matrices and the loss-pump coherence matrix,
// in rate units. L_{nm} = sum_b l*_{bn} l_{bm}, P_{nm} = sum_b p*_{bn} p_{bm},
// C_{nm} = sum_b l*_{bn} p*_{bm}.
struct DissipatorMatrices {
  CMat L, P, C;
};

DissipatorMatrices build_dissipator_matrices(const CMat& l, const CMat& p);

// A quadratic Lindbladian: coherent matrices H (Hermitian) and K (symmetric
// for bosons, antisymmetric for fermions), plus either bath couplings (l, p)
// or the derived (L, P, C) directly. M is expected small; dense throughout.
struct QuadraticLindbladSpec {
  Statistics statistics = Statistics::boson;
  int modes = 0;
  CMat H;
  CMat K;
  CMat l, p;  // B x M; empty when the spec was given (L, P, C) directly
  DissipatorMatrices diss;
  bool has_bath_couplings = false;

  static QuadraticLindbladSpec from_matrices(Statistics s, CMat H, CMat K,
                                             CMat l, CMat p);
  static QuadraticLindbladSpec from_dissipators(Statistics s, CMat H, CMat K,
                                                DissipatorMatrices d);
};

struct ValidationIssue {
  std::string what;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// Report-only: lists every violated invariant with its matrix-norm residual.
ValidationReport validate_spec(const QuadraticLindbladSpec& spec);

// Throws validation_error when the report is non-empty.
void require_valid(const QuadraticLindbladSpec& spec);

// Dissipative Kerr oscillator parameters (hbar = 1 units).
struct KerrModel {
  double omega0 = 0.0;
  double U = 0.0;
  double kappa = 0.0;
  double nth = 0.0;
};

// A model file holds either a quadratic spec or a Kerr model.
struct ModelFile {
  std::optional<QuadraticLindbladSpec> quadratic;
  std::optional<KerrModel> kerr;
};

ModelFile load_model(const std::string& path);
ModelFile parse_model(const std::string& json_text);
std::string serialize_model(const ModelFile& model);

// FNV-1a of the canonical serialization; stamped into every output file.
std::uint64_t model_hash(const ModelFile& model);

// Single damped oscillator: H=[omega0], l=[sqrt(kappa(nth+1))], p=[sqrt(kappa nth)].
QuadraticLindbladSpec damped_oscillator_spec(double omega0, double kappa, double nth);

// Single fermionic mode: H=[eps0], L=[gamma(1-nbar)], P=[gamma nbar].
QuadraticLindbladSpec fermion_mode_spec(double eps0, double gamma, double nbar);

}  // namespace lindblad3q
