#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lindblad3q {

// Exit-code taxonomy used by the CLI:
//   validation_error (and derived)  -> 1
//   instability_error               -> 2
//   series_convergence_error        -> 3
// Oracle mismatches are reported, not thrown.

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Analytic spectral/kernel paths only cover the U(1)-symmetric sector.
struct u1_breaking_error : validation_error {
  using validation_error::validation_error;
};

struct cap_exceeded_error : validation_error {
  using validation_error::validation_error;
};

struct instability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct defective_matrix_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct series_convergence_error : std::runtime_error {
  series_convergence_error(const std::string& what, double last_term_magnitude)
      : std::runtime_error(what), last_term(last_term_magnitude) {}
  double last_term;
};

// Propagator degenerates to a point mass; carries its location.
struct delta_distribution_error : std::runtime_error {
  delta_distribution_error(const std::string& what, std::complex<double> at)
      : std::runtime_error(what), center(at) {}
  std::complex<double> center;
};

}  // namespace lindblad3q
