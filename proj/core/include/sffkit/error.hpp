#pragma once

#include <stdexcept>
#include <string>

namespace sffkit {

/// Failure categories surfaced by the toolkit. Each public operation
/// documents which of these it can raise; tests and callers dispatch on the
/// code rather than parsing messages.
enum class errc {
  file_not_found,
  malformed_wav,
  unsupported_wav_encoding,
  manifest_parse,
  manifest_duplicate_utterance,
  manifest_conflicting_class,
  invalid_argument,
  empty_input,
  length_mismatch,
  filterbank_degenerate,
  solver_not_converged,
  mixed_sample_rates,
  insufficient_speakers,
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Raised when the SVM dual solver hits its iteration cap. Carries the best
/// KKT violation reached so callers can decide whether the partial solution
/// is usable.
class SolverNotConverged : public Error {
 public:
  SolverNotConverged(const std::string& what, double kkt_violation)
      : Error(errc::solver_not_converged, what), kkt_violation_(kkt_violation) {}

  double kkt_violation() const noexcept { return kkt_violation_; }

 private:
  double kkt_violation_;
};

}  // namespace sffkit
