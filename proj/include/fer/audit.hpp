#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fer/generators.hpp"

namespace fer {

// One property check over a number of Monte-Carlo trials. `measured` is the
// worst value seen; `higher_is_better` flips the pass comparison (used by
// the injectivity probe, where the minimum distance must stay large).
struct AuditRow {
  std::string name;
  int trials = 0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool higher_is_better = false;
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  bool pass = false;
};

// D-level property audit of a triple: identity, compatibility over Haar
// pairs, orthonormality/determinant, injectivity probe, branch independence,
// psi equivariance, norm preservation, and the frequency-bound DFT.
AuditReport run_property_audit(const GeneratorTriple& g, int trials, std::uint64_t seed);

// ValidationReport rows recast as audit rows (trials = 1).
AuditReport validation_as_audit(const ValidationReport& report);

// Stable CSV: check,trials,max_residual,tolerance,pass
std::string audit_to_csv(const AuditReport& report);

}  // namespace fer
