#pragma once

#include <iosfwd>
#include <string>

#include "shapestab/stability.hpp"

namespace shapestab {

/// Flat JSON object with keys geometry, N, lambda1, first_eigenvalue, d1,
/// rho, identity_residual, mu, verdict, theorem_basis. Absent values are
/// null; a missing first eigenvalue is the string "nonnegative".
std::string report_to_json(const StabilityReport& r);

/// Inverse of report_to_json. Throws std::invalid_argument on malformed
/// input, unknown keys or missing keys.
StabilityReport report_from_json(const std::string& text);

/// Same keys as a two-line CSV (header, values); null prints as empty.
void write_report_csv(std::ostream& out, const StabilityReport& r);

/// `lambda1,rho,verdict` rows.
void write_sweep_csv(std::ostream& out, const SweepResult& s);

/// rows, sign_changes, and when present bracket [lo, hi] and crossing.
std::string sweep_sidecar_json(const SweepResult& s);

/// foo.csv -> foo.json; any other name gets ".json" appended.
std::string sidecar_path(const std::string& csv_path);

}  // namespace shapestab
