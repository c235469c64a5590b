#include "shapestab/report_io.hpp"

#include <ostream>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "shapestab/format.hpp"

namespace shapestab {

namespace {

using nlohmann::ordered_json;

const char* const kKeys[] = {"geometry", "N",   "lambda1", "first_eigenvalue", "d1", "rho", "identity_residual",
                             "mu",       "verdict", "theorem_basis"};

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::optional<double> opt_number(const ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw std::invalid_argument(std::string("report key '") + key + "' must be a number or null");
  return v.get<double>();
}

double number(const ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument(std::string("report key '") + key + "' must be a number");
  return v.get<double>();
}

std::string csv_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string report_to_json(const StabilityReport& r) {
  ordered_json j;
  j["geometry"] = to_string(r.geometry);
  j["N"] = r.dimension ? ordered_json(*r.dimension) : ordered_json(nullptr);
  j["lambda1"] = r.lambda1;
  j["first_eigenvalue"] = r.first_eigenvalue ? ordered_json(*r.first_eigenvalue) : ordered_json("nonnegative");
  j["d1"] = opt(r.d1);
  j["rho"] = opt(r.rho);
  j["identity_residual"] = opt(r.identity_residual);
  j["mu"] = r.mu;
  j["verdict"] = to_string(r.verdict);
  j["theorem_basis"] = r.theorem_basis;
  return j.dump(2);
}

StabilityReport report_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("report must be a JSON object");
  const std::set<std::string> known(std::begin(kKeys), std::end(kKeys));
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown report key '" + key + "'");
  }
  for (const char* key : kKeys) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing report key '") + key + "'");
  }
  try {
    StabilityReport r;
    r.geometry = parse_geometry(j.at("geometry").get<std::string>());
    if (!j.at("N").is_null()) r.dimension = j.at("N").get<int>();
    r.lambda1 = number(j, "lambda1");
    const auto& fe = j.at("first_eigenvalue");
    if (fe.is_string()) {
      if (fe.get<std::string>() != "nonnegative") throw std::invalid_argument("first_eigenvalue string must be 'nonnegative'");
    } else {
      r.first_eigenvalue = number(j, "first_eigenvalue");
    }
    r.d1 = opt_number(j, "d1");
    r.rho = opt_number(j, "rho");
    r.identity_residual = opt_number(j, "identity_residual");
    r.mu = number(j, "mu");
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    r.theorem_basis = j.at("theorem_basis").get<std::string>();
    return r;
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

void write_report_csv(std::ostream& out, const StabilityReport& r) {
  for (std::size_t i = 0; i < std::size(kKeys); ++i) out << (i ? "," : "") << kKeys[i];
  out << '\n';
  out << to_string(r.geometry) << ',' << (r.dimension ? std::to_string(*r.dimension) : "") << ','
      << format_double(r.lambda1) << ',' << (r.first_eigenvalue ? format_double(*r.first_eigenvalue) : "nonnegative")
      << ',' << csv_field(r.d1) << ',' << csv_field(r.rho) << ',' << csv_field(r.identity_residual) << ','
      << format_double(r.mu) << ',' << to_string(r.verdict) << ',' << csv_quote(r.theorem_basis) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& s) {
  out << "lambda1,rho,verdict\n";
  for (const auto& row : s.rows) {
    out << format_double(row.lambda1) << ',' << format_double(row.rho) << ',' << to_string(row.verdict) << '\n';
  }
}

std::string sweep_sidecar_json(const SweepResult& s) {
  ordered_json j;
  j["rows"] = s.rows.size();
  j["sign_changes"] = s.sign_changes;
  if (s.bracket) j["bracket"] = {s.bracket->first, s.bracket->second};
  if (s.crossing) j["crossing"] = *s.crossing;
  return j.dump(2);
}

std::string sidecar_path(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() > ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
  }
  return csv_path + ".json";
}

}  // namespace shapestab
