#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "shapestab/errors.hpp"
#include "shapestab/format.hpp"
#include "shapestab/neumann.hpp"
#include "shapestab/profile.hpp"
#include "shapestab/report_io.hpp"
#include "shapestab/spectra.hpp"
#include "shapestab/stability.hpp"

namespace shapestab::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string geometry = "cylinder";
  std::optional<int> dim;
  std::string nonlinearity = "torsion";
  std::optional<double> lambda1;
  std::optional<std::string> domain;
  std::optional<std::string> range;
  bool relative_to_alpha = false;
  std::string format = "csv";
  std::optional<std::string> out_path;
  std::optional<double> tol;
  int k = 4;
  bool eigenfunctions = false;
  std::string suite = "identities";
};

// Everything a command produces; files are written only after success.
struct Output {
  std::string body;
  std::vector<std::pair<std::string, std::string>> extra_files;
};

ShootConfig shoot_config(const Options& o) {
  ShootConfig cfg;
  if (o.tol) {
    if (!(*o.tol > 0.0) || *o.tol > 1e-3) throw std::invalid_argument("--tol must be in (0, 1e-3]");
    cfg.rel_tol = cfg.abs_tol = *o.tol;
  }
  return cfg;
}

std::optional<NeumannDomain> domain_of(const Options& o) {
  if (!o.domain) return std::nullopt;
  return NeumannDomain::parse(*o.domain);
}

int cone_dimension(const Options& o) {
  int n = o.dim.value_or(0);
  if (const auto d = domain_of(o); d && (d->kind == NeumannDomain::Kind::cap || d->kind == NeumannDomain::Kind::sphere)) {
    if (o.dim && *o.dim != d->dimension) throw std::invalid_argument("--dim disagrees with the dimension in --domain");
    n = d->dimension;
  }
  if (n == 0) n = 3;
  if (n < 2) throw std::invalid_argument("--dim must be >= 2");
  return n;
}

double lambda1_of(const Options& o) {
  const auto d = domain_of(o);
  if (o.lambda1 && d) throw std::invalid_argument("give either --lambda1 or --domain, not both");
  if (o.lambda1) {
    if (!(*o.lambda1 > 0.0) || !std::isfinite(*o.lambda1)) throw std::invalid_argument("--lambda1 must be positive");
    return *o.lambda1;
  }
  if (d) return neumann_lambda1(*d);
  throw std::invalid_argument("this command needs --lambda1 or --domain");
}

Profile profile_of(const Options& o) {
  const Nonlinearity nl = Nonlinearity::parse(o.nonlinearity);
  const Geometry g = parse_geometry(o.geometry);
  return g == Geometry::cone ? solve_radial(nl, cone_dimension(o), shoot_config(o)) : solve_1d(nl, shoot_config(o));
}

void require_format(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw std::invalid_argument("--format must be csv or json");
}

ordered_json number_array(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Output cmd_solve_profile(const Options& o) {
  require_format(o);
  const Profile p = profile_of(o);
  Output r;
  if (o.format == "csv") {
    std::ostringstream s;
    write_profile_csv(s, p);
    r.body = s.str();
    return r;
  }
  ordered_json j;
  j["geometry"] = to_string(p.geometry);
  j["N"] = p.geometry == Geometry::cone ? ordered_json(p.dimension) : ordered_json(nullptr);
  j["nonlinearity"] = p.nonlinearity.descriptor();
  j["u_at_0"] = p.u_at_0;
  j["du_at_1"] = p.du_at_1;
  j["d2u_at_1"] = p.d2u_at_1;
  j["energy"] = energy(p);
  j["ode_residual"] = ode_residual(p);
  j["r"] = number_array({p.grid.nodes().begin(), p.grid.nodes().end()});
  j["u"] = number_array(p.u);
  j["du"] = number_array(p.du);
  r.body = j.dump(2) + "\n";
  return r;
}

Output cmd_spectrum(const Options& o) {
  require_format(o);
  if (o.k < 1 || o.k > 64) throw std::invalid_argument("--k must be in [1, 64]");
  const Profile p = profile_of(o);
  std::vector<EigenResult> eigs;
  std::string problem;
  if (p.geometry == Geometry::cylinder) {
    eigs = alpha_spectrum(p, o.k);
    problem = "alpha";
  } else {
    if (p.dimension < 3) throw std::invalid_argument("the singular spectrum needs --dim >= 3");
    eigs = nuhat_nonpositive(p);
    if (eigs.size() > static_cast<std::size_t>(o.k)) eigs.resize(o.k);
    problem = "nuhat";
  }
  Output r;
  if (o.format == "csv") {
    std::ostringstream s;
    write_spectrum_csv(s, eigs, o.eigenfunctions);
    r.body = s.str();
    return r;
  }
  ordered_json j;
  j["problem"] = problem;
  ordered_json values = ordered_json::array();
  for (const auto& e : eigs) values.push_back(e.value);
  j["values"] = values;
  if (problem == "nuhat" && eigs.empty()) j["first"] = "nonnegative";
  if (o.eigenfunctions) {
    j["r"] = number_array({p.grid.nodes().begin(), p.grid.nodes().end()});
    ordered_json fns = ordered_json::array();
    for (const auto& e : eigs) fns.push_back(number_array(e.eigenfunction));
    j["eigenfunctions"] = fns;
  }
  r.body = j.dump(2) + "\n";
  return r;
}

Output cmd_neumann(const Options& o) {
  require_format(o);
  const auto d = domain_of(o);
  if (!d) throw std::invalid_argument("neumann needs --domain");
  const double l = neumann_lambda1(*d);
  Output r;
  if (o.format == "json") {
    ordered_json j;
    j["domain"] = d->descriptor();
    j["lambda1"] = l;
    r.body = j.dump(2) + "\n";
  } else {
    r.body = "lambda1=" + format_double(l) + "\n";
  }
  return r;
}

Output cmd_classify(const Options& o) {
  require_format(o);
  const double l1 = lambda1_of(o);
  const Profile p = profile_of(o);
  const StabilityReport rep = p.geometry == Geometry::cone ? classify_cone(p, l1) : classify_cylinder(p, l1);
  Output r;
  if (o.format == "json") {
    r.body = report_to_json(rep) + "\n";
  } else {
    std::ostringstream s;
    write_report_csv(s, rep);
    r.body = s.str();
  }
  return r;
}

struct VerifyOutcome {
  Output output;
  bool passed = true;
};

VerifyOutcome cmd_verify(const Options& o) {
  require_format(o);
  const double l1 = lambda1_of(o);
  const Profile p = profile_of(o);
  const HProfile h = solve_h(p, l1);
  VerifyOutcome v;
  ordered_json j;
  j["suite"] = o.suite;
  if (o.suite == "identities") {
    double worst = 0.0;
    if (p.geometry == Geometry::cone) {
      const double res = cone_identity_residual(p, h);
      j["cone_identity_residual"] = res;
      worst = res;
    } else {
      const double res = cylinder_identity_residual(p, h);
      const double two_route = std::abs(rho_index(p, h) - mode_second_variation(Geometry::cylinder, p, h));
      j["cylinder_identity_residual"] = res;
      j["rho_minus_d1"] = two_route;
      worst = std::max(res, two_route);
    }
    j["max_residual"] = worst;
    v.passed = worst < 1e-6;
  } else if (o.suite == "positivity") {
    double u_min = INFINITY, h_min = INFINITY;
    for (std::size_t i = 0; i + 1 < p.u.size(); ++i) u_min = std::min(u_min, p.u[i]);
    const std::size_t first = p.geometry == Geometry::cone ? 1 : 0;
    for (std::size_t i = first; i < h.h.size(); ++i) h_min = std::min(h_min, h.h[i]);
    j["min_u"] = u_min;
    j["min_h"] = h_min;
    j["h_at_0"] = h.h_at_0;
    v.passed = u_min > 0.0 && h_min > 0.0;
  } else {
    throw std::invalid_argument("--suite must be identities or positivity");
  }
  j["passed"] = v.passed;
  if (o.format == "json") {
    v.output.body = j.dump(2) + "\n";
  } else {
    std::ostringstream s;
    for (const auto& [key, value] : j.items()) {
      s << key << '=' << (value.is_number_float() ? format_double(value.get<double>()) : value.dump()) << '\n';
    }
    v.output.body = s.str();
  }
  return v;
}

std::tuple<double, double, int> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string piece; std::getline(ss, piece, ':');) parts.push_back(piece);
  if (parts.size() != 3) throw std::invalid_argument("--range expects lo:hi:steps");
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad number '" + s + "' in --range");
    return v;
  };
  const double steps = num(parts[2]);
  if (steps < 1 || steps != std::floor(steps) || steps > 100000) throw std::invalid_argument("--range steps must be a positive integer");
  return {num(parts[0]), num(parts[1]), static_cast<int>(steps)};
}

Output cmd_sweep(const Options& o) {
  require_format(o);
  if (!o.range) throw std::invalid_argument("sweep needs --range lo:hi:steps");
  if (parse_geometry(o.geometry) != Geometry::cylinder) throw std::invalid_argument("sweep is defined for --geometry cylinder");
  auto [lo, hi, steps] = parse_range(*o.range);
  const Profile p = profile_of(o);
  if (o.relative_to_alpha) {
    const double shift = -alpha_spectrum(p, 1).front().value;
    lo += shift;
    hi += shift;
  }
  const SweepResult s = sweep_rho(p, lo, hi, steps);
  Output r;
  if (o.format == "json") {
    ordered_json j = ordered_json::parse(sweep_sidecar_json(s));
    ordered_json rows = ordered_json::array();
    for (const auto& row : s.rows) rows.push_back({{"lambda1", row.lambda1}, {"rho", row.rho}, {"verdict", to_string(row.verdict)}});
    j["rows"] = rows;
    r.body = j.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    write_sweep_csv(csv, s);
    r.body = csv.str();
    if (o.out_path) r.extra_files.emplace_back(sidecar_path(*o.out_path), sweep_sidecar_json(s) + "\n");
  }
  return r;
}

Output cmd_threshold(const Options& o) {
  const Geometry g = parse_geometry(o.geometry);
  Output r;
  if (g == Geometry::cone) {
    r.body = "threshold=" + format_double(cone_dimension(o) - 1.0) + "\n";
    return r;
  }
  const Nonlinearity nl = Nonlinearity::parse(o.nonlinearity);
  if (nl.kind() != Nonlinearity::Kind::torsion) {
    throw std::invalid_argument("a closed threshold exists for torsion cylinders only; use sweep for other f");
  }
  r.body = "beta=" + format_double(torsion_beta()) + "\n";
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Background solutions, spectra and stability verdicts for sector and cylinder shape problems",
               "shapestab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file with long option names as keys");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  std::optional<int> dim;
  app.add_option("--geometry", o.geometry, "cone or cylinder")->check(CLI::IsMember({"cone", "cylinder"}));
  app.add_option("--dim", dim, "ambient dimension N of the cone");
  app.add_option("--nonlinearity", o.nonlinearity, "torsion | lane-emden:p | linear:a,b | tabulated:file.csv");
  app.add_option("--lambda1", o.lambda1, "first nontrivial Neumann eigenvalue of the cross-section");
  app.add_option("--domain", o.domain, "interval:L | rectangle:a,b | disk:R | cap:theta0,N | sphere:N | explicit:v");
  app.add_option("--range", o.range, "sweep range lo:hi:steps");
  app.add_flag("--relative-to-alpha", o.relative_to_alpha, "read --range as offsets from -alpha1");
  app.add_option("--format", o.format, "csv or json");
  app.add_option("--out", o.out_path, "output file (stdout when absent)");
  app.add_option("--tol", o.tol, "ODE tolerance for the background solve");
  app.add_option("--k", o.k, "number of eigenvalues");
  app.add_flag("--eigenfunctions", o.eigenfunctions, "include eigenfunction samples");
  app.add_option("--suite", o.suite, "verify suite: identities or positivity");

  auto* solve = app.add_subcommand("solve-profile", "background solution u on [0,1]");
  auto* spectrum = app.add_subcommand("spectrum", "alpha spectrum (cylinder) or nonpositive singular spectrum (cone)");
  auto* neumann = app.add_subcommand("neumann", "first nontrivial Neumann eigenvalue of a cross-section");
  auto* classify = app.add_subcommand("classify", "stability verdict with evidence");
  auto* verify = app.add_subcommand("verify", "identity and positivity checks");
  auto* sweep = app.add_subcommand("sweep", "rho over a range of lambda1");
  auto* threshold = app.add_subcommand("threshold", "sharp stability threshold");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  o.dim = dim;

  try {
    Output result;
    bool passed = true;
    if (solve->parsed()) result = cmd_solve_profile(o);
    else if (spectrum->parsed()) result = cmd_spectrum(o);
    else if (neumann->parsed()) result = cmd_neumann(o);
    else if (classify->parsed()) result = cmd_classify(o);
    else if (verify->parsed()) {
      auto v = cmd_verify(o);
      result = std::move(v.output);
      passed = v.passed;
    } else if (sweep->parsed()) result = cmd_sweep(o);
    else if (threshold->parsed()) result = cmd_threshold(o);

    if (o.out_path) {
      write_file(*o.out_path, result.body);
      for (const auto& [path, content] : result.extra_files) write_file(path, content);
    } else {
      out << result.body;
    }
    if (!passed) {
      err << "verify: check failed\n";
      return 1;
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    err << "solver error in " << e.operation() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace shapestab::cli
