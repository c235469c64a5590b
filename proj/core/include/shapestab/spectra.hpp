#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shapestab/grid.hpp"
#include "shapestab/profile.hpp"

namespace shapestab {

enum class ProblemTag { nuhat, alpha, cap };

std::string to_string(ProblemTag t);

/// One eigenvalue of a one-dimensional linearized problem.
struct EigenResult {
  int index = 0;  // interior nodes of the eigenfunction
  double value = 0.0;
  Grid grid = Grid::uniform(2);
  std::vector<double> eigenfunction;  // max-abs normalized
  ProblemTag tag = ProblemTag::alpha;
};

struct SpectrumOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double eigen_tol = 1e-13;  // bracket width for the final root solve
  double bracket_cap = 1e6;  // largest admissible |upper bound|
  double launch_eps = 1e-6;
};

/// k smallest eigenvalues of -z'' - f'(u) z = α z, z'(0) = z(1) = 0.
std::vector<EigenResult> alpha_spectrum(const Profile& p, int k, const SpectrumOptions& opts = {});

/// Same with an arbitrary potential q(x) in place of f'(u(x)).
std::vector<EigenResult> alpha_spectrum(const std::function<double(double)>& potential, int k, const Grid& grid,
                                        const SpectrumOptions& opts = {});

/// Either the first singular eigenvalue (when negative) or the verdict that
/// no nonpositive one exists.
struct NuhatResult {
  std::optional<EigenResult> eigen;  // empty means "nonnegative"
  bool nonnegative() const noexcept { return !eigen.has_value(); }
};

/// First eigenvalue of -z'' - (N-1)/r z' - f'(u) z = ν̂ z / r², z(1) = 0,
/// searched on [search_floor, 0]. The default floor is -(N-1) + 1e-9.
/// Throws AmbiguousNodeCount if an eigenvalue already lies below the floor.
NuhatResult nuhat_first(const Profile& p, std::optional<double> search_floor = std::nullopt,
                        const SpectrumOptions& opts = {});

/// All nonpositive singular eigenvalues, ascending.
std::vector<EigenResult> nuhat_nonpositive(const Profile& p, const SpectrumOptions& opts = {});

/// Indicial exponent of r^γ at the origin: γ² + (N-2)γ + ν̂ = 0, larger root.
double indicial_exponent(int dimension, double nuhat);

enum class Degeneracy { nondegenerate, degenerate, unknown };

std::string to_string(Degeneracy d);

/// Zero-eigenvalue screening of the linearized operator on the sector or
/// cylinder, given λ₁ of the cross-section. Zero tests use 1e-8.
Degeneracy nondegeneracy_check(Geometry geometry, const Profile& p, double lambda1, const SpectrumOptions& opts = {});

/// CSV `index,value` with index counted from 1. With eigenfunctions the
/// header is `index,value,r,z` and each eigenvalue repeats once per node.
void write_spectrum_csv(std::ostream& out, const std::vector<EigenResult>& eigs, bool with_eigenfunctions);

}  // namespace shapestab
