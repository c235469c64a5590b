#pragma once

#include <functional>
#include <vector>

#include "shapestab/profile.hpp"

namespace shapestab {

/// k smallest eigenvalues of the 5-point discretization of -Δ - q(x₂) on
/// (0, L) × (0, 1): Neumann (mirror ghost nodes) on x₁ = 0, x₁ = L and
/// x₂ = 0, Dirichlet on x₂ = 1. The mesh has n cells in x₂ and round(L n)
/// cells in x₁. Requires 2 <= n <= 128.
std::vector<double> fd_spectrum_2d(const std::function<double(double)>& potential, double L, int n, int k);

/// With q = f'(u) from a cylinder profile.
std::vector<double> fd_spectrum_2d(const Profile& p, double L, int n, int k);

}  // namespace shapestab
