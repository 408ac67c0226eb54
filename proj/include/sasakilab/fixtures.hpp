// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/manifold.hpp"

#include <string>
#include <vector>

namespace sasakilab {

struct FixtureInfo {
    std::string name;
    std::string description;
};

/// Shipped closed-form structures. "sphere3.dhom(a)" takes any a > 0.
const std::vector<FixtureInfo>& fixture_catalog();

/// Manifold-file contents of a fixture. Throws InputError for unknown names.
ManifoldFile fixture_file(const std::string& name);
/// Loads a fixture through the same text loader used for user files.
LoadedManifold fixture(const std::string& name);

/// Least-squares coefficient c making Ric - 2n g + c Hess(f) vanish on D over
/// sampled points, for a basic profile f.
double solve_potential_coefficient(const SasakianStructure& s, const CoordExpr& profile,
                                   std::span<const std::vector<double>> points);

}  // namespace sasakilab
