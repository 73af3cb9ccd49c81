#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ifc/model.hpp"

namespace ifc {

// Unit-diagonal PSD matrices as L L^H with L lower triangular and every row of
// unit norm. Row i carries i complex off-diagonal entries and one real diagonal
// entry, i.e. a point on the sphere S^{2i} described by 2i hyperspherical
// angles. Any angle vector yields a valid correlation matrix, which is what
// lets an unconstrained simplex search run over it.

/// Number of angles for an n x n correlation matrix: n (n - 1).
int correlation_angle_count(int n);

CMatrix correlation_from_angles(int n, std::span<const double> angles);

/// Angles reproducing `sigma`. Returns nullopt unless sigma has a unit
/// diagonal and a Cholesky factor with every squared pivot above 1e-12.
std::optional<std::vector<double>> angles_from_correlation(const CMatrix& sigma);

/// Angles of the identity matrix (all pi/2).
std::vector<double> identity_angles(int n);

}  // namespace ifc
