#pragma once

// Closed-form configurations with known optimality properties.

#include "linepack/frame.hpp"

namespace linepack {

/// N equally spaced lines in R^2: (cos(k pi/N), sin(k pi/N)), k = 0..N-1.
Frame half_circle_config(int n);

/// Vertices of the regular simplex in R^d (N = d + 1), pairwise inner
/// product -1/d. Built by centering the standard basis of R^(d+1) and
/// expressing it in an orthonormal basis of the hyperplane orthogonal to the
/// all-ones vector.
Frame simplex_etf(int d);

/// The six diagonals of the icosahedron in R^3: normalized cyclic
/// permutations of (0, +-1, phi), one representative per antipodal pair with
/// the first nonzero coordinate positive.
Frame icosahedron_etf6();

/// Standard basis of R^d.
Frame orthonormal_basis(int d);

}  // namespace linepack
