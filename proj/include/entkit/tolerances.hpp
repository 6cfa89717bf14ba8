#pragma once

namespace entkit::tol {

// Absolute tolerances, Frobenius norm where a matrix is involved.
inline constexpr double eig = 1e-10;
inline constexpr double herm = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double trace = 1e-9;
inline constexpr double channel = 1e-9;
inline constexpr double major = 1e-10;
inline constexpr double entropy = 1e-9;

// Schmidt probabilities at or below this are treated as exact zeros.
inline constexpr double schmidt_cutoff = 1e-12;
// Eigenvalues below this are clamped to zero before any logarithm.
inline constexpr double log_clamp = 1e-15;

// Default optimizer slack for upper-bound measures.
inline constexpr double opt_er = 1e-3;
inline constexpr double opt_ef = 1e-6;
// E_F searches on general mixed inputs, where the landscape is flatter.
inline constexpr double opt_ef_mixed = 1e-3;

}  // namespace entkit::tol
