#pragma once

namespace pbrlab::tol {

// Statevector algebra (dimension <= 4, a handful of terms per sum).
inline constexpr double kNorm = 1e-12;
// Gridded two-particle wavefunctions (sums over up to 256^2 cells).
inline constexpr double kGrid = 1e-9;
// Probability vectors on ontic spaces.
inline constexpr double kDistribution = 1e-9;
inline constexpr double kClamp = 1e-12;
// Canonical-phase pivot: first amplitude above this magnitude is rotated real positive.
inline constexpr double kPhasePivot = 1e-9;
inline constexpr double kSupport = 1e-9;

// LP machinery.
inline constexpr double kPivot = 1e-10;
inline constexpr double kFeasibility = 1e-9;
inline constexpr double kBornBand = 1e-9;
// Born targets at or below this are structural zeros and are imposed exactly.
inline constexpr double kStructuralZero = 1e-14;

}  // namespace pbrlab::tol
