#pragma once

#include <cstddef>

namespace confound::tol {

// Identities that hold exactly in real arithmetic.
inline constexpr double kArithmetic = 1e-12;
// User-typed CPT rows.
inline constexpr double kRowSum = 1e-9;
// Distributional-mode equality in confounder selection.
inline constexpr double kDistributional = 1e-9;
// Winner/interaction decisions in scans and classification.
inline constexpr double kDecision = 1e-12;

inline constexpr std::size_t kDefaultJointCap = std::size_t{1} << 24;
inline constexpr std::size_t kMaxSelectionPool = 12;

}  // namespace confound::tol
