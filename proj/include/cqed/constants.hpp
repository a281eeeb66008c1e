#pragma once

#include <numbers>

namespace cqed::constants {

// 2019 SI exact values (CODATA 2018 release). Compiled in so that every
// derived MHz-level number is reproducible bit-for-bit across builds.
inline constexpr char revision[] = "CODATA-2018";

inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);  // h/2e, Wb

}  // namespace cqed::constants
