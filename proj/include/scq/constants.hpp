#pragma once

namespace scq::constants {

// CODATA 2018 exact SI values.
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double hbar = 1.054571817e-34;               // J s

}  // namespace scq::constants
