#pragma once

// Physical constants, CODATA 2018. Everything downstream pulls from here so
// the values exist in exactly one place.
namespace entangler::constants {

inline constexpr double c = 299792458.0;          // m/s
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double k_B = 1.380649e-23;       // J/K
inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace entangler::constants
