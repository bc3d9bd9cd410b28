#pragma once

// Unit system used throughout: energies in meV, lengths in nm, magnetic
// fields in Tesla, wavevectors in 1/nm, frequencies in GHz (MHz where noted).

namespace holekp::constants {

// CODATA 2018
inline constexpr double hbar_Js        = 1.054571817e-34;
inline constexpr double electron_mass  = 9.1093837015e-31;   // kg
inline constexpr double elementary_q   = 1.602176634e-19;    // C
inline constexpr double planck_Js      = 6.62607015e-34;

// hbar^2/(2 m0) in meV * nm^2
inline constexpr double hbar2_over_2m0 = 38.0998212e0;

// Bohr magneton in meV/T
inline constexpr double mu_B = 5.7883818060e-2;

// 1 meV / h in GHz
inline constexpr double meV_to_GHz = 241.798924208e0;

// mu_B / h in GHz/T
inline constexpr double mu_B_GHz_per_T = mu_B * meV_to_GHz;

// e/hbar in 1/(T*nm^2); converts A [T*nm] to a wavevector [1/nm]
inline constexpr double e_over_hbar = 1.5192674488e-3;

} // namespace holekp::constants
