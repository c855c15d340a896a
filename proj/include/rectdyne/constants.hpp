#pragma once

// Physical and mathematical constants used across the library.
// CODATA 2018 values for the physical constants.

namespace rectdyne::constants {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Electron gyromagnetic ratio of the NV ground state, Hz per tesla.
inline constexpr double kElectronGyromagneticHzPerT = 2.8040e10;

// Proton gyromagnetic ratio, Hz per tesla (gamma/2pi).
inline constexpr double kProtonGyromagneticHzPerT = 42.577478461e6;

inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J/K
inline constexpr double kAvogadro = 6.02214076e23;     // 1/mol

}  // namespace rectdyne::constants
