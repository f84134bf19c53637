#ifndef MCFREQ_CONSTANTS_HPP
#define MCFREQ_CONSTANTS_HPP

namespace mcfreq {

// Physical constants, CODATA 2018 (exact where the SI defines them so).
namespace constants {
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double avogadro = 6.02214076e23;         // 1/mol
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

}  // namespace mcfreq

#endif
