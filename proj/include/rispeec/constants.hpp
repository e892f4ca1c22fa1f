#pragma once

namespace rispeec {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light = 299792458.0;          // m/s
inline constexpr double mu0 = 4.0e-7 * pi;                     // H/m
inline constexpr double eps0 = 1.0 / (mu0 * speed_of_light * speed_of_light);  // F/m

}  // namespace rispeec
