#pragma once

#include <numbers>

namespace leoacq {

inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kEarthRadius = 6371.0e3;         // m, spherical model
inline constexpr double kEarthMu = 3.986004418e14;       // m^3/s^2
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One processing unit is one code period.
inline constexpr double kUnitSeconds = 1.0e-3;
inline constexpr int kUnitsPerBit = 20;                  // 50 bps data
inline constexpr double kBitMilliseconds = 20.0;

inline constexpr double kGpsChipRate = 1.023e6;
inline constexpr int kGoldCodeLength = 1023;

// Default real-IF front end (configuration, not physics).
inline constexpr double kDefaultSampleRate = 4.092e6;
inline constexpr double kDefaultIntermediateFreq = 1.25e6;

inline constexpr double kDefaultMtsmrThreshold = 2.5;

} // namespace leoacq
