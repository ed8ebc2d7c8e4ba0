#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>

#include "leoacq/constants.hpp"
#include "leoacq/integrators.hpp"

namespace leoacq {

struct Peak {
	std::size_t bin = 0;     // i_max
	std::size_t sample = 0;  // j_max
	double value = 0.0;      // R_max
};

/// Global maximum; ties go to the lowest bin, then the lowest sample.
Peak peak(const DetectionGrid& grid);

/// Maximum-to-second-maximum ratio: R_max over the largest value in the peak
/// row outside the cyclic window [j_max - l_spc, j_max + l_spc]. Returns +inf
/// when the remainder is all zero (1 for an all-zero grid).
double mtsmr(const DetectionGrid& grid, std::size_t samples_per_chip);

/// Maximum-to-mean ratio: R_max over the mean of every cell that is not in
/// both the row band [i_max - 1, i_max + 1] and the cyclic column window
/// [j_max - l_spc, j_max + l_spc].
double mtmr(const DetectionGrid& grid, std::size_t samples_per_chip);

/// indicator >= threshold; threshold must be positive.
bool decide(double indicator, double threshold = kDefaultMtsmrThreshold);

struct AcqResult {
	double t = 0.0;
	IntegrationSpec spec;
	double doppler_hat = 0.0;          // Hz, bins[i_max]
	std::size_t code_phase_hat = 0;    // samples, j_max
	double mtsmr = 1.0;
	double mtmr = 1.0;
	bool decided = false;              // mtsmr >= threshold_used
	double threshold_used = kDefaultMtsmrThreshold;
	// Grid metadata the evaluation tolerances need.
	double bin_width = 0.0;
	std::size_t samples_per_code = 0;
	std::size_t samples_per_chip = 1;
};

/// Peak search plus both indicators; the decision uses MTSMR.
AcqResult evaluate(const DetectionGrid& grid, double threshold = kDefaultMtsmrThreshold,
	double t = 0.0);

/// Header: t_s,strategy,total_ms,doppler_hz,code_phase_samples,mtsmr,mtmr,decided
void write_results_csv(std::ostream& out, std::span<const AcqResult> results);

} // namespace leoacq
