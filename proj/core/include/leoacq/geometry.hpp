#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace leoacq {

struct PassSample {
	double t = 0.0;                // s since scenario start
	double range = 0.0;            // m
	double elevation_deg = 0.0;
	double radial_velocity = 0.0;  // m/s, positive while closing
	double doppler = 0.0;          // Hz
	double doppler_rate = 0.0;     // Hz/s
	double path_loss_db = 0.0;
};

struct PassScenario {
	double epoch_step = 1.0;
	double carrier_freq = 0.0;
	std::vector<PassSample> samples;

	bool empty() const noexcept { return samples.empty(); }
	std::size_t size() const noexcept { return samples.size(); }
	std::size_t closest_approach_index() const;
	double min_path_loss_db() const;
};

struct PassConfig {
	double orbit_height = 645.0e3;       // m
	double elevation_mask_deg = 10.0;
	double cross_track_offset = 0.0;     // m of ground distance at closest approach
	double epoch_step = 1.0;             // s
	double carrier_freq = 0.0;           // Hz, no default: must be configured
};

/// carrier_freq * radial_velocity / c. Positive radial velocity (closing
/// range) gives positive Doppler.
double doppler_shift(double carrier_freq, double radial_velocity);

/// Radial velocity from a range series sampled every dt seconds: central
/// differences in the interior, one-sided at the ends, negated so that a
/// shrinking range is positive.
std::vector<double> radial_velocity(std::span<const double> range, double dt);

/// Friis free-space path loss 20 log10(4 pi d f / c).
double free_space_loss(double range, double freq);

/// Closed-form slant range to a satellite at orbit_height seen at the given
/// elevation from a spherical Earth.
double slant_range(double orbit_height, double elevation_deg);

/// Circular two-body pass over a non-rotating spherical Earth. The ground
/// station sits cross_track_offset from the ground track; samples are
/// symmetric about closest approach and kept only above the mask.
PassScenario simulate_pass(const PassConfig& config);

/// Header: t_s,range_m,elev_deg,vrad_mps,doppler_hz,doppler_rate_hzps,path_loss_db
void write_pass_csv(std::ostream& out, const PassScenario& scenario);

} // namespace leoacq
