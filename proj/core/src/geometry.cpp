#include "leoacq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "leoacq/constants.hpp"
#include "leoacq/csv.hpp"
#include "leoacq/error.hpp"

namespace leoacq {

namespace {

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Look {
	double range;
	double elevation_deg;
};

// Station at (Re, 0, 0); orbit plane tilted so the sub-satellite point passes
// an angular distance `offset_angle` from the station when theta = 0.
Look look_angles(double orbit_radius, double offset_angle, double theta) {
	const double x = orbit_radius * std::cos(offset_angle) * std::cos(theta) - kEarthRadius;
	const double y = orbit_radius * std::sin(theta);
	const double z = orbit_radius * std::sin(offset_angle) * std::cos(theta);
	const double range = std::sqrt(x * x + y * y + z * z);
	return {range, rad2deg(std::asin(std::clamp(x / range, -1.0, 1.0)))};
}

} // namespace

std::size_t PassScenario::closest_approach_index() const {
	require(!samples.empty(), ErrorKind::parameter, "empty pass scenario");
	auto it = std::min_element(samples.begin(), samples.end(),
		[](const PassSample& a, const PassSample& b) { return a.range < b.range; });
	return static_cast<std::size_t>(it - samples.begin());
}

double PassScenario::min_path_loss_db() const {
	require(!samples.empty(), ErrorKind::parameter, "empty pass scenario");
	return std::min_element(samples.begin(), samples.end(),
		[](const PassSample& a, const PassSample& b) { return a.path_loss_db < b.path_loss_db; })
		->path_loss_db;
}

double doppler_shift(double carrier_freq, double radial_velocity) {
	require(carrier_freq > 0.0, ErrorKind::parameter, "carrier frequency must be positive");
	require(std::abs(radial_velocity) < kSpeedOfLight, ErrorKind::parameter,
		"radial velocity must be below c");
	return carrier_freq * radial_velocity / kSpeedOfLight;
}

std::vector<double> radial_velocity(std::span<const double> range, double dt) {
	require(range.size() >= 2, ErrorKind::parameter, "range series needs at least two samples");
	require(std::isfinite(dt) && dt > 0.0, ErrorKind::parameter, "time step must be positive");

	const std::size_t n = range.size();
	std::vector<double> v(n);
	v.front() = -(range[1] - range[0]) / dt;
	v.back() = -(range[n - 1] - range[n - 2]) / dt;
	for (std::size_t k = 1; k + 1 < n; ++k)
		v[k] = -(range[k + 1] - range[k - 1]) / (2.0 * dt);
	return v;
}

double free_space_loss(double range, double freq) {
	require(range > 0.0 && freq > 0.0, ErrorKind::parameter,
		"range and frequency must be positive");
	return 20.0 * std::log10(4.0 * std::numbers::pi * range * freq / kSpeedOfLight);
}

double slant_range(double orbit_height, double elevation_deg) {
	const double s = std::sin(deg2rad(elevation_deg));
	return std::sqrt(kEarthRadius * kEarthRadius * s * s + 2.0 * kEarthRadius * orbit_height
			   + orbit_height * orbit_height)
		- kEarthRadius * s;
}

PassScenario simulate_pass(const PassConfig& config) {
	require(config.orbit_height > 200.0e3 && config.orbit_height < 2000.0e3,
		ErrorKind::parameter, "orbit height must lie in (200 km, 2000 km)");
	require(config.elevation_mask_deg >= 0.0 && config.elevation_mask_deg < 90.0,
		ErrorKind::parameter, "elevation mask must lie in [0, 90)");
	require(std::isfinite(config.epoch_step) && config.epoch_step > 0.0,
		ErrorKind::parameter, "epoch step must be positive");
	require(config.carrier_freq > 0.0, ErrorKind::parameter,
		"carrier frequency must be configured");

	const double orbit_radius = kEarthRadius + config.orbit_height;
	const double mean_motion = std::sqrt(kEarthMu / (orbit_radius * orbit_radius * orbit_radius));
	const double offset_angle = std::abs(config.cross_track_offset) / kEarthRadius;
	const double mask = deg2rad(config.elevation_mask_deg);

	// Earth central angle at which the satellite sits exactly on the mask.
	const double visible_angle =
		std::acos(kEarthRadius * std::cos(mask) / orbit_radius) - mask;
	if (offset_angle >= visible_angle)
		fail(ErrorKind::no_visibility, "satellite never rises above the elevation mask");

	const double theta_max = std::acos(std::cos(visible_angle) / std::cos(offset_angle));
	const auto half = static_cast<long>(std::floor(theta_max / (mean_motion * config.epoch_step)));

	// Two extra epochs on each side so every kept sample gets central
	// differences for both velocity and Doppler rate.
	constexpr long pad = 2;
	std::vector<double> ranges;
	std::vector<double> elevations;
	for (long k = -half - pad; k <= half + pad; ++k) {
		const double theta = mean_motion * static_cast<double>(k) * config.epoch_step;
		const Look look = look_angles(orbit_radius, offset_angle, theta);
		ranges.push_back(look.range);
		elevations.push_back(look.elevation_deg);
	}

	const auto vrad = radial_velocity(ranges, config.epoch_step);
	std::vector<double> doppler(vrad.size());
	std::transform(vrad.begin(), vrad.end(), doppler.begin(),
		[&](double v) { return doppler_shift(config.carrier_freq, v); });

	PassScenario scenario;
	scenario.epoch_step = config.epoch_step;
	scenario.carrier_freq = config.carrier_freq;
	for (std::size_t idx = pad; idx + pad < ranges.size(); ++idx) {
		if (elevations[idx] < config.elevation_mask_deg - 1e-9)
			continue;
		PassSample sample;
		sample.t = static_cast<double>(idx - pad) * config.epoch_step;
		sample.range = ranges[idx];
		sample.elevation_deg = elevations[idx];
		sample.radial_velocity = vrad[idx];
		sample.doppler = doppler[idx];
		sample.doppler_rate = (doppler[idx + 1] - doppler[idx - 1]) / (2.0 * config.epoch_step);
		sample.path_loss_db = free_space_loss(sample.range, config.carrier_freq);
		scenario.samples.push_back(sample);
	}
	if (scenario.samples.empty())
		fail(ErrorKind::no_visibility, "no epoch above the elevation mask");

	const double t_first = scenario.samples.front().t;
	for (auto& sample : scenario.samples)
		sample.t -= t_first;
	return scenario;
}

void write_pass_csv(std::ostream& out, const PassScenario& scenario) {
	CsvWriter csv(out, "t_s,range_m,elev_deg,vrad_mps,doppler_hz,doppler_rate_hzps,path_loss_db");
	for (const auto& s : scenario.samples) {
		csv.field(s.t).field(s.range).field(s.elevation_deg).field(s.radial_velocity)
			.field(s.doppler).field(s.doppler_rate).field(s.path_loss_db);
		csv.end_row();
	}
}

} // namespace leoacq
