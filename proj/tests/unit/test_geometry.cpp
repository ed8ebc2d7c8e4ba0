#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "leoacq/constants.hpp"
#include "leoacq/error.hpp"
#include "leoacq/geometry.hpp"

using namespace leoacq;

namespace {

PassConfig overhead(double carrier = 1.5e9) {
	PassConfig c;
	c.orbit_height = 645.0e3;
	c.elevation_mask_deg = 10.0;
	c.epoch_step = 1.0;
	c.carrier_freq = carrier;
	return c;
}

} // namespace

TEST(DopplerShift, ZeroMotionIsZero) {
	EXPECT_EQ(doppler_shift(1.5e9, 0.0), 0.0);
	EXPECT_EQ(doppler_shift(2.2e9, 0.0), 0.0);
}

TEST(DopplerShift, MicroLightSpeedGivesPpm) {
	EXPECT_NEAR(doppler_shift(1.5e9, kSpeedOfLight * 1e-6), 1500.0, 1e-9);
}

TEST(DopplerShift, LeoVelocity) {
	// 1.5e9 * 7500 / 299792458
	EXPECT_NEAR(doppler_shift(1.5e9, 7500.0), 37526.0, 1.0);
	EXPECT_NEAR(doppler_shift(1.5e9, -7500.0), -37526.0, 1.0);
}

TEST(DopplerShift, LinearInCarrier) {
	EXPECT_NEAR(doppler_shift(3.0e9, 1234.5), 2.0 * doppler_shift(1.5e9, 1234.5), 1e-9);
}

TEST(DopplerShift, RejectsBadInput) {
	EXPECT_THROW(doppler_shift(0.0, 10.0), Error);
	EXPECT_THROW(doppler_shift(1.5e9, kSpeedOfLight), Error);
}

TEST(RadialVelocity, ConstantRangeIsZero) {
	const std::vector<double> r(10, 7.0e5);
	for (double v : radial_velocity(r, 1.0))
		EXPECT_EQ(v, 0.0);
}

TEST(RadialVelocity, LinearRangeIsExact) {
	std::vector<double> r;
	for (int k = 0; k < 12; ++k)
		r.push_back(1.0e6 - 100.0 * 0.5 * k);
	for (double v : radial_velocity(r, 0.5))
		EXPECT_NEAR(v, 100.0, 1e-9);
}

TEST(RadialVelocity, QuadraticInteriorMatchesDerivative) {
	const double r0 = 9.0e5, a = 3.5, dt = 0.25;
	std::vector<double> r;
	for (int k = 0; k < 20; ++k) {
		const double t = k * dt;
		r.push_back(r0 + a * t * t);
	}
	const auto v = radial_velocity(r, dt);
	for (std::size_t k = 1; k + 1 < v.size(); ++k)
		EXPECT_NEAR(v[k], -2.0 * a * (k * dt), 1e-6) << k;
}

TEST(RadialVelocity, RejectsShortSeries) {
	const std::vector<double> r{1.0};
	EXPECT_THROW(radial_velocity(r, 1.0), Error);
	const std::vector<double> r2{1.0, 2.0};
	EXPECT_THROW(radial_velocity(r2, 0.0), Error);
}

TEST(FreeSpaceLoss, DoublingAddsSixDb) {
	const double d = 20.0 * std::log10(2.0);
	EXPECT_NEAR(free_space_loss(1.3e6, 1.5e9) - free_space_loss(6.5e5, 1.5e9), d, 1e-9);
	EXPECT_NEAR(free_space_loss(6.5e5, 3.0e9) - free_space_loss(6.5e5, 1.5e9), d, 1e-9);
	EXPECT_NEAR(d, 6.0206, 1e-4);
}

TEST(FreeSpaceLoss, NearAndFarVisibleRange) {
	EXPECT_NEAR(free_space_loss(2000e3, 1.5e9) - free_space_loss(650e3, 1.5e9), 9.76, 0.01);
}

TEST(FreeSpaceLoss, StrictlyIncreasing) {
	EXPECT_LT(free_space_loss(1.0e6, 1.5e9), free_space_loss(1.0e6 + 1.0, 1.5e9));
	EXPECT_LT(free_space_loss(1.0e6, 1.5e9), free_space_loss(1.0e6, 1.5e9 + 1.0));
	EXPECT_THROW(free_space_loss(0.0, 1.5e9), Error);
}

TEST(SlantRange, ZenithAndMask) {
	EXPECT_NEAR(slant_range(645e3, 90.0), 645e3, 1e-6);
	const double re = kEarthRadius, h = 645e3, s = std::sin(10.0 * std::numbers::pi / 180.0);
	const double closed = std::sqrt(re * re * s * s + 2 * re * h + h * h) - re * s;
	EXPECT_NEAR(slant_range(h, 10.0), closed, 1e-6);
	EXPECT_NEAR(closed, 2033e3, 0.01 * 2033e3);
}

TEST(SimulatePass, OverheadClosestApproachIsOrbitHeight) {
	const auto pass = simulate_pass(overhead());
	const auto& s = pass.samples[pass.closest_approach_index()];
	EXPECT_NEAR(s.range, 645e3, 1e-6);
	EXPECT_NEAR(s.elevation_deg, 90.0, 1e-9);
}

TEST(SimulatePass, MaximumRangeNearMaskSlantRange) {
	const auto pass = simulate_pass(overhead());
	double worst = 0.0;
	for (const auto& s : pass.samples) {
		EXPECT_GE(s.elevation_deg, 10.0 - 1e-9);
		worst = std::max(worst, s.range);
	}
	EXPECT_LE(worst, slant_range(645e3, 10.0) + 1e-6);
	EXPECT_NEAR(worst, 2033e3, 0.01 * 2033e3);
}

TEST(SimulatePass, DopplerMonotoneWithOneZeroCrossing) {
	const auto pass = simulate_pass(overhead());
	ASSERT_GT(pass.size(), 100u);
	int crossings = 0;
	std::size_t cross_at = 0;
	for (std::size_t k = 1; k < pass.size(); ++k) {
		EXPECT_LT(pass.samples[k].doppler, pass.samples[k - 1].doppler) << k;
		if ((pass.samples[k - 1].doppler > 0.0) != (pass.samples[k].doppler > 0.0)) {
			++crossings;
			cross_at = k;
		}
	}
	EXPECT_EQ(crossings, 1);
	const std::size_t ca = pass.closest_approach_index();
	EXPECT_LE(std::abs(static_cast<long>(cross_at) - static_cast<long>(ca)), 1);
	EXPECT_GT(pass.samples.front().doppler, 1.0e4);
	EXPECT_LT(pass.samples.back().doppler, -1.0e4);
}

TEST(SimulatePass, DopplerRateLargestAtZenith) {
	const auto pass = simulate_pass(overhead());
	const std::size_t ca = pass.closest_approach_index();
	for (const auto& s : pass.samples) {
		EXPECT_LT(s.doppler_rate, 0.0);
		EXPECT_LE(std::abs(s.doppler_rate), std::abs(pass.samples[ca].doppler_rate) + 1e-9);
	}
}

TEST(SimulatePass, DopplerMatchesVelocity) {
	const auto pass = simulate_pass(overhead());
	for (const auto& s : pass.samples)
		EXPECT_NEAR(s.doppler, doppler_shift(1.5e9, s.radial_velocity), 1e-6);
}

TEST(SimulatePass, ConstantStepFromZero) {
	PassConfig c = overhead();
	c.epoch_step = 2.0;
	const auto pass = simulate_pass(c);
	EXPECT_EQ(pass.samples.front().t, 0.0);
	for (std::size_t k = 1; k < pass.size(); ++k)
		EXPECT_NEAR(pass.samples[k].t - pass.samples[k - 1].t, 2.0, 1e-9);
}

TEST(SimulatePass, OffsetShortensPass) {
	PassConfig c = overhead();
	const auto zenith = simulate_pass(c);
	c.cross_track_offset = 800e3;
	const auto offset = simulate_pass(c);
	EXPECT_LT(offset.size(), zenith.size());
	EXPECT_GT(offset.samples[offset.closest_approach_index()].range, 645e3);
}

TEST(SimulatePass, NoVisibility) {
	PassConfig c = overhead();
	c.cross_track_offset = 5000e3;
	try {
		simulate_pass(c);
		FAIL() << "expected no_visibility";
	} catch (const Error& e) {
		EXPECT_EQ(e.kind(), ErrorKind::no_visibility);
	}
}

TEST(SimulatePass, RejectsBadConfig) {
	PassConfig c = overhead();
	c.carrier_freq = 0.0;
	EXPECT_THROW(simulate_pass(c), Error);
	c = overhead();
	c.orbit_height = 100e3;
	EXPECT_THROW(simulate_pass(c), Error);
	c = overhead();
	c.elevation_mask_deg = 90.0;
	EXPECT_THROW(simulate_pass(c), Error);
}

TEST(PassCsv, HeaderAndRows) {
	const auto pass = simulate_pass(overhead());
	std::ostringstream out;
	write_pass_csv(out, pass);
	std::istringstream in(out.str());
	std::string line;
	std::getline(in, line);
	EXPECT_EQ(line, "t_s,range_m,elev_deg,vrad_mps,doppler_hz,doppler_rate_hzps,path_loss_db");
	std::size_t rows = 0;
	while (std::getline(in, line))
		++rows;
	EXPECT_EQ(rows, pass.size());
}
