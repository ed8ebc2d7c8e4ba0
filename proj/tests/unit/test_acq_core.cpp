#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <thread>
#include <vector>

#include "leoacq/acq_core.hpp"
#include "leoacq/detector.hpp"
#include "leoacq/error.hpp"
#include "leoacq/integrators.hpp"
#include "oracles.hpp"

using namespace leoacq;

namespace {

ChipSequence random_code(std::mt19937_64& rng, std::size_t length) {
	std::vector<std::int8_t> chips(length);
	for (auto& c : chips)
		c = (rng() & 1) ? 1 : -1;
	return ChipSequence(0, chips, static_cast<double>(length) * 1000.0);
}

SynthParams clean(double duration_s = 1e-3) {
	SynthParams p;
	p.prn_id = 11;
	p.duration = duration_s;
	p.data_bits.assign(p.bits_required(), 1);
	return p;
}

double max_abs(std::span<const std::complex<double>> v) {
	double m = 0.0;
	for (const auto& z : v)
		m = std::max(m, std::abs(z));
	return m;
}

} // namespace

TEST(MakePlan, OneMillisecondTenKilohertz) {
	const auto plan = make_plan(0.0, 10e3, 1);
	EXPECT_EQ(plan.bin_width, 500.0);
	EXPECT_EQ(plan.size(), 41u);
	EXPECT_EQ(plan.bins.front(), -10e3);
	EXPECT_EQ(plan.bins.back(), 10e3);
	EXPECT_EQ(plan.bins[20], 0.0);
}

TEST(MakePlan, BinWidthShrinksWithT) {
	EXPECT_EQ(make_plan(0.0, 10e3, 5).bin_width, 100.0);
	EXPECT_EQ(make_plan(0.0, 40e3, 1).size(), 161u);
	// Spans that are not a whole number of bins round outward.
	const auto plan = make_plan(2000.0, 700.0, 1);
	EXPECT_EQ(plan.size(), 5u);
	EXPECT_EQ(plan.bins.front(), 1000.0);
	for (std::size_t k = 0; k < plan.size(); ++k)
		EXPECT_DOUBLE_EQ(plan.bins[k] - plan.center, -(plan.bins[plan.size() - 1 - k] - plan.center));
}

TEST(MakePlan, RejectsBadInput) {
	EXPECT_THROW(make_plan(0.0, 0.0, 1), Error);
	EXPECT_THROW(make_plan(0.0, 100.0, 0), Error);
	EXPECT_THROW(make_plan(NAN, 100.0, 1), Error);
}

TEST(UnitCorrelator, MatchesDirectCorrelation) {
	std::mt19937_64 rng(1);
	std::normal_distribution<double> gauss;
	for (std::size_t n : {200u, 337u, 1024u}) {
		const std::size_t chips = n / 4 + 1;
		const auto code = random_code(rng, chips);
		const double fs = static_cast<double>(n) * 1000.0;
		FrequencyPlan plan = make_plan(1500.0, 3000.0, 1);
		const double f_if = fs / 7.3;
		const UnitCorrelator corr(code, fs, f_if, plan);
		ASSERT_EQ(corr.samples_per_code(), n);
		std::vector<double> x(n), q(n);
		for (auto& v : x)
			v = gauss(rng);
		for (auto& v : q)
			v = gauss(rng);
		const auto replica = sample_code(code, fs);
		const double t0 = 0.0137;
		for (bool iq : {false, true}) {
			const std::span<const double> qs = iq ? std::span<const double>(q) : std::span<const double>();
			const auto grid = corr.correlate(x, qs, t0);
			for (std::size_t i = 0; i < plan.size(); ++i) {
				const auto ref = oracle::direct_correlation(x, qs, replica, f_if + plan.bins[i], fs, t0);
				const double scale = max_abs(ref);
				for (std::size_t j = 0; j < n; ++j)
					ASSERT_LE(std::abs(grid.at(i, j) - ref[j]), 1e-9 * scale) << n << " " << i << " " << j;
			}
		}
	}
}

TEST(UnitCorrelator, NoiselessPeakAtTrueCell) {
	SynthParams p = clean();
	p.doppler0 = 1500.0;
	p.code_phase0 = 250.0;  // 1000 samples at 4 samples per chip
	const auto grid = process_unit(synthesize(p), generate_code(p.prn_id), make_plan(0.0, 5000.0, 1));
	std::size_t bi = 0, bj = 0;
	double best = -1.0;
	for (std::size_t i = 0; i < grid.rows(); ++i)
		for (std::size_t j = 0; j < grid.cols(); ++j)
			if (std::abs(grid.at(i, j)) > best) {
				best = std::abs(grid.at(i, j));
				bi = i;
				bj = j;
			}
	EXPECT_EQ(grid.plan().bins[bi], 1500.0);
	EXPECT_EQ(bj, 1000u);
	EXPECT_EQ(grid.samples_per_chip(), 4u);
}

TEST(UnitCorrelator, PhaseAdvancesWithResidualDoppler) {
	SynthParams p = clean(4e-3);
	p.doppler0 = 1630.0;
	p.code_phase0 = 17.0;
	const auto grids = process_units(synthesize(p), generate_code(p.prn_id), make_plan(0.0, 5000.0, 1));
	ASSERT_EQ(grids.size(), 4u);
	const std::size_t bin = 13;  // 1500 Hz
	ASSERT_EQ(grids[0].plan().bins[bin], 1500.0);
	const double expected = kTwoPi * 130.0 * 1e-3;
	for (std::size_t m = 1; m < grids.size(); ++m) {
		const auto ratio = grids[m].at(bin, 68) / grids[m - 1].at(bin, 68);
		EXPECT_NEAR(std::arg(ratio), expected, 0.01) << m;
		EXPECT_NEAR(std::abs(ratio), 1.0, 0.01);
	}
}

TEST(UnitCorrelator, BitFlipNegatesNextUnit) {
	SynthParams p = clean(4e-3);
	p.bit_phase0_ms = 2.0;
	p.data_bits = {1, -1};
	p.code_phase0 = 400.0;
	const auto grids = process_units(synthesize(p), generate_code(p.prn_id), make_plan(0.0, 1000.0, 1));
	const std::size_t bin = 2, j = 1600;
	const auto a = grids[1].at(bin, j);
	const auto b = grids[2].at(bin, j);
	EXPECT_GT(std::abs(a), 1000.0);
	EXPECT_LE(std::abs(a + b), 1e-9 * std::abs(a));
	EXPECT_LE(std::abs(grids[0].at(bin, j) - a), 1e-9 * std::abs(a));
}

TEST(UnitCorrelator, SingleUnitListEqualsProcessUnit) {
	SynthParams p = clean();
	p.cn0_dbhz = 45.0;
	p.seed = 8;
	const auto s = synthesize(p);
	const auto code = generate_code(p.prn_id);
	const auto plan = make_plan(0.0, 2000.0, 1);
	const auto one = process_unit(s, code, plan);
	const auto list = process_units(s, code, plan);
	ASSERT_EQ(list.size(), 1u);
	ASSERT_TRUE(list[0].same_shape(one));
	for (std::size_t k = 0; k < one.values().size(); ++k)
		ASSERT_EQ(one.values()[k], list[0].values()[k]);
}

// Bins below the center reuse the table of their mirror above it.
TEST(UnitCorrelator, MirroredBinsMatchStandaloneBins) {
	SynthParams p = clean();
	p.cn0_dbhz = 40.0;
	p.doppler0 = -1300.0;
	p.seed = 21;
	const auto s = synthesize(p);
	const auto code = generate_code(p.prn_id);
	const auto plan = make_plan(200.0, 1500.0, 1);
	const auto full = process_unit(s, code, plan);
	for (std::size_t i = 0; i < plan.size(); ++i) {
		FrequencyPlan single;
		single.center = plan.bins[i];
		single.half_span = 250.0;
		single.bins = {plan.bins[i]};
		const auto alone = process_unit(s, code, single);
		const auto row = full.row(i);
		const double scale = max_abs(alone.values());
		for (std::size_t j = 0; j < row.size(); ++j)
			ASSERT_LE(std::abs(row[j] - alone.row(0)[j]), 1e-10 * scale) << "bin " << i << " lag " << j;
	}
}

TEST(UnitCorrelator, LengthErrors) {
	const auto code = generate_code(1);
	const auto plan = make_plan(0.0, 1000.0, 1);
	SynthParams p = clean(2e-3);
	const auto s = synthesize(p);
	auto expect_kind = [](auto&& fn, ErrorKind kind) {
		try {
			fn();
			FAIL() << "no error";
		} catch (const Error& e) {
			EXPECT_EQ(e.kind(), kind) << e.what();
		}
	};
	expect_kind([&] { process_unit(s, code, plan); }, ErrorKind::unit_length);
	expect_kind([&] { process_units(s.slice(0, 5000), code, plan); }, ErrorKind::unit_length);
	expect_kind([&] { process_units(s, code, plan, 3); }, ErrorKind::insufficient_units);
	EXPECT_EQ(process_units(s.slice(0, 5000), code, plan, 1).size(), 1u);
	// A code whose period is not 1 ms cannot define a unit.
	const ChipSequence slow(1, code.chips(), kGpsChipRate / 2);
	expect_kind([&] { UnitCorrelator(slow, 4.092e6, 1.25e6, plan); }, ErrorKind::unit_length);
}

TEST(UnitCorrelator, PureNoiseRarelyPassesThreshold) {
	const auto code = generate_code(3);
	const auto plan = make_plan(0.0, 5000.0, 1);
	const UnitCorrelator corr(code, 4.092e6, 1.25e6, plan);
	int below = 0;
	SynthParams p = clean();
	p.signal_present = false;
	p.cn0_dbhz = 45.0;
	const IntegrationSpec spec{Strategy::noncoherent, 1, 1};
	for (std::uint64_t seed = 0; seed < 200; ++seed) {
		p.seed = seed;
		const auto s = synthesize(p);
		const std::vector<CorrelationGrid> grids{corr.correlate(s.samples, {}, 0.0)};
		if (mtsmr(integrate(spec, grids), 4) < 2.5)
			++below;
	}
	EXPECT_GE(below, 180);
}

TEST(UnitCorrelator, RowEnergyMatchesSpectralEnergy) {
	// Parseval: sum_j |R(j)|^2 = (1/N) sum_k |X(k)|^2 |C(k)|^2 with a naive DFT.
	std::mt19937_64 rng(4);
	std::normal_distribution<double> gauss;
	const std::size_t n = 256;
	const auto code = random_code(rng, 64);
	const double fs = 256e3, f_if = 60e3;
	const auto plan = make_plan(0.0, 1000.0, 1);
	std::vector<double> x(n);
	for (auto& v : x)
		v = gauss(rng);
	const auto grid = UnitCorrelator(code, fs, f_if, plan).correlate(x, {}, 0.0);
	const auto replica = sample_code(code, fs);
	for (std::size_t i = 0; i < plan.size(); ++i) {
		std::vector<std::complex<double>> mixed(n);
		for (std::size_t k = 0; k < n; ++k)
			mixed[k] = x[k] * std::polar(1.0, -kTwoPi * (f_if + plan.bins[i]) * k / fs);
		double spectral = 0.0;
		for (std::size_t f = 0; f < n; ++f) {
			std::complex<double> xf{}, cf{};
			for (std::size_t k = 0; k < n; ++k) {
				const auto w = std::polar(1.0, -kTwoPi * static_cast<double>(f * k % n) / n);
				xf += mixed[k] * w;
				cf += replica[k] * w;
			}
			spectral += std::norm(xf) * std::norm(cf);
		}
		spectral /= static_cast<double>(n);
		double energy = 0.0;
		for (const auto& z : grid.row(i))
			energy += std::norm(z);
		EXPECT_NEAR(energy / spectral, 1.0, 1e-9) << i;
	}
}

TEST(UnitCorrelator, ConcurrentCallsAgree) {
	SynthParams p = clean();
	p.cn0_dbhz = 40.0;
	p.seed = 2;
	const auto s = synthesize(p);
	const UnitCorrelator corr(generate_code(p.prn_id), 4.092e6, 1.25e6, make_plan(0.0, 3000.0, 1));
	const auto reference = corr.correlate(s.samples, {}, 0.0);
	std::vector<CorrelationGrid> out(4);
	std::vector<std::thread> workers;
	for (std::size_t w = 0; w < out.size(); ++w)
		workers.emplace_back([&, w] { out[w] = corr.correlate(s.samples, {}, 0.0); });
	for (auto& t : workers)
		t.join();
	for (const auto& g : out)
		for (std::size_t k = 0; k < g.values().size(); ++k)
			ASSERT_EQ(g.values()[k], reference.values()[k]);
}
