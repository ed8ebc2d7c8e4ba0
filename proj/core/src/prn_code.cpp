#include "leoacq/prn_code.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "leoacq/error.hpp"

namespace leoacq {

namespace {

// G2 phase-selector taps (1-based register stages) for PRN 1..37.
constexpr std::array<std::pair<int, int>, kMaxPrn> kG2Taps = {{
	{2, 6}, {3, 7}, {4, 8}, {5, 9}, {1, 9}, {2, 10}, {1, 8}, {2, 9}, {3, 10}, {2, 3},
	{3, 4}, {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 10}, {1, 4}, {2, 5}, {3, 6}, {4, 7},
	{5, 8}, {6, 9}, {1, 3}, {4, 6}, {5, 7}, {6, 8}, {7, 9}, {8, 10}, {1, 6}, {2, 7},
	{3, 8}, {4, 9}, {5, 10}, {4, 10}, {1, 7}, {2, 8}, {4, 10},
}};

} // namespace

ChipSequence::ChipSequence(int prn_id, std::vector<std::int8_t> chips, double chip_rate)
	: prn_id_(prn_id), chips_(std::move(chips)), chip_rate_(chip_rate) {
	require(std::isfinite(chip_rate) && chip_rate > 0.0, ErrorKind::parameter,
		"chip rate must be positive");
	require(!chips_.empty(), ErrorKind::parameter, "empty chip sequence");
	for (auto chip : chips_)
		require(chip == 1 || chip == -1, ErrorKind::parameter, "chips must be +1 or -1");
}

ChipSequence generate_code(int prn_id, double chip_rate) {
	if (prn_id < kMinPrn || prn_id > kMaxPrn)
		fail(ErrorKind::unknown_prn, "PRN " + std::to_string(prn_id) + " is outside 1..37");

	const auto [tap1, tap2] = kG2Taps[static_cast<std::size_t>(prn_id - 1)];

	// reg[0] is stage 1, reg[9] is stage 10
	std::array<std::uint8_t, 10> g1{};
	std::array<std::uint8_t, 10> g2{};
	g1.fill(1);
	g2.fill(1);

	std::vector<std::int8_t> chips(kGoldCodeLength);
	for (auto& chip : chips) {
		const std::uint8_t g2_out = g2[tap1 - 1] ^ g2[tap2 - 1];
		const std::uint8_t bit = g1[9] ^ g2_out;
		chip = bit ? -1 : 1;

		const std::uint8_t g1_fb = g1[2] ^ g1[9];
		const std::uint8_t g2_fb = g2[1] ^ g2[2] ^ g2[5] ^ g2[7] ^ g2[8] ^ g2[9];
		for (std::size_t s = 9; s > 0; --s) {
			g1[s] = g1[s - 1];
			g2[s] = g2[s - 1];
		}
		g1[0] = g1_fb;
		g2[0] = g2_fb;
	}
	return ChipSequence(prn_id, std::move(chips), chip_rate);
}

std::size_t samples_per_unit(double sample_rate) {
	require(std::isfinite(sample_rate) && sample_rate > 0.0, ErrorKind::parameter,
		"sample rate must be finite and positive");
	return static_cast<std::size_t>(std::llround(sample_rate * kUnitSeconds));
}

std::vector<double> sample_code(const ChipSequence& code, double sample_rate,
	double code_phase, double code_rate_scale) {
	require(std::isfinite(sample_rate) && sample_rate > 0.0, ErrorKind::parameter,
		"sample rate must be finite and positive");
	require(sample_rate > 2.0 * code.chip_rate(), ErrorKind::parameter,
		"sample rate must exceed twice the chip rate");
	const auto length = static_cast<double>(code.code_length());
	require(std::isfinite(code_phase) && code_phase >= 0.0 && code_phase < length,
		ErrorKind::parameter, "code phase must lie in [0, code_length)");
	require(std::isfinite(code_rate_scale) && code_rate_scale > 0.0, ErrorKind::parameter,
		"code rate scale must be positive");

	const std::size_t n = samples_per_unit(sample_rate);
	const double step = code.chip_rate() * code_rate_scale;
	std::vector<double> out(n);
	for (std::size_t k = 0; k < n; ++k) {
		const double phase = static_cast<double>(k) * step / sample_rate + code_phase;
		auto index = static_cast<std::size_t>(std::floor(phase));
		index %= code.code_length();
		out[k] = code[index];
	}
	return out;
}

} // namespace leoacq
