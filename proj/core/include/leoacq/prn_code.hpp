#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "leoacq/constants.hpp"

namespace leoacq {

/// One period of a +/-1 spreading code.
///
/// Chips are stored as +1/-1 so BPSK modulation is a multiplication. The
/// chip rate is carried with the code; one period must span one processing
/// unit (1 ms) for the correlator to accept it.
class ChipSequence {
public:
	ChipSequence() = default;

	/// Validates that every chip is exactly +1 or -1 and chip_rate > 0.
	ChipSequence(int prn_id, std::vector<std::int8_t> chips, double chip_rate);

	int prn_id() const noexcept { return prn_id_; }
	double chip_rate() const noexcept { return chip_rate_; }
	std::size_t code_length() const noexcept { return chips_.size(); }
	const std::vector<std::int8_t>& chips() const noexcept { return chips_; }
	std::int8_t operator[](std::size_t i) const noexcept { return chips_[i]; }

	double period_seconds() const noexcept {
		return static_cast<double>(chips_.size()) / chip_rate_;
	}

private:
	int prn_id_ = 0;
	std::vector<std::int8_t> chips_;
	double chip_rate_ = kGpsChipRate;
};

inline constexpr int kMinPrn = 1;
inline constexpr int kMaxPrn = 37;

/// GPS C/A Gold code for prn_id in [1, 37]: two 10-stage LFSRs with the
/// standard G2 phase-selector taps. Logic 0 maps to +1, logic 1 to -1.
/// Throws ErrorKind::unknown_prn outside the family.
ChipSequence generate_code(int prn_id, double chip_rate = kGpsChipRate);

/// Number of samples in one processing unit, round(sample_rate * 1 ms).
std::size_t samples_per_unit(double sample_rate);

/// Samples one unit of the code with a phase-accumulator NCO: sample k holds
/// chip floor(k * chip_rate * code_rate_scale / sample_rate + code_phase)
/// mod code_length.
std::vector<double> sample_code(const ChipSequence& code, double sample_rate,
	double code_phase = 0.0, double code_rate_scale = 1.0);

} // namespace leoacq
