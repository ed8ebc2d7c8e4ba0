#include "leoacq/signal_synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "leoacq/error.hpp"
#include "leoacq/prn_code.hpp"

namespace leoacq {

namespace {

double positive_fmod(double x, double period) {
	double r = std::fmod(x, period);
	if (r < 0.0)
		r += period;
	return r >= period ? 0.0 : r;
}

// Offset into the current bit at t = 0, in ms.
double bit_offset_ms(double bit_phase0_ms) {
	return positive_fmod(kBitMilliseconds - bit_phase0_ms, kBitMilliseconds);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t value) noexcept {
	value += 0x9e3779b97f4a7c15ULL;
	value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
	value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
	return value ^ (value >> 31);
}

std::size_t SynthParams::sample_count() const {
	return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

std::size_t SynthParams::bit_index(std::size_t n) const {
	const double t_ms = static_cast<double>(n) * 1000.0 / sample_rate;
	return static_cast<std::size_t>(std::floor((t_ms + bit_offset_ms(bit_phase0_ms)) / kBitMilliseconds));
}

std::size_t SynthParams::bits_required() const {
	const std::size_t n = sample_count();
	return n == 0 ? 0 : bit_index(n - 1) + 1;
}

double SynthParams::code_delay_samples(double t) const {
	const double samples_per_chip = sample_rate / chip_rate;
	const double period = static_cast<double>(kGoldCodeLength) * samples_per_chip;
	const double code_doppler_chips =
		chip_rate * (doppler0 * t + 0.5 * doppler_rate * t * t) / carrier_freq;
	return positive_fmod((code_phase0 - code_doppler_chips) * samples_per_chip, period);
}

void SynthParams::validate() const {
	require(std::isfinite(sample_rate) && sample_rate > 0.0, ErrorKind::parameter,
		"sample rate must be finite and positive");
	require(std::isfinite(chip_rate) && chip_rate > 0.0, ErrorKind::parameter,
		"chip rate must be positive");
	require(carrier_freq > 0.0, ErrorKind::parameter, "carrier frequency must be positive");
	require(std::isfinite(amplitude) && amplitude > 0.0, ErrorKind::parameter,
		"amplitude must be positive");
	require(std::isfinite(duration) && duration >= 0.0, ErrorKind::parameter,
		"duration must be non-negative");
	require(bit_phase0_ms >= 0.0 && bit_phase0_ms < kBitMilliseconds, ErrorKind::parameter,
		"bit phase must lie in [0, 20) ms");
	require(std::isfinite(code_phase0), ErrorKind::parameter, "code phase must be finite");
	const double top = intermediate_freq + std::abs(doppler0) + std::abs(doppler_rate) * duration;
	require(sample_rate > 2.0 * top, ErrorKind::parameter,
		"sample rate violates Nyquist for the IF plus Doppler excursion");
	require(sample_rate > 2.0 * chip_rate, ErrorKind::parameter,
		"sample rate must exceed twice the chip rate");
	if (cn0_dbhz)
		require(std::isfinite(*cn0_dbhz), ErrorKind::parameter, "C/N0 must be finite");
	require(data_bits.size() >= bits_required(), ErrorKind::parameter,
		"data bits do not cover the duration: need " + std::to_string(bits_required()));
	for (auto b : data_bits)
		require(b == 1 || b == -1, ErrorKind::parameter, "data bits must be +1 or -1");
}

SampledSignal SampledSignal::slice(std::size_t offset, std::size_t count) const {
	require(offset <= samples.size() && count <= samples.size() - offset,
		ErrorKind::out_of_range, "slice exceeds signal length");
	SampledSignal out;
	out.sample_rate = sample_rate;
	out.intermediate_freq = intermediate_freq;
	out.t0 = t0 + static_cast<double>(offset) / sample_rate;
	out.truth = truth;
	const auto first = samples.begin() + static_cast<std::ptrdiff_t>(offset);
	out.samples.assign(first, first + static_cast<std::ptrdiff_t>(count));
	if (is_complex()) {
		const auto qfirst = quadrature.begin() + static_cast<std::ptrdiff_t>(offset);
		out.quadrature.assign(qfirst, qfirst + static_cast<std::ptrdiff_t>(count));
	}
	return out;
}

double noise_sigma(double cn0_dbhz, double amplitude, double sample_rate) {
	require(!std::isnan(cn0_dbhz), ErrorKind::parameter, "C/N0 must not be NaN");
	require(amplitude > 0.0, ErrorKind::parameter, "amplitude must be positive");
	require(sample_rate > 0.0, ErrorKind::parameter, "sample rate must be positive");
	const double cn0 = std::pow(10.0, cn0_dbhz / 10.0);
	return std::sqrt(0.5 * amplitude * amplitude * 0.5 * sample_rate / cn0);
}

SampledSignal synthesize(const SynthParams& params) {
	params.validate();
	const ChipSequence code = generate_code(params.prn_id, params.chip_rate);
	const auto code_length = static_cast<double>(code.code_length());

	const std::size_t n_samples = params.sample_count();
	SampledSignal out;
	out.sample_rate = params.sample_rate;
	out.intermediate_freq = params.intermediate_freq;
	out.t0 = params.t0;
	out.truth = params;
	out.samples.assign(n_samples, 0.0);

	if (params.signal_present) {
		for (std::size_t n = 0; n < n_samples; ++n) {
			// products before division keep integer oversampling ratios exact
			const double nd = static_cast<double>(n);
			const double t = nd / params.sample_rate;
			const double doppler_cycles = params.doppler0 * t + 0.5 * params.doppler_rate * t * t;
			const double carrier_cycles = nd * params.intermediate_freq / params.sample_rate
				+ doppler_cycles;
			const double chips = nd * params.chip_rate / params.sample_rate
				+ params.chip_rate * doppler_cycles / params.carrier_freq - params.code_phase0;
			const auto chip_index =
				static_cast<std::size_t>(std::floor(positive_fmod(chips, code_length)));
			const double chip = code[std::min(chip_index, code.code_length() - 1)];
			const double bit = params.data_bits[params.bit_index(n)];
			const double frac = carrier_cycles - std::floor(carrier_cycles);
			out.samples[n] = params.amplitude * chip * bit * std::sin(kTwoPi * frac);
		}
	}

	if (params.cn0_dbhz) {
		const double sigma = noise_sigma(*params.cn0_dbhz, params.amplitude, params.sample_rate);
		std::mt19937_64 rng(params.seed);
		std::normal_distribution<double> noise(0.0, sigma);
		for (auto& s : out.samples)
			s += noise(rng);
	}
	return out;
}

PassSignalStream::PassSignalStream(PassScenario scenario, SynthParams base, PassSignalOptions options)
	: scenario_(std::move(scenario)), base_(std::move(base)), options_(options) {
	require(!scenario_.empty(), ErrorKind::parameter, "pass scenario is empty");
	min_loss_db_ = scenario_.min_path_loss_db();
}

SynthParams PassSignalStream::epoch_params(std::size_t k) const {
	require(k < scenario_.size(), ErrorKind::out_of_range, "epoch index out of range");
	const PassSample& s = scenario_.samples[k];

	SynthParams p = base_;
	p.t0 = s.t;
	p.doppler0 = s.doppler;
	p.doppler_rate = s.doppler_rate;
	p.carrier_freq = scenario_.carrier_freq;

	const double excess_loss = s.path_loss_db - min_loss_db_;
	p.amplitude = base_.amplitude * std::pow(10.0, -excess_loss / 20.0);
	if (base_.cn0_dbhz)
		p.cn0_dbhz = *base_.cn0_dbhz - excess_loss;

	const double delay = s.range / kSpeedOfLight;
	p.code_phase0 = positive_fmod(delay * p.chip_rate, static_cast<double>(kGoldCodeLength));
	p.bit_phase0_ms = positive_fmod(delay * 1000.0, kBitMilliseconds);
	p.signal_present = base_.signal_present && s.elevation_deg >= options_.signal_mask_deg;

	const std::uint64_t epoch_seed = mix_seed(base_.seed ^ static_cast<std::uint64_t>(k));
	p.seed = epoch_seed;
	if (options_.random_data_bits) {
		std::mt19937_64 bit_rng(mix_seed(epoch_seed ^ 0x6461746162697473ULL));
		p.data_bits.assign(p.bits_required(), 1);
		for (auto& b : p.data_bits)
			b = (bit_rng() >> 63) ? -1 : 1;
	} else if (p.data_bits.size() < p.bits_required()) {
		fail(ErrorKind::parameter, "base data bits do not cover the epoch duration");
	}
	return p;
}

SampledSignal PassSignalStream::epoch(std::size_t k) const {
	return synthesize(epoch_params(k));
}

PassSignalStream synthesize_pass_signal(const PassScenario& scenario, const SynthParams& base,
	const PassSignalOptions& options) {
	return PassSignalStream(scenario, base, options);
}

} // namespace leoacq
