#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "leoacq/constants.hpp"
#include "leoacq/geometry.hpp"

namespace leoacq {

/// Everything needed to synthesize one real-IF sample stream. Also serves as
/// the ground-truth record attached to synthesized signals.
struct SynthParams {
	int prn_id = 1;
	double chip_rate = kGpsChipRate;
	double sample_rate = kDefaultSampleRate;
	double intermediate_freq = kDefaultIntermediateFreq;
	double carrier_freq = 1.5e9;          // f_H1, drives code-Doppler coupling
	double amplitude = 1.0;
	double code_phase0 = 0.0;             // code delay at t = 0, chips
	double doppler0 = 0.0;                // Hz at t = 0
	double doppler_rate = 0.0;            // Hz/s
	std::vector<std::int8_t> data_bits{1};
	double bit_phase0_ms = 0.0;           // first bit boundary, ms into the stream, [0, 20)
	std::optional<double> cn0_dbhz;       // empty means noiseless
	double duration = 1.0e-3;             // s
	std::uint64_t seed = 0;
	bool signal_present = true;           // false: noise only (blocked line of sight)
	double t0 = 0.0;                      // time label of the first sample

	std::size_t sample_count() const;
	/// Data bits needed to cover `duration` given bit_phase0_ms.
	std::size_t bits_required() const;
	/// Index into data_bits active at sample n.
	std::size_t bit_index(std::size_t n) const;
	/// Code delay in samples at local time t (seconds since stream start),
	/// reduced modulo one code period. This is where a correlator started at
	/// t finds the peak.
	double code_delay_samples(double t = 0.0) const;
	void validate() const;
};

/// Real (or I/Q, when quadrature is non-empty) sample stream.
struct SampledSignal {
	std::vector<double> samples;
	std::vector<double> quadrature;
	double sample_rate = kDefaultSampleRate;
	double intermediate_freq = kDefaultIntermediateFreq;
	double t0 = 0.0;
	std::optional<SynthParams> truth;

	bool is_complex() const noexcept { return !quadrature.empty(); }
	std::size_t size() const noexcept { return samples.size(); }
	/// Copy of [offset, offset + count) with t0 advanced accordingly.
	SampledSignal slice(std::size_t offset, std::size_t count) const;
};

/// Noise standard deviation for a real-sampled stream such that
/// (A^2/2) / (sigma^2 / (fs/2)) = 10^(cn0/10).
double noise_sigma(double cn0_dbhz, double amplitude, double sample_rate);

/// A * C(n) * D(n) * sin(2 pi phi(n)) + e(n) with a chirped carrier, a code NCO
/// scaled by the carrier Doppler, and seeded Gaussian noise.
SampledSignal synthesize(const SynthParams& params);

struct PassSignalOptions {
	/// Epochs below this elevation carry noise only, e.g. terrain blockage.
	double signal_mask_deg = -90.0;
	/// Draw per-epoch random data bits instead of repeating base.data_bits.
	bool random_data_bits = true;
};

/// Lazily synthesized per-second epochs following a pass scenario. Each epoch
/// uses the scenario Doppler and Doppler rate, an amplitude attenuated by the
/// path loss relative to its minimum, code delay and bit phase derived from
/// the propagation delay, and a seed derived from (base.seed, epoch index).
class PassSignalStream {
public:
	PassSignalStream(PassScenario scenario, SynthParams base, PassSignalOptions options = {});

	std::size_t size() const noexcept { return scenario_.size(); }
	const PassScenario& scenario() const noexcept { return scenario_; }
	const SynthParams& base() const noexcept { return base_; }

	SynthParams epoch_params(std::size_t k) const;
	SampledSignal epoch(std::size_t k) const;

private:
	PassScenario scenario_;
	SynthParams base_;
	PassSignalOptions options_;
	double min_loss_db_ = 0.0;
};

PassSignalStream synthesize_pass_signal(const PassScenario& scenario, const SynthParams& base,
	const PassSignalOptions& options = {});

/// splitmix64 finalizer; used to derive independent per-epoch seeds.
std::uint64_t mix_seed(std::uint64_t value) noexcept;

} // namespace leoacq
