#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "leoacq/prn_code.hpp"
#include "leoacq/signal_synth.hpp"

namespace leoacq {

/// Trial Doppler offsets, symmetric about `center` with spacing 500/T Hz.
struct FrequencyPlan {
	double center = 0.0;
	double half_span = 0.0;
	double bin_width = 500.0;
	std::vector<double> bins;

	std::size_t size() const noexcept { return bins.size(); }
	bool operator==(const FrequencyPlan&) const = default;
};

/// bin_width = 500 / total_coh_ms; 2 * ceil(half_span / bin_width) + 1 bins.
FrequencyPlan make_plan(double center, double half_span, int total_coh_ms);

/// Complex correlation values indexed (Doppler bin, code-phase sample),
/// row-major.
class CorrelationGrid {
public:
	CorrelationGrid() = default;
	CorrelationGrid(FrequencyPlan plan, std::size_t samples_per_code, std::size_t samples_per_chip);

	std::size_t rows() const noexcept { return plan_.size(); }
	std::size_t cols() const noexcept { return samples_per_code_; }
	std::size_t samples_per_code() const noexcept { return samples_per_code_; }
	std::size_t samples_per_chip() const noexcept { return samples_per_chip_; }
	const FrequencyPlan& plan() const noexcept { return plan_; }

	std::complex<double>& at(std::size_t i, std::size_t j) noexcept { return values_[i * cols() + j]; }
	const std::complex<double>& at(std::size_t i, std::size_t j) const noexcept {
		return values_[i * cols() + j];
	}
	std::span<std::complex<double>> row(std::size_t i) noexcept {
		return {values_.data() + i * cols(), cols()};
	}
	std::span<const std::complex<double>> row(std::size_t i) const noexcept {
		return {values_.data() + i * cols(), cols()};
	}
	std::span<std::complex<double>> values() noexcept { return values_; }
	std::span<const std::complex<double>> values() const noexcept { return values_; }

	/// Same plan and dimensions.
	bool same_shape(const CorrelationGrid& other) const noexcept;

private:
	FrequencyPlan plan_;
	std::size_t samples_per_code_ = 0;
	std::size_t samples_per_chip_ = 1;
	std::vector<std::complex<double>> values_;
};

/// Parallel code-phase search for one processing unit.
///
/// Per bin i the unit is mixed to baseband with a local oscillator at
/// f_IF + bins[i] whose phase origin is t = 0 of the stream (so consecutive
/// units stay phase-continuous), transformed, multiplied by the conjugate
/// spectrum of the sampled code and transformed back:
///
///   values[i, j] = sum_n x(n) exp(-j 2 pi F_i (t0 + n / fs)) c((n - j) mod N)
///
/// All bins share one zero-padded forward transform per unit; each bin costs
/// one inverse transform of length about 2N.
///
/// Construction plans the transforms and caches the code spectrum; correlate()
/// is const and may be called concurrently.
class UnitCorrelator {
public:
	UnitCorrelator(const ChipSequence& code, double sample_rate, double intermediate_freq,
		FrequencyPlan plan);
	~UnitCorrelator();
	UnitCorrelator(UnitCorrelator&&) noexcept;
	UnitCorrelator& operator=(UnitCorrelator&&) noexcept;

	std::size_t samples_per_code() const noexcept;
	std::size_t samples_per_chip() const noexcept;
	const FrequencyPlan& plan() const noexcept;

	/// `quadrature` empty for real input. t0 is the unit's start time.
	CorrelationGrid correlate(std::span<const double> in_phase, std::span<const double> quadrature,
		double t0) const;
	void correlate_into(std::span<const double> in_phase, std::span<const double> quadrature,
		double t0, CorrelationGrid& out) const;

private:
	struct Impl;
	std::unique_ptr<Impl> impl_;
};

/// One unit: the signal must hold exactly one code period of samples.
CorrelationGrid process_unit(const SampledSignal& signal, const ChipSequence& code,
	const FrequencyPlan& plan);

/// Grid m correlates the m-th consecutive unit. Without `units`, the signal
/// length must be a whole number of units; with it, only the first `units`
/// are used.
std::vector<CorrelationGrid> process_units(const SampledSignal& signal, const ChipSequence& code,
	const FrequencyPlan& plan, std::optional<std::size_t> units = std::nullopt);

} // namespace leoacq
