#include "leoacq/acq_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "complex_math.hpp"
#include "fft.hpp"
#include "leoacq/error.hpp"

namespace leoacq {

namespace {

std::complex<double> unit_phasor(double cycles) {
	const double frac = cycles - std::floor(cycles);
	const double angle = -kTwoPi * frac;
	return {std::cos(angle), std::sin(angle)};
}

} // namespace

FrequencyPlan make_plan(double center, double half_span, int total_coh_ms) {
	require(std::isfinite(center), ErrorKind::parameter, "plan center must be finite");
	require(std::isfinite(half_span) && half_span > 0.0, ErrorKind::parameter,
		"half span must be positive");
	require(total_coh_ms >= 1, ErrorKind::parameter, "integration must span at least 1 ms");

	FrequencyPlan plan;
	plan.center = center;
	plan.half_span = half_span;
	plan.bin_width = 500.0 / static_cast<double>(total_coh_ms);
	const auto half_bins = static_cast<long>(std::ceil(half_span / plan.bin_width - 1e-9));
	plan.bins.reserve(static_cast<std::size_t>(2 * half_bins + 1));
	for (long k = -half_bins; k <= half_bins; ++k)
		plan.bins.push_back(center + static_cast<double>(k) * plan.bin_width);
	return plan;
}

CorrelationGrid::CorrelationGrid(FrequencyPlan plan, std::size_t samples_per_code,
	std::size_t samples_per_chip)
	: plan_(std::move(plan)), samples_per_code_(samples_per_code),
	  samples_per_chip_(std::max<std::size_t>(1, samples_per_chip)),
	  values_(plan_.size() * samples_per_code) {}

bool CorrelationGrid::same_shape(const CorrelationGrid& other) const noexcept {
	return rows() == other.rows() && cols() == other.cols()
		&& samples_per_chip_ == other.samples_per_chip_ && plan_ == other.plan_;
}

struct UnitCorrelator::Impl {
	// Bins at offsets +d and -d from the center share one table: the code is
	// real, so the -d weights are the +d weights conjugated and index-reversed,
	// and the -d output phasors are the +d ones conjugated.
	struct Bin {
		std::size_t row;
		std::size_t table;
		bool mirrored;
	};

	std::size_t n;                 // samples per code period
	std::size_t m;                 // padded transform length, >= 2n - 1
	std::size_t samples_per_chip = 1;
	double sample_rate;
	double base_freq;              // oscillator frequency shared by all bins
	FrequencyPlan plan;
	detail::FftPlan forward;
	detail::FftPlan backward;
	std::vector<std::complex<double>> mixer;    // exp(-j 2 pi base_freq k / fs), k < n
	std::vector<std::complex<double>> weights;  // per table, m values
	std::vector<std::complex<double>> post;     // per table, n values
	std::vector<double> freqs;                  // absolute oscillator frequency per bin
	std::vector<Bin> order;                     // mirrored bins follow their table's owner

	Impl(std::size_t n_, FrequencyPlan plan_, double fs)
		: n(n_), m(detail::smooth_length(2 * n_ - 1)), sample_rate(fs), base_freq(0.0),
		  plan(std::move(plan_)),
		  forward(m, detail::FftPlan::Direction::forward),
		  backward(m, detail::FftPlan::Direction::backward) {}
};

// The circular correlation over one period equals a linear correlation
// against the code extended to lags (-n, n), so it can run at a zero-padded
// length that FFTW handles quickly. Writing the bin offset
// d_i = F_i - base_freq as exp(-j 2 pi d_i (n - j) / fs) exp(-j 2 pi d_i j / fs)
// moves it onto the code replica and an output phasor; every bin then shares
// one forward transform of the unit.
UnitCorrelator::UnitCorrelator(const ChipSequence& code, double sample_rate,
	double intermediate_freq, FrequencyPlan plan) {
	require(std::isfinite(intermediate_freq), ErrorKind::parameter, "IF must be finite");
	require(!plan.bins.empty(), ErrorKind::parameter, "frequency plan has no bins");
	const std::size_t n = samples_per_unit(sample_rate);
	const double period = code.period_seconds();
	require(std::abs(period - kUnitSeconds) <= 1e-9 * kUnitSeconds, ErrorKind::unit_length,
		"code period must span one 1 ms unit");

	impl_ = std::make_unique<Impl>(n, std::move(plan), sample_rate);
	Impl& im = *impl_;
	im.samples_per_chip =
		std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_rate / code.chip_rate())));
	im.base_freq = intermediate_freq + im.plan.center;
	const std::size_t m = im.m;

	im.mixer.resize(n);
	for (std::size_t k = 0; k < n; ++k)
		im.mixer[k] = unit_phasor(im.base_freq * static_cast<double>(k) / sample_rate);

	const std::size_t bins = im.plan.size();
	im.freqs.resize(bins);
	std::vector<double> offsets;   // per table
	std::vector<bool> placed(bins, false);
	for (std::size_t i = 0; i < bins; ++i) {
		im.freqs[i] = intermediate_freq + im.plan.bins[i];
		if (placed[i])
			continue;
		const double offset = im.plan.bins[i] - im.plan.center;
		const std::size_t table = offsets.size();
		offsets.push_back(offset);
		im.order.push_back({i, table, false});
		placed[i] = true;
		if (offset == 0.0)
			continue;
		for (std::size_t k = i + 1; k < bins; ++k) {
			if (!placed[k] && im.plan.bins[k] - im.plan.center == -offset) {
				im.order.push_back({k, table, true});
				placed[k] = true;
				break;
			}
		}
	}

	const auto local_code = sample_code(code, sample_rate);
	im.weights.resize(offsets.size() * m);
	im.post.resize(offsets.size() * n);
	detail::AlignedBuffer replica(m);
	detail::AlignedBuffer spectrum(m);
	const double inv_m = 1.0 / static_cast<double>(m);
	for (std::size_t t = 0; t < offsets.size(); ++t) {
		const double offset = offsets[t];
		// Lag d >= 0 sits at index d, lag d < 0 at m + d.
		for (std::size_t k = 0; k < m; ++k)
			replica[k] = 0.0;
		for (std::size_t d = 0; d < n; ++d)
			replica[d] = local_code[d] * unit_phasor(offset * static_cast<double>(d) / sample_rate);
		for (std::size_t d = 1; d < n; ++d)
			replica[m - d] = local_code[n - d] * unit_phasor(-offset * static_cast<double>(d) / sample_rate);
		// sum_k a(k) b(k - j) transforms to A[k] times the unnormalized
		// inverse transform of b.
		im.backward.execute(replica, spectrum);
		auto* w = im.weights.data() + t * m;
		for (std::size_t k = 0; k < m; ++k)
			w[k] = spectrum[k] * inv_m;
		auto* post = im.post.data() + t * n;
		for (std::size_t j = 0; j < n; ++j)
			post[j] = unit_phasor(offset * static_cast<double>(j) / sample_rate);
	}
}

UnitCorrelator::~UnitCorrelator() = default;
UnitCorrelator::UnitCorrelator(UnitCorrelator&&) noexcept = default;
UnitCorrelator& UnitCorrelator::operator=(UnitCorrelator&&) noexcept = default;

std::size_t UnitCorrelator::samples_per_code() const noexcept { return impl_->n; }
std::size_t UnitCorrelator::samples_per_chip() const noexcept { return impl_->samples_per_chip; }
const FrequencyPlan& UnitCorrelator::plan() const noexcept { return impl_->plan; }

CorrelationGrid UnitCorrelator::correlate(std::span<const double> in_phase,
	std::span<const double> quadrature, double t0) const {
	CorrelationGrid grid(impl_->plan, impl_->n, impl_->samples_per_chip);
	correlate_into(in_phase, quadrature, t0, grid);
	return grid;
}

void UnitCorrelator::correlate_into(std::span<const double> in_phase,
	std::span<const double> quadrature, double t0, CorrelationGrid& out) const {
	const Impl& im = *impl_;
	const std::size_t n = im.n;
	const std::size_t m = im.m;
	if (in_phase.size() != n)
		fail(ErrorKind::unit_length, "unit holds " + std::to_string(in_phase.size())
			+ " samples, one code period is " + std::to_string(n));
	require(quadrature.empty() || quadrature.size() == n, ErrorKind::unit_length,
		"quadrature length differs from in-phase length");
	if (out.rows() != im.plan.size() || out.cols() != n || !(out.plan() == im.plan))
		out = CorrelationGrid(im.plan, n, im.samples_per_chip);

	detail::AlignedBuffer mixed(m);
	detail::AlignedBuffer spectrum(m);
	detail::AlignedBuffer product(m);
	detail::AlignedBuffer lags(m);

	if (quadrature.empty()) {
		for (std::size_t k = 0; k < n; ++k)
			mixed[k] = in_phase[k] * im.mixer[k];
	} else {
		for (std::size_t k = 0; k < n; ++k)
			mixed[k] = detail::mul({in_phase[k], quadrature[k]}, im.mixer[k]);
	}
	for (std::size_t k = n; k < m; ++k)
		mixed[k] = 0.0;
	im.forward.execute(mixed, spectrum);

	for (const auto& bin : im.order) {
		const auto* w = im.weights.data() + bin.table * m;
		const auto* post = im.post.data() + bin.table * n;
		const std::complex<double> phase = unit_phasor(im.freqs[bin.row] * t0);
		auto row = out.row(bin.row);
		if (!bin.mirrored) {
			for (std::size_t k = 0; k < m; ++k)
				product[k] = detail::mul(spectrum[k], w[k]);
			im.backward.execute(product, lags);
			for (std::size_t j = 0; j < n; ++j)
				row[j] = detail::mul(lags[j], detail::mul(post[j], phase));
		} else {
			product[0] = detail::mul(spectrum[0], std::conj(w[0]));
			for (std::size_t k = 1; k < m; ++k)
				product[k] = detail::mul(spectrum[k], std::conj(w[m - k]));
			im.backward.execute(product, lags);
			for (std::size_t j = 0; j < n; ++j)
				row[j] = detail::mul(lags[j], detail::conj_mul(post[j], phase));
		}
	}
}

CorrelationGrid process_unit(const SampledSignal& signal, const ChipSequence& code,
	const FrequencyPlan& plan) {
	UnitCorrelator correlator(code, signal.sample_rate, signal.intermediate_freq, plan);
	if (signal.size() != correlator.samples_per_code())
		fail(ErrorKind::unit_length, "signal holds " + std::to_string(signal.size())
			+ " samples, one code period is " + std::to_string(correlator.samples_per_code()));
	return correlator.correlate(signal.samples, signal.quadrature, signal.t0);
}

std::vector<CorrelationGrid> process_units(const SampledSignal& signal, const ChipSequence& code,
	const FrequencyPlan& plan, std::optional<std::size_t> units) {
	UnitCorrelator correlator(code, signal.sample_rate, signal.intermediate_freq, plan);
	const std::size_t n = correlator.samples_per_code();
	std::size_t count = 0;
	if (units) {
		count = *units;
		if (count * n > signal.size())
			fail(ErrorKind::insufficient_units, "signal holds " + std::to_string(signal.size() / n)
				+ " whole units, " + std::to_string(count) + " requested");
	} else {
		if (signal.size() % n != 0 || signal.size() == 0)
			fail(ErrorKind::unit_length, "signal length " + std::to_string(signal.size())
				+ " is not a positive multiple of " + std::to_string(n));
		count = signal.size() / n;
	}

	std::vector<CorrelationGrid> grids;
	grids.reserve(count);
	const std::span<const double> in_phase(signal.samples);
	const std::span<const double> quadrature(signal.quadrature);
	for (std::size_t m = 0; m < count; ++m) {
		const double t0 = signal.t0 + static_cast<double>(m * n) / signal.sample_rate;
		grids.push_back(correlator.correlate(in_phase.subspan(m * n, n),
			quadrature.empty() ? quadrature : quadrature.subspan(m * n, n), t0));
	}
	return grids;
}

} // namespace leoacq
