#include "leoacq/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <thread>

#include "leoacq/acq_core.hpp"
#include "leoacq/csv.hpp"
#include "leoacq/error.hpp"
#include "leoacq/prn_code.hpp"

namespace leoacq {

namespace {

double cyclic_error(double a, double b, double period) {
	double d = std::fmod(std::abs(a - b), period);
	return std::min(d, period - d);
}

double wrap(double x, double period) {
	double r = std::fmod(x, period);
	if (r < 0.0)
		r += period;
	return r >= period ? 0.0 : r;
}

} // namespace

double EpochTruth::doppler_over(int total_ms) const noexcept {
	return doppler + doppler_rate * 0.5 * total_ms * kUnitSeconds;
}

double EpochTruth::code_phase_over(int total_ms) const noexcept {
	const double shifted = code_phase + code_rate * 0.5 * total_ms * kUnitSeconds;
	return samples_per_code > 0.0 ? wrap(shifted, samples_per_code) : shifted;
}

EpochTruth truth_from_params(const SynthParams& params) {
	EpochTruth t;
	t.t = params.t0;
	t.present = params.signal_present;
	t.doppler = params.doppler0;
	t.doppler_rate = params.doppler_rate;
	t.code_phase = params.code_delay_samples(0.0);
	const double samples_per_chip = params.sample_rate / params.chip_rate;
	t.code_rate = -params.chip_rate * params.doppler0 / params.carrier_freq * samples_per_chip;
	t.samples_per_code = static_cast<double>(kGoldCodeLength) * samples_per_chip;
	return t;
}

std::vector<EpochLabel> label_epochs(std::span<const AcqResult> results,
	std::span<const EpochTruth> truths, const LabelTolerance& tolerance) {
	require(results.size() == truths.size(), ErrorKind::shape_mismatch,
		"results and truth differ in length");
	std::vector<EpochLabel> labels;
	labels.reserve(results.size());
	for (std::size_t k = 0; k < results.size(); ++k) {
		const AcqResult& r = results[k];
		const EpochTruth& truth = truths[k];
		EpochLabel label;
		label.t = r.t;
		label.truth_doppler = truth.doppler_over(r.spec.total_ms);
		label.truth_code_phase = truth.code_phase_over(r.spec.total_ms);
		if (truth.present) {
			const double period = r.samples_per_code > 0
				? static_cast<double>(r.samples_per_code) : truth.samples_per_code;
			const bool doppler_ok = std::abs(r.doppler_hat - label.truth_doppler)
				<= r.bin_width / 2.0 + tolerance.doppler_slack_hz;
			const bool code_ok = cyclic_error(static_cast<double>(r.code_phase_hat),
				label.truth_code_phase, period) <= tolerance.code_phase_samples;
			label.estimate_ok = doppler_ok && code_ok;
		}
		labels.push_back(label);
	}
	return labels;
}

PfCurve pf_sweep(std::span<const AcqResult> results, std::span<const EpochLabel> labels,
	std::span<const double> thresholds) {
	require(!results.empty() && !thresholds.empty(), ErrorKind::parameter,
		"pf sweep needs results and thresholds");
	require(results.size() == labels.size(), ErrorKind::shape_mismatch,
		"results and labels differ in length");
	require(std::is_sorted(thresholds.begin(), thresholds.end()), ErrorKind::parameter,
		"thresholds must be ascending");

	PfCurve curve;
	const auto n = static_cast<double>(results.size());
	for (double theta : thresholds) {
		std::size_t misses = 0;
		std::size_t false_alarms = 0;
		for (std::size_t k = 0; k < results.size(); ++k) {
			const bool d = decide(results[k].mtsmr, theta);
			if (d && !labels[k].estimate_ok)
				++false_alarms;
			else if (!d && labels[k].estimate_ok)
				++misses;
		}
		curve.thresholds.push_back(theta);
		curve.miss_rate.push_back(static_cast<double>(misses) / n);
		curve.false_alarm_rate.push_back(static_cast<double>(false_alarms) / n);
		curve.pf.push_back(static_cast<double>(misses + false_alarms) / n);
	}
	return curve;
}

std::vector<double> threshold_range(double first, double last, double step) {
	require(step > 0.0 && first > 0.0 && last >= first, ErrorKind::parameter,
		"threshold range needs 0 < first <= last and a positive step");
	std::vector<double> out;
	const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
	out.reserve(count);
	for (std::size_t k = 0; k < count; ++k)
		out.push_back(first + static_cast<double>(k) * step);
	return out;
}

std::optional<ThresholdBounds> threshold_bounds(const PfCurve& curve, double target) {
	require(target > 0.0 && target < 1.0, ErrorKind::parameter, "target must lie in (0, 1)");
	require(curve.thresholds.size() == curve.pf.size(), ErrorKind::shape_mismatch,
		"curve thresholds and pf differ in length");
	std::optional<ThresholdBounds> out;
	for (std::size_t k = 0; k < curve.pf.size(); ++k) {
		if (curve.pf[k] > target)
			continue;
		if (!out)
			out = ThresholdBounds{curve.thresholds[k], curve.thresholds[k]};
		out->upper = curve.thresholds[k];
	}
	return out;
}

double SearchWindow::center_for(const EpochTruth& truth) const {
	if (!aided)
		return center;
	require(center_quantum > 0.0, ErrorKind::parameter, "aiding quantum must be positive");
	return std::round(truth.doppler / center_quantum) * center_quantum;
}

EpochSource make_epoch_source(const PassSignalStream& stream) {
	EpochSource source;
	source.count = stream.size();
	source.epoch_step = stream.scenario().epoch_step;
	source.prn_id = stream.base().prn_id;
	source.signal = [&stream](std::size_t k) { return stream.epoch(k); };
	source.truth = [&stream](std::size_t k) { return truth_from_params(stream.epoch_params(k)); };
	return source;
}

namespace {

// Correlators are rebuilt only when the plan moves; one cache per worker.
class CorrelatorCache {
public:
	CorrelatorCache(const ChipSequence& code, double sample_rate, double intermediate_freq)
		: code_(code), sample_rate_(sample_rate), intermediate_freq_(intermediate_freq) {}

	const UnitCorrelator& get(int total_ms, const FrequencyPlan& plan) {
		auto it = cache_.find(total_ms);
		if (it == cache_.end() || !(it->second->plan() == plan)) {
			auto corr = std::make_unique<UnitCorrelator>(code_, sample_rate_, intermediate_freq_, plan);
			it = cache_.insert_or_assign(total_ms, std::move(corr)).first;
		}
		return *it->second;
	}

private:
	const ChipSequence& code_;
	double sample_rate_;
	double intermediate_freq_;
	std::map<int, std::unique_ptr<UnitCorrelator>> cache_;
};

struct EpochOutcome {
	std::vector<AcqResult> results;  // one per spec, in spec order
	EpochTruth truth;
};

EpochOutcome run_epoch(const EpochSource& source, std::size_t k,
	std::span<const IntegrationSpec> specs, const TimelineConfig& config,
	const ChipSequence& code, std::unique_ptr<CorrelatorCache>& cache) {
	EpochOutcome outcome;
	outcome.truth = source.truth(k);
	const SampledSignal signal = source.signal(k);
	if (!cache)
		cache = std::make_unique<CorrelatorCache>(code, signal.sample_rate, signal.intermediate_freq);

	const double center = config.window.center_for(outcome.truth);
	outcome.results.resize(specs.size());
	std::map<int, std::vector<std::size_t>> by_total;
	for (std::size_t s = 0; s < specs.size(); ++s)
		by_total[specs[s].total_ms].push_back(s);

	for (const auto& [total_ms, members] : by_total) {
		const FrequencyPlan plan = make_plan(center, config.window.half_span, total_ms);
		const UnitCorrelator& corr = cache->get(total_ms, plan);
		const auto n = corr.samples_per_code();
		const auto units = static_cast<std::size_t>(total_ms);
		require(signal.size() >= units * n, ErrorKind::insufficient_units,
			"epoch " + std::to_string(k) + " holds fewer than " + std::to_string(total_ms)
				+ " ms of samples");
		std::vector<CorrelationGrid> grids(units);
		const std::span<const double> in_phase(signal.samples);
		const std::span<const double> quad(signal.quadrature);
		for (std::size_t m = 0; m < units; ++m) {
			const double t0 = signal.t0 + static_cast<double>(m * n) / signal.sample_rate;
			corr.correlate_into(in_phase.subspan(m * n, n),
				signal.is_complex() ? quad.subspan(m * n, n) : std::span<const double>{}, t0, grids[m]);
		}
		for (auto s : members) {
			const DetectionGrid grid = integrate(specs[s], grids);
			outcome.results[s] = evaluate(grid, config.threshold, outcome.truth.t);
		}
	}
	return outcome;
}

} // namespace

std::vector<TimelineSummary> acquisition_timelines(const EpochSource& source,
	std::span<const IntegrationSpec> specs, const TimelineConfig& config) {
	require(source.signal && source.truth, ErrorKind::parameter, "epoch source is incomplete");
	require(!specs.empty(), ErrorKind::parameter, "no integration specs given");
	for (const auto& s : specs)
		s.validate();
	const ChipSequence code = generate_code(source.prn_id);

	std::vector<EpochOutcome> outcomes(source.count);
	const unsigned workers = std::max(1u, std::min<unsigned>(config.threads,
		static_cast<unsigned>(std::max<std::size_t>(1, source.count))));
	if (workers == 1) {
		std::unique_ptr<CorrelatorCache> cache;
		for (std::size_t k = 0; k < source.count; ++k)
			outcomes[k] = run_epoch(source, k, specs, config, code, cache);
	} else {
		// Strided partition; each slot is written by exactly one worker.
		std::vector<std::exception_ptr> errors(workers);
		std::vector<std::thread> pool;
		pool.reserve(workers);
		for (unsigned w = 0; w < workers; ++w) {
			pool.emplace_back([&, w] {
				try {
					std::unique_ptr<CorrelatorCache> cache;
					for (std::size_t k = w; k < source.count; k += workers)
						outcomes[k] = run_epoch(source, k, specs, config, code, cache);
				} catch (...) {
					errors[w] = std::current_exception();
				}
			});
		}
		for (auto& t : pool)
			t.join();
		for (auto& e : errors)
			if (e)
				std::rethrow_exception(e);
	}

	std::vector<EpochTruth> truths;
	truths.reserve(outcomes.size());
	for (const auto& o : outcomes)
		truths.push_back(o.truth);

	std::vector<TimelineSummary> out(specs.size());
	for (std::size_t s = 0; s < specs.size(); ++s) {
		TimelineSummary& summary = out[s];
		summary.spec = specs[s];
		summary.results.reserve(outcomes.size());
		for (const auto& o : outcomes)
			summary.results.push_back(o.results[s]);
		summary.labels = label_epochs(summary.results, truths, config.tolerance);
		for (std::size_t k = 0; k < summary.results.size(); ++k) {
			if (summary.results[k].decided)
				summary.decided_s += source.epoch_step;
			if (summary.labels[k].estimate_ok) {
				summary.success_s += source.epoch_step;
				if (!summary.first_ok_t)
					summary.first_ok_t = summary.labels[k].t;
				summary.last_ok_t = summary.labels[k].t;
			}
		}
	}
	return out;
}

TimelineSummary acquisition_timeline(const EpochSource& source, const IntegrationSpec& spec,
	const TimelineConfig& config) {
	return acquisition_timelines(source, std::span<const IntegrationSpec>(&spec, 1), config).front();
}

double cell_contrast(const DetectionGrid& grid, std::size_t bin, std::size_t sample) {
	require(bin < grid.rows && sample < grid.cols, ErrorKind::out_of_range, "cell outside the grid");
	const bool quadratic = grid.spec.strategy == Strategy::differential;
	auto amplitude = [quadratic](double v) { return quadratic ? std::sqrt(v) : v; };
	const std::size_t l = grid.samples_per_chip;
	double sum = 0.0;
	std::size_t count = 0;
	for (std::size_t i = 0; i < grid.rows; ++i) {
		const bool row_band = i + 1 >= bin && i <= bin + 1;
		for (std::size_t j = 0; j < grid.cols; ++j) {
			const std::size_t d = j > sample ? j - sample : sample - j;
			if (row_band && std::min(d, grid.cols - d) <= l)
				continue;
			sum += amplitude(grid.at(i, j));
			++count;
		}
	}
	require(count > 0 && sum > 0.0, ErrorKind::parameter, "grid floor is empty");
	return amplitude(grid.at(bin, sample)) / (sum / static_cast<double>(count));
}

void write_timeline_csv(std::ostream& out, std::span<const TimelineSummary> timelines) {
	CsvWriter csv(out, "t_s,strategy,total_ms,doppler_hz,code_phase_samples,mtsmr,mtmr,decided,"
		"truth_doppler_hz,truth_code_phase_samples,ok");
	for (const auto& tl : timelines) {
		for (std::size_t k = 0; k < tl.results.size(); ++k) {
			const auto& r = tl.results[k];
			const auto& l = tl.labels[k];
			csv.field(r.t).field(to_string(r.spec.strategy)).field(r.spec.total_ms)
				.field(r.doppler_hat).field(r.code_phase_hat).field(r.mtsmr).field(r.mtmr)
				.field(r.decided).field(l.truth_doppler).field(l.truth_code_phase).field(l.estimate_ok);
			csv.end_row();
		}
	}
}

void write_pf_curve_csv(std::ostream& out, const PfCurve& curve) {
	CsvWriter csv(out, "threshold,pf,miss_rate,false_alarm_rate");
	for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
		csv.field(curve.thresholds[k]).field(curve.pf[k]).field(curve.miss_rate[k])
			.field(curve.false_alarm_rate[k]);
		csv.end_row();
	}
}

void write_bounds_csv(std::ostream& out, std::span<const BoundsRow> rows) {
	CsvWriter csv(out, "strategy,total_ms,lower,upper");
	for (const auto& row : rows) {
		csv.field(to_string(row.spec.strategy)).field(row.spec.total_ms);
		if (row.bounds)
			csv.field(row.bounds->lower).field(row.bounds->upper);
		else
			csv.field("none").field("none");
		csv.end_row();
	}
}

void write_duration_csv(std::ostream& out, std::span<const TimelineSummary> timelines) {
	CsvWriter csv(out, "strategy,total_ms,success_s,decided_s");
	for (const auto& tl : timelines) {
		csv.field(to_string(tl.spec.strategy)).field(tl.spec.total_ms).field(tl.success_s)
			.field(tl.decided_s);
		csv.end_row();
	}
}

} // namespace leoacq
