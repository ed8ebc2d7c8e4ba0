#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "leoacq/detector.hpp"
#include "leoacq/integrators.hpp"
#include "leoacq/signal_synth.hpp"

namespace leoacq {

/// Injected ground truth for one acquisition epoch.
struct EpochTruth {
	double t = 0.0;
	bool present = true;            // false: no signal in the epoch
	double doppler = 0.0;           // Hz at the epoch start
	double doppler_rate = 0.0;      // Hz/s
	double code_phase = 0.0;        // samples at the epoch start
	double code_rate = 0.0;         // samples/s drift of the code delay
	double samples_per_code = 0.0;

	/// Mean Doppler and code delay over the first total_ms of the epoch,
	/// which is what an integrating estimator converges to.
	double doppler_over(int total_ms) const noexcept;
	double code_phase_over(int total_ms) const noexcept;
};

EpochTruth truth_from_params(const SynthParams& params);

struct LabelTolerance {
	/// Added to bin_width / 2.
	double doppler_slack_hz = 0.0;
	double code_phase_samples = 1.0;
};

struct EpochLabel {
	double t = 0.0;
	double truth_doppler = 0.0;
	double truth_code_phase = 0.0;
	bool estimate_ok = false;
};

/// Doppler within bin_width/2 (+ slack) and cyclic code-phase error within
/// tolerance, both against the window-mean truth for the result's total_ms.
/// Epochs without a signal are never ok.
std::vector<EpochLabel> label_epochs(std::span<const AcqResult> results,
	std::span<const EpochTruth> truths, const LabelTolerance& tolerance = {});

struct PfCurve {
	std::vector<double> thresholds;
	std::vector<double> pf;                 // miss_rate + false_alarm_rate
	std::vector<double> miss_rate;          // not decided although ok
	std::vector<double> false_alarm_rate;   // decided although not ok
};

/// For each threshold, the fraction of epochs whose MTSMR decision disagrees
/// with the truth label. Thresholds must be ascending.
PfCurve pf_sweep(std::span<const AcqResult> results, std::span<const EpochLabel> labels,
	std::span<const double> thresholds);

/// Evenly spaced ascending thresholds [first, last] with the given step.
std::vector<double> threshold_range(double first, double last, double step);

struct ThresholdBounds {
	double lower = 0.0;
	double upper = 0.0;
};

/// Smallest and largest threshold whose pf <= target; nullopt if none.
std::optional<ThresholdBounds> threshold_bounds(const PfCurve& curve, double target);

/// Where the acquisition looks in Doppler for each epoch.
struct SearchWindow {
	double center = 0.0;
	double half_span = 5000.0;
	/// Center each epoch on the predicted Doppler rounded to center_quantum,
	/// as a receiver with coarse ephemeris aiding would.
	bool aided = false;
	double center_quantum = 250.0;

	double center_for(const EpochTruth& truth) const;
};

/// Random-access epochs with their truth. Callables must be safe to invoke
/// from several threads when TimelineConfig::threads > 1.
struct EpochSource {
	std::size_t count = 0;
	double epoch_step = 1.0;
	int prn_id = 1;
	std::function<SampledSignal(std::size_t)> signal;
	std::function<EpochTruth(std::size_t)> truth;
};

/// The stream must outlive the returned source.
EpochSource make_epoch_source(const PassSignalStream& stream);

struct TimelineConfig {
	SearchWindow window;
	double threshold = kDefaultMtsmrThreshold;
	LabelTolerance tolerance;
	unsigned threads = 1;
};

struct TimelineSummary {
	IntegrationSpec spec;
	std::vector<AcqResult> results;
	std::vector<EpochLabel> labels;
	double success_s = 0.0;     // ok epochs x epoch step
	double decided_s = 0.0;     // threshold-decided epochs x epoch step
	std::optional<double> first_ok_t;
	std::optional<double> last_ok_t;
};

/// Runs every spec over every epoch, integrating from the start of each
/// epoch. Unit grids are shared between specs of equal total_ms. Results do
/// not depend on the thread count.
std::vector<TimelineSummary> acquisition_timelines(const EpochSource& source,
	std::span<const IntegrationSpec> specs, const TimelineConfig& config);

TimelineSummary acquisition_timeline(const EpochSource& source, const IntegrationSpec& spec,
	const TimelineConfig& config);

/// Contrast of one cell against the grid floor: its amplitude-domain value
/// over the mean amplitude-domain value of cells outside the peak-style
/// neighbourhood (rows +/-1 and +/-l_spc samples) around it. Differential
/// grids are products of two unit outputs and are square-rooted first, so
/// every strategy is compared on the same amplitude scale.
double cell_contrast(const DetectionGrid& grid, std::size_t bin, std::size_t sample);

// CSV emitters.
void write_timeline_csv(std::ostream& out, std::span<const TimelineSummary> timelines);
void write_pf_curve_csv(std::ostream& out, const PfCurve& curve);
struct BoundsRow {
	IntegrationSpec spec;
	std::optional<ThresholdBounds> bounds;
};
void write_bounds_csv(std::ostream& out, std::span<const BoundsRow> rows);
void write_duration_csv(std::ostream& out, std::span<const TimelineSummary> timelines);

} // namespace leoacq
