#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leoacq/acq_core.hpp"
#include "leoacq/detector.hpp"
#include "leoacq/error.hpp"
#include "leoacq/eval_harness.hpp"
#include "leoacq/geometry.hpp"
#include "leoacq/integrators.hpp"
#include "leoacq/prn_code.hpp"
#include "leoacq/sample_io.hpp"
#include "leoacq/scenario_config.hpp"
#include "leoacq/signal_synth.hpp"

namespace leoacq::cli {

namespace {

namespace fs = std::filesystem;

// Raised for command-line mistakes that CLI11 cannot see on its own.
struct UsageError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& path) {
	if (path.has_parent_path())
		fs::create_directories(path.parent_path());
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	require(out.good(), ErrorKind::io, "cannot create " + path.string());
	return out;
}

std::uint64_t need_seed(const std::optional<std::uint64_t>& flag, const ScenarioConfig& config) {
	if (flag)
		return *flag;
	if (config.seed)
		return *config.seed;
	throw UsageError("--seed is required for stochastic runs");
}

std::vector<IntegrationSpec> parse_specs(const std::vector<std::string>& strategies,
	const std::vector<int>& totals) {
	std::vector<IntegrationSpec> specs;
	for (const auto& name : strategies) {
		const auto s = parse_strategy(name);
		if (!s)
			throw UsageError("unknown strategy '" + name + "'");
		for (int t : totals)
			specs.push_back({*s, 1, t});
	}
	return specs;
}

// Epoch source backed by a pass recording and its truth sidecar.
EpochSource file_epoch_source(const fs::path& input, const TruthRecord& truth) {
	require(!truth.epochs.empty(), ErrorKind::parameter,
		input.string() + " is not a pass recording (its truth sidecar lists no epochs)");
	const auto per_epoch = static_cast<std::size_t>(std::llround(truth.epoch_seconds * truth.meta.sample_rate));
	require(sample_count(input, truth.meta) >= per_epoch * truth.epochs.size(), ErrorKind::truncated_file,
		input.string() + " holds fewer samples than its truth sidecar lists");
	EpochSource source;
	source.count = truth.epochs.size();
	source.epoch_step = truth.epochs.size() > 1 ? truth.epochs[1].t0 - truth.epochs[0].t0 : 1.0;
	source.prn_id = truth.params.prn_id;
	source.signal = [input, truth, per_epoch](std::size_t k) {
		SampledSignal s = read_samples(input, truth.meta, k * per_epoch, per_epoch);
		s.t0 = truth.epochs[k].t0;
		return s;
	};
	source.truth = [truth](std::size_t k) { return truth_from_params(truth.epochs[k]); };
	return source;
}

struct EvalInputs {
	fs::path config;
	std::optional<std::uint64_t> seed;
	fs::path input;
	fs::path out_dir;
};

// Timelines for every spec of the scenario, from a recording or synthesized.
std::vector<TimelineSummary> run_timelines(const EvalInputs& in, ScenarioConfig& config) {
	config = load_scenario(in.config);
	if (!in.out_dir.empty())
		config.output_dir = in.out_dir;
	const auto specs = config.specs();
	if (!in.input.empty()) {
		config.validate();
		const TruthRecord truth = read_truth(truth_path(in.input));
		const EpochSource source = file_epoch_source(in.input, truth);
		return acquisition_timelines(source, specs, config.timeline);
	}
	require(config.pass.has_value(), ErrorKind::parameter,
		"scenario needs a pass section (or pass --input with a recording)");
	const std::uint64_t seed = need_seed(in.seed, config);
	config.validate();
	const PassSignalStream stream = make_pass_stream(config, seed);
	return acquisition_timelines(make_epoch_source(stream), specs, config.timeline);
}

void cmd_synth(const fs::path& config_path, const std::optional<std::uint64_t>& seed_flag,
	const fs::path& out_path, const std::string& format_tag, std::ostream& out) {
	ScenarioConfig config = load_scenario(config_path);
	if (!format_tag.empty())
		config.format = parse_sample_format(format_tag);
	config.validate();

	TruthRecord record;
	record.meta.format = config.format;
	record.meta.sample_rate = config.signal.sample_rate;
	record.meta.intermediate_freq = config.signal.intermediate_freq;
	record.meta.t0 = config.signal.t0;
	std::size_t clips = 0;

	if (config.pass) {
		const bool stochastic = config.signal.cn0_dbhz || config.pass_options.random_data_bits;
		const std::uint64_t seed = stochastic ? need_seed(seed_flag, config) : seed_flag.value_or(0);
		const PassSignalStream stream = make_pass_stream(config, seed);
		record.params = stream.base();
		record.epoch_seconds = config.epoch_ms * kUnitSeconds;
		record.meta.t0 = stream.scenario().samples.front().t;
		auto file = open_out(out_path);
		for (std::size_t k = 0; k < stream.size(); ++k) {
			record.epochs.push_back(stream.epoch_params(k));
			clips += write_samples(synthesize(record.epochs.back()), file, record.meta.format);
		}
		out << "wrote " << stream.size() << " epochs of " << config.epoch_ms << " ms to "
			<< out_path.string() << '\n';
	} else {
		SynthParams p = config.signal;
		if (p.cn0_dbhz)
			p.seed = need_seed(seed_flag, config);
		else
			p.seed = seed_flag.value_or(0);
		record.params = p;
		clips = write_samples(synthesize(p), out_path, record.meta);
		out << "wrote " << p.sample_count() << " samples to " << out_path.string() << '\n';
	}
	write_truth(truth_path(out_path), record);
	if (clips > 0)
		out << "clipped " << clips << " values to the " << to_string(config.format) << " range\n";
}

void write_pf_outputs(const ScenarioConfig& config, std::span<const TimelineSummary> timelines,
	std::ostream& out) {
	const auto thresholds = threshold_range(config.sweep.first, config.sweep.last, config.sweep.step);
	std::vector<BoundsRow> rows;
	for (const auto& tl : timelines) {
		const PfCurve curve = pf_sweep(tl.results, tl.labels, thresholds);
		const std::string name = timelines.size() == 1 ? "pf_curve.csv"
			: "pf_curve_" + std::string(to_string(tl.spec.strategy)) + "_"
				+ std::to_string(tl.spec.total_ms) + "ms.csv";
		auto f = open_out(config.output_dir / name);
		write_pf_curve_csv(f, curve);
		rows.push_back({tl.spec, threshold_bounds(curve, config.sweep.target)});
		out << to_string(tl.spec.strategy) << ' ' << tl.spec.total_ms << " ms: ";
		if (rows.back().bounds)
			out << "pf <= " << config.sweep.target << " on [" << rows.back().bounds->lower << ", "
				<< rows.back().bounds->upper << "]\n";
		else
			out << "pf never <= " << config.sweep.target << '\n';
	}
	auto f = open_out(config.output_dir / "bounds.csv");
	write_bounds_csv(f, rows);
}

void cmd_acquire(const fs::path& input, const std::string& format_tag, std::optional<double> fs_flag,
	std::optional<double> if_flag, std::optional<int> prn_flag, const std::vector<std::string>& strategies,
	const std::vector<int>& totals, double center, double half_span, double threshold,
	std::optional<int> stride_ms, const fs::path& out_path, std::ostream& out) {
	std::optional<TruthRecord> truth;
	if (fs::exists(truth_path(input)))
		truth = read_truth(truth_path(input));

	SampleFileMeta meta;
	if (truth)
		meta = truth->meta;
	if (!format_tag.empty())
		meta.format = parse_sample_format(format_tag);
	if (fs_flag)
		meta.sample_rate = *fs_flag;
	if (if_flag)
		meta.intermediate_freq = *if_flag;
	const int prn = prn_flag.value_or(truth ? truth->params.prn_id : 1);

	const auto specs = parse_specs(strategies, totals);
	for (const auto& s : specs)
		s.validate();
	const ChipSequence code = generate_code(prn);
	const std::size_t n = samples_per_unit(meta.sample_rate);

	// Window starts: every pass epoch when the sidecar lists them, else every
	// stride through the file.
	std::vector<std::pair<std::size_t, double>> starts;
	const std::size_t total = sample_count(input, meta);
	if (truth && !truth->epochs.empty()) {
		const auto per_epoch = static_cast<std::size_t>(std::llround(truth->epoch_seconds * meta.sample_rate));
		for (std::size_t k = 0; k < truth->epochs.size(); ++k)
			starts.emplace_back(k * per_epoch, truth->epochs[k].t0);
	} else {
		int longest = 1;
		for (const auto& s : specs)
			longest = std::max(longest, s.total_ms);
		const std::size_t stride = n * static_cast<std::size_t>(stride_ms.value_or(longest));
		require(stride > 0, ErrorKind::parameter, "stride must be positive");
		for (std::size_t off = 0; off + n * static_cast<std::size_t>(longest) <= total; off += stride)
			starts.emplace_back(off, meta.t0 + static_cast<double>(off) / meta.sample_rate);
	}

	std::vector<AcqResult> results;
	for (const auto& spec : specs) {
		const FrequencyPlan plan = make_plan(center, half_span, spec.total_ms);
		const UnitCorrelator corr(code, meta.sample_rate, meta.intermediate_freq, plan);
		for (const auto& [offset, t] : starts) {
			const std::size_t count = spec.units() * n;
			SampledSignal s = read_samples(input, meta, offset, count);
			s.t0 = t;
			std::vector<CorrelationGrid> grids(spec.units());
			for (std::size_t m = 0; m < spec.units(); ++m) {
				const std::span<const double> i_part(s.samples.data() + m * n, n);
				const std::span<const double> q_part = s.is_complex()
					? std::span<const double>(s.quadrature.data() + m * n, n) : std::span<const double>{};
				corr.correlate_into(i_part, q_part, t + static_cast<double>(m * n) / meta.sample_rate, grids[m]);
			}
			results.push_back(evaluate(integrate(spec, grids), threshold, t));
		}
	}
	auto f = open_out(out_path);
	write_results_csv(f, results);
	std::size_t decided = 0;
	for (const auto& r : results)
		decided += r.decided ? 1 : 0;
	out << results.size() << " acquisitions, " << decided << " above threshold " << threshold << '\n';
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
	CLI::App app{"Weak-signal acquisition toolkit for LEO navigation signals", "leoacq"};
	app.require_subcommand(1);

	// synth
	fs::path synth_config, synth_out;
	std::optional<std::uint64_t> synth_seed;
	std::string synth_format;
	auto* synth = app.add_subcommand("synth", "Synthesize a sample file and its truth sidecar");
	synth->add_option("--config", synth_config, "Scenario JSON")->required()->check(CLI::ExistingFile);
	synth->add_option("--seed", synth_seed, "Noise and data-bit seed");
	synth->add_option("--out", synth_out, "Sample file to write")->required();
	synth->add_option("--format", synth_format, "Sample format, e.g. int8-real or float32-iq");

	// pass
	fs::path pass_config, pass_out;
	PassConfig pass_flags;
	auto* pass = app.add_subcommand("pass", "Write the Doppler and range profile of a pass as CSV");
	pass->add_option("--config", pass_config, "Scenario JSON with a pass section")->check(CLI::ExistingFile);
	pass->add_option("--orbit-height", pass_flags.orbit_height, "m")->capture_default_str();
	pass->add_option("--mask", pass_flags.elevation_mask_deg, "Elevation mask, deg")->capture_default_str();
	pass->add_option("--offset", pass_flags.cross_track_offset, "Cross-track offset, m")->capture_default_str();
	pass->add_option("--step", pass_flags.epoch_step, "Epoch step, s")->capture_default_str();
	auto* carrier_opt = pass->add_option("--carrier", pass_flags.carrier_freq, "Carrier frequency, Hz");
	pass->add_option("--out", pass_out, "CSV to write")->required();

	// acquire
	fs::path acq_input, acq_out;
	std::string acq_format;
	std::optional<double> acq_fs, acq_if;
	std::optional<int> acq_prn, acq_stride;
	std::vector<std::string> acq_strategies{"noncoherent"};
	std::vector<int> acq_totals{1};
	double acq_center = 0.0, acq_half_span = 5000.0, acq_threshold = kDefaultMtsmrThreshold;
	auto* acquire = app.add_subcommand("acquire", "Acquire a sample file and write AcqResult rows");
	acquire->add_option("--input", acq_input, "Sample file")->required()->check(CLI::ExistingFile);
	acquire->add_option("--format", acq_format, "Sample format (default: from the truth sidecar)");
	acquire->add_option("--sample-rate", acq_fs, "Hz (default: from the truth sidecar)");
	acquire->add_option("--if", acq_if, "Intermediate frequency, Hz");
	acquire->add_option("--prn", acq_prn, "PRN to search");
	acquire->add_option("--strategy", acq_strategies, "Integration strategy (repeatable)")->capture_default_str();
	acquire->add_option("--total-ms", acq_totals, "Integration duration, ms (repeatable)")->capture_default_str();
	acquire->add_option("--center", acq_center, "Doppler search center, Hz")->capture_default_str();
	acquire->add_option("--half-span", acq_half_span, "Doppler search half span, Hz")->capture_default_str();
	acquire->add_option("--threshold", acq_threshold, "MTSMR threshold")->capture_default_str();
	acquire->add_option("--stride-ms", acq_stride, "Window stride for plain recordings, ms");
	acquire->add_option("--out", acq_out, "CSV to write")->required();

	// sweep and duration share their inputs
	EvalInputs sweep_in, duration_in;
	auto add_eval = [](CLI::App* cmd, EvalInputs& in) {
		cmd->add_option("--config", in.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
		cmd->add_option("--seed", in.seed, "Seed for synthesized passes");
		cmd->add_option("--input", in.input, "Pass recording written by synth (skips synthesis)")
			->check(CLI::ExistingFile);
		cmd->add_option("--out-dir", in.out_dir, "Output directory (default: scenario output_dir)");
	};
	auto* sweep = app.add_subcommand("sweep", "Pf-versus-threshold curves and threshold bounds");
	add_eval(sweep, sweep_in);
	auto* duration = app.add_subcommand("duration", "Successful acquisition duration per strategy and T");
	add_eval(duration, duration_in);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e, out, err);
		return code == 0 ? kOk : kUsage;
	}

	try {
		if (*synth) {
			cmd_synth(synth_config, synth_seed, synth_out, synth_format, out);
		} else if (*pass) {
			PassConfig pc = pass_flags;
			if (!pass_config.empty()) {
				pc = load_scenario(pass_config).pass_config();
			} else if (carrier_opt->count() == 0) {
				throw UsageError("--carrier is required without --config");
			}
			const PassScenario scenario = simulate_pass(pc);
			auto f = open_out(pass_out);
			write_pass_csv(f, scenario);
			out << scenario.size() << " epochs above the mask\n";
		} else if (*acquire) {
			cmd_acquire(acq_input, acq_format, acq_fs, acq_if, acq_prn, acq_strategies, acq_totals,
				acq_center, acq_half_span, acq_threshold, acq_stride, acq_out, out);
		} else if (*sweep) {
			ScenarioConfig config;
			const auto timelines = run_timelines(sweep_in, config);
			auto f = open_out(config.output_dir / "timeline.csv");
			write_timeline_csv(f, timelines);
			write_pf_outputs(config, timelines, out);
		} else if (*duration) {
			ScenarioConfig config;
			const auto timelines = run_timelines(duration_in, config);
			{
				auto f = open_out(config.output_dir / "timeline.csv");
				write_timeline_csv(f, timelines);
			}
			auto f = open_out(config.output_dir / "duration_vs_T.csv");
			write_duration_csv(f, timelines);
			for (const auto& tl : timelines)
				out << to_string(tl.spec.strategy) << ' ' << tl.spec.total_ms << " ms: " << tl.success_s
					<< " s correct, " << tl.decided_s << " s above threshold\n";
		}
	} catch (const UsageError& e) {
		err << "usage error: " << e.what() << '\n';
		return kUsage;
	} catch (const Error& e) {
		err << "error: " << e.what() << '\n';
		return kData;
	} catch (const std::exception& e) {
		err << "error: " << e.what() << '\n';
		return kData;
	}
	return kOk;
}

} // namespace leoacq::cli
