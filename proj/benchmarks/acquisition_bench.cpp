#include <benchmark/benchmark.h>

#include <vector>

#include "leoacq/acq_core.hpp"
#include "leoacq/detector.hpp"
#include "leoacq/integrators.hpp"
#include "leoacq/prn_code.hpp"
#include "leoacq/signal_synth.hpp"

namespace {

leoacq::SynthParams noisy_params(double duration) {
	leoacq::SynthParams p;
	p.prn_id = 3;
	p.doppler0 = 2100.0;
	p.code_phase0 = 311.25;
	p.cn0_dbhz = 45.0;
	p.duration = duration;
	p.data_bits.assign(p.bits_required(), 1);
	p.seed = 11;
	return p;
}

} // namespace

// One 1 ms unit over range(0) Doppler bins at 500 Hz spacing.
static void ProcessUnit(benchmark::State& state) {
	const auto signal = leoacq::synthesize(noisy_params(1e-3));
	const auto code = leoacq::generate_code(3);
	const auto plan = leoacq::make_plan(0.0, 250.0 * static_cast<double>(state.range(0) - 1), 1);
	const leoacq::UnitCorrelator corr(code, signal.sample_rate, signal.intermediate_freq, plan);
	leoacq::CorrelationGrid grid;
	for (auto _ : state) {
		corr.correlate_into(signal.samples, {}, 0.0, grid);
		benchmark::DoNotOptimize(grid);
	}
	state.counters["bins"] = static_cast<double>(plan.size());
}
BENCHMARK(ProcessUnit)->Arg(3)->Arg(11)->Arg(41)->Unit(benchmark::kMillisecond);

// Off-grid residues defeat transform sharing (T = 40 ms bins are 12.5 Hz apart).
static void ProcessUnitFineBins(benchmark::State& state) {
	const auto signal = leoacq::synthesize(noisy_params(1e-3));
	const auto code = leoacq::generate_code(3);
	const auto plan = leoacq::make_plan(0.0, 250.0, 40);
	const leoacq::UnitCorrelator corr(code, signal.sample_rate, signal.intermediate_freq, plan);
	leoacq::CorrelationGrid grid;
	for (auto _ : state) {
		corr.correlate_into(signal.samples, {}, 0.0, grid);
		benchmark::DoNotOptimize(grid);
	}
}
BENCHMARK(ProcessUnitFineBins)->Unit(benchmark::kMillisecond);

static void Integrate(benchmark::State& state) {
	const auto strategy = static_cast<leoacq::Strategy>(state.range(0));
	const auto signal = leoacq::synthesize(noisy_params(20e-3));
	const auto code = leoacq::generate_code(3);
	const auto grids = leoacq::process_units(signal, code, leoacq::make_plan(2000.0, 500.0, 20));
	const leoacq::IntegrationSpec spec{strategy, 1, 20};
	for (auto _ : state) {
		auto out = leoacq::integrate(spec, grids);
		benchmark::DoNotOptimize(out);
	}
	state.SetLabel(std::string(leoacq::to_string(strategy)));
}
BENCHMARK(Integrate)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

static void EvaluateGrid(benchmark::State& state) {
	const auto signal = leoacq::synthesize(noisy_params(5e-3));
	const auto code = leoacq::generate_code(3);
	const auto grids = leoacq::process_units(signal, code, leoacq::make_plan(0.0, 5000.0, 5));
	const auto grid = leoacq::integrate({leoacq::Strategy::noncoherent, 1, 5}, grids);
	for (auto _ : state) {
		auto r = leoacq::evaluate(grid);
		benchmark::DoNotOptimize(r);
	}
}
BENCHMARK(EvaluateGrid)->Unit(benchmark::kMillisecond);

static void Synthesize(benchmark::State& state) {
	const auto p = noisy_params(static_cast<double>(state.range(0)) * 1e-3);
	for (auto _ : state) {
		auto s = leoacq::synthesize(p);
		benchmark::DoNotOptimize(s);
	}
	state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.sample_count()));
}
BENCHMARK(Synthesize)->Arg(1)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
