#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leoacq/eval_harness.hpp"
#include "leoacq/geometry.hpp"
#include "leoacq/integrators.hpp"
#include "leoacq/sample_io.hpp"
#include "leoacq/signal_synth.hpp"

namespace leoacq {

struct SweepConfig {
	double first = 1.0;
	double last = 6.0;
	double step = 0.05;
	double target = 0.10;
};

/// A whole run: signal, optional pass geometry, acquisition and evaluation
/// settings. Stored as JSON with the sections "signal", "pass",
/// "acquisition", "sweep" plus top-level "seed", "output_dir" and "format".
struct ScenarioConfig {
	SynthParams signal;
	/// Present when the run follows a satellite pass; carrier_freq is taken
	/// from signal.carrier_freq.
	std::optional<PassConfig> pass;
	PassSignalOptions pass_options;
	/// Samples synthesized per pass epoch, ms. Must cover the longest total_ms.
	int epoch_ms = 40;

	std::vector<Strategy> strategies{Strategy::noncoherent};
	std::vector<int> total_ms{5};
	TimelineConfig timeline;
	SweepConfig sweep;

	std::optional<std::uint64_t> seed;
	std::filesystem::path output_dir = ".";
	SampleFormat format = SampleFormat::float32_real;

	/// Cross product of strategies and total_ms, in listed order, skipping
	/// combinations a strategy cannot run (differential at 1 ms, alternate
	/// half-bit off multiples of 20 ms).
	std::vector<IntegrationSpec> specs() const;
	/// Pass geometry with the carrier filled in. Requires `pass`.
	PassConfig pass_config() const;
	/// Checks every module precondition that can be checked before running.
	void validate() const;
};

/// Pass scenario plus lazily synthesized epochs of epoch_ms each, seeded with
/// `seed`. Requires a pass section.
PassSignalStream make_pass_stream(const ScenarioConfig& config, std::uint64_t seed);

/// Throws ErrorKind::parameter naming the offending key.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
/// Round-trips through parse_scenario.
std::string to_json(const ScenarioConfig& config);

} // namespace leoacq
