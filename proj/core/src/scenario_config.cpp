#include "leoacq/scenario_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "leoacq/error.hpp"
#include "leoacq/prn_code.hpp"

namespace leoacq {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view section, const std::set<std::string>& known) {
	for (const auto& item : obj.items()) {
		if (!known.count(item.key()))
			fail(ErrorKind::parameter, "unknown key '" + std::string(section) + "." + item.key() + "'");
	}
}

template <typename T>
void read(const json& obj, std::string_view section, const char* key, T& out) {
	const auto it = obj.find(key);
	if (it == obj.end())
		return;
	try {
		out = it->get<T>();
	} catch (const json::exception&) {
		fail(ErrorKind::parameter, "key '" + std::string(section) + "." + key + "' has the wrong type");
	}
}

const json& section(const json& root, const char* name) {
	static const json empty = json::object();
	const auto it = root.find(name);
	if (it == root.end())
		return empty;
	require(it->is_object(), ErrorKind::parameter, "section '" + std::string(name) + "' must be an object");
	return *it;
}

void parse_signal(const json& s, SynthParams& p) {
	reject_unknown(s, "signal", {"prn_id", "chip_rate", "sample_rate", "intermediate_freq",
		"carrier_freq", "amplitude", "code_phase0", "doppler0", "doppler_rate", "data_bits",
		"bit_phase0_ms", "cn0_dbhz", "duration", "signal_present", "t0"});
	require(s.contains("carrier_freq"), ErrorKind::parameter,
		"signal.carrier_freq is required (the carrier has no default)");
	read(s, "signal", "prn_id", p.prn_id);
	read(s, "signal", "chip_rate", p.chip_rate);
	read(s, "signal", "sample_rate", p.sample_rate);
	read(s, "signal", "intermediate_freq", p.intermediate_freq);
	read(s, "signal", "carrier_freq", p.carrier_freq);
	read(s, "signal", "amplitude", p.amplitude);
	read(s, "signal", "code_phase0", p.code_phase0);
	read(s, "signal", "doppler0", p.doppler0);
	read(s, "signal", "doppler_rate", p.doppler_rate);
	read(s, "signal", "bit_phase0_ms", p.bit_phase0_ms);
	read(s, "signal", "duration", p.duration);
	read(s, "signal", "signal_present", p.signal_present);
	read(s, "signal", "t0", p.t0);
	if (s.contains("data_bits")) {
		std::vector<int> bits;
		read(s, "signal", "data_bits", bits);
		p.data_bits.clear();
		for (int b : bits) {
			require(b == 1 || b == -1, ErrorKind::parameter, "signal.data_bits must hold +1 or -1");
			p.data_bits.push_back(static_cast<std::int8_t>(b));
		}
	}
	if (s.contains("cn0_dbhz") && !s.at("cn0_dbhz").is_null()) {
		double cn0 = 0.0;
		read(s, "signal", "cn0_dbhz", cn0);
		p.cn0_dbhz = cn0;
	}
}

} // namespace

std::vector<IntegrationSpec> ScenarioConfig::specs() const {
	std::vector<IntegrationSpec> out;
	for (auto strategy : strategies) {
		for (int t : total_ms) {
			if (strategy == Strategy::differential && t < 2)
				continue;
			if (strategy == Strategy::alternate_half_bit && t % 20 != 0)
				continue;
			out.push_back({strategy, 1, t});
		}
	}
	return out;
}

PassConfig ScenarioConfig::pass_config() const {
	require(pass.has_value(), ErrorKind::parameter, "scenario has no pass section");
	PassConfig c = *pass;
	c.carrier_freq = signal.carrier_freq;
	return c;
}

void ScenarioConfig::validate() const {
	require(!strategies.empty() && !total_ms.empty(), ErrorKind::parameter,
		"acquisition needs at least one strategy and one total_ms");
	require(!specs().empty(), ErrorKind::parameter,
		"no strategy can run at any of the listed total_ms values");
	for (const auto& s : specs())
		s.validate();
	require(timeline.threshold > 0.0, ErrorKind::parameter, "threshold must be positive");
	require(timeline.window.half_span > 0.0, ErrorKind::parameter, "half_span must be positive");
	require(timeline.threads >= 1, ErrorKind::parameter, "threads must be at least 1");
	require(sweep.step > 0.0 && sweep.first > 0.0 && sweep.last >= sweep.first, ErrorKind::parameter,
		"sweep needs 0 < first <= last and a positive step");
	require(sweep.target > 0.0 && sweep.target < 1.0, ErrorKind::parameter,
		"sweep target must lie in (0, 1)");
	generate_code(signal.prn_id, signal.chip_rate);
	const int longest = *std::max_element(total_ms.begin(), total_ms.end());
	if (pass) {
		require(epoch_ms >= longest, ErrorKind::parameter,
			"pass.epoch_ms must cover the longest total_ms");
		require(pass->epoch_step * 1000.0 >= epoch_ms, ErrorKind::parameter,
			"pass epochs overlap: epoch_ms exceeds epoch_step");
		SynthParams probe = signal;
		probe.duration = epoch_ms * kUnitSeconds;
		probe.data_bits.assign(probe.bits_required() + 1, 1);
		probe.validate();
	} else {
		SynthParams probe = signal;
		probe.validate();
	}
}

PassSignalStream make_pass_stream(const ScenarioConfig& config, std::uint64_t seed) {
	SynthParams base = config.signal;
	base.duration = config.epoch_ms * kUnitSeconds;
	base.seed = seed;
	return PassSignalStream(simulate_pass(config.pass_config()), base, config.pass_options);
}

ScenarioConfig parse_scenario(std::string_view json_text) {
	json root;
	try {
		root = json::parse(json_text.begin(), json_text.end());
	} catch (const json::parse_error& e) {
		fail(ErrorKind::parameter, std::string("scenario is not valid JSON: ") + e.what());
	}
	require(root.is_object(), ErrorKind::parameter, "scenario must be a JSON object");
	reject_unknown(root, "scenario", {"signal", "pass", "acquisition", "sweep", "seed",
		"output_dir", "format"});

	ScenarioConfig c;
	parse_signal(section(root, "signal"), c.signal);

	if (root.contains("pass") && !root.at("pass").is_null()) {
		const json& p = section(root, "pass");
		reject_unknown(p, "pass", {"orbit_height", "elevation_mask_deg", "cross_track_offset",
			"epoch_step", "signal_mask_deg", "random_data_bits", "epoch_ms"});
		PassConfig pc;
		read(p, "pass", "orbit_height", pc.orbit_height);
		read(p, "pass", "elevation_mask_deg", pc.elevation_mask_deg);
		read(p, "pass", "cross_track_offset", pc.cross_track_offset);
		read(p, "pass", "epoch_step", pc.epoch_step);
		read(p, "pass", "signal_mask_deg", c.pass_options.signal_mask_deg);
		read(p, "pass", "random_data_bits", c.pass_options.random_data_bits);
		read(p, "pass", "epoch_ms", c.epoch_ms);
		c.pass = pc;
	}

	const json& a = section(root, "acquisition");
	reject_unknown(a, "acquisition", {"strategies", "total_ms", "threshold", "center", "half_span",
		"aided", "center_quantum", "doppler_slack_hz", "code_tolerance_samples", "threads"});
	if (a.contains("strategies")) {
		std::vector<std::string> names;
		read(a, "acquisition", "strategies", names);
		c.strategies.clear();
		for (const auto& n : names) {
			const auto s = parse_strategy(n);
			require(s.has_value(), ErrorKind::parameter, "unknown strategy '" + n + "'");
			c.strategies.push_back(*s);
		}
	}
	read(a, "acquisition", "total_ms", c.total_ms);
	read(a, "acquisition", "threshold", c.timeline.threshold);
	read(a, "acquisition", "center", c.timeline.window.center);
	read(a, "acquisition", "half_span", c.timeline.window.half_span);
	read(a, "acquisition", "aided", c.timeline.window.aided);
	read(a, "acquisition", "center_quantum", c.timeline.window.center_quantum);
	read(a, "acquisition", "doppler_slack_hz", c.timeline.tolerance.doppler_slack_hz);
	read(a, "acquisition", "code_tolerance_samples", c.timeline.tolerance.code_phase_samples);
	read(a, "acquisition", "threads", c.timeline.threads);

	const json& sw = section(root, "sweep");
	reject_unknown(sw, "sweep", {"first", "last", "step", "target"});
	read(sw, "sweep", "first", c.sweep.first);
	read(sw, "sweep", "last", c.sweep.last);
	read(sw, "sweep", "step", c.sweep.step);
	read(sw, "sweep", "target", c.sweep.target);

	if (root.contains("seed") && !root.at("seed").is_null()) {
		std::uint64_t seed = 0;
		read(root, "scenario", "seed", seed);
		c.seed = seed;
	}
	std::string dir = c.output_dir.string();
	read(root, "scenario", "output_dir", dir);
	c.output_dir = dir;
	if (root.contains("format")) {
		std::string tag;
		read(root, "scenario", "format", tag);
		c.format = parse_sample_format(tag);
	}
	return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
	std::ifstream in(path);
	require(in.good(), ErrorKind::io, "cannot open scenario " + path.string());
	std::ostringstream text;
	text << in.rdbuf();
	return parse_scenario(text.str());
}

std::string to_json(const ScenarioConfig& c) {
	const SynthParams& p = c.signal;
	json root;
	std::vector<int> bits(p.data_bits.begin(), p.data_bits.end());
	root["signal"] = {
		{"prn_id", p.prn_id}, {"chip_rate", p.chip_rate}, {"sample_rate", p.sample_rate},
		{"intermediate_freq", p.intermediate_freq}, {"carrier_freq", p.carrier_freq},
		{"amplitude", p.amplitude}, {"code_phase0", p.code_phase0}, {"doppler0", p.doppler0},
		{"doppler_rate", p.doppler_rate}, {"data_bits", bits}, {"bit_phase0_ms", p.bit_phase0_ms},
		{"cn0_dbhz", p.cn0_dbhz ? json(*p.cn0_dbhz) : json(nullptr)}, {"duration", p.duration},
		{"signal_present", p.signal_present}, {"t0", p.t0},
	};
	if (c.pass) {
		root["pass"] = {
			{"orbit_height", c.pass->orbit_height}, {"elevation_mask_deg", c.pass->elevation_mask_deg},
			{"cross_track_offset", c.pass->cross_track_offset}, {"epoch_step", c.pass->epoch_step},
			{"signal_mask_deg", c.pass_options.signal_mask_deg},
			{"random_data_bits", c.pass_options.random_data_bits}, {"epoch_ms", c.epoch_ms},
		};
	}
	std::vector<std::string> names;
	for (auto s : c.strategies)
		names.emplace_back(to_string(s));
	root["acquisition"] = {
		{"strategies", names}, {"total_ms", c.total_ms}, {"threshold", c.timeline.threshold},
		{"center", c.timeline.window.center}, {"half_span", c.timeline.window.half_span},
		{"aided", c.timeline.window.aided}, {"center_quantum", c.timeline.window.center_quantum},
		{"doppler_slack_hz", c.timeline.tolerance.doppler_slack_hz},
		{"code_tolerance_samples", c.timeline.tolerance.code_phase_samples},
		{"threads", c.timeline.threads},
	};
	root["sweep"] = {{"first", c.sweep.first}, {"last", c.sweep.last}, {"step", c.sweep.step},
		{"target", c.sweep.target}};
	root["seed"] = c.seed ? json(*c.seed) : json(nullptr);
	root["output_dir"] = c.output_dir.string();
	root["format"] = std::string(to_string(c.format));
	return root.dump(2) + "\n";
}

} // namespace leoacq
