#include "leoacq/sample_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "leoacq/error.hpp"

namespace leoacq {

static_assert(std::endian::native == std::endian::little,
	"sample files are little-endian; big-endian hosts need byte swapping");

namespace {

constexpr std::array<std::pair<SampleFormat, std::string_view>, 6> kFormatTags{{
	{SampleFormat::int8_real, "int8-real"},
	{SampleFormat::int16_real, "int16-real"},
	{SampleFormat::float32_real, "float32-real"},
	{SampleFormat::int8_iq, "int8-iq"},
	{SampleFormat::int16_iq, "int16-iq"},
	{SampleFormat::float32_iq, "float32-iq"},
}};

std::size_t component_bytes(SampleFormat format) noexcept {
	switch (format) {
	case SampleFormat::int8_real:
	case SampleFormat::int8_iq: return 1;
	case SampleFormat::int16_real:
	case SampleFormat::int16_iq: return 2;
	case SampleFormat::float32_real:
	case SampleFormat::float32_iq: return 4;
	}
	return 1;
}

double decode(const unsigned char* p, SampleFormat format) {
	switch (component_bytes(format)) {
	case 1: {
		std::int8_t v;
		std::memcpy(&v, p, 1);
		return static_cast<double>(v) / 128.0;
	}
	case 2: {
		std::int16_t v;
		std::memcpy(&v, p, 2);
		return static_cast<double>(v) / 32768.0;
	}
	default: {
		float v;
		std::memcpy(&v, p, 4);
		return static_cast<double>(v);
	}
	}
}

// Rounds and saturates to the integer code; counts saturations.
template <typename Int>
Int quantize(double x, double scale, std::size_t& clips) {
	constexpr double lo = static_cast<double>(std::numeric_limits<Int>::min());
	constexpr double hi = static_cast<double>(std::numeric_limits<Int>::max());
	const double v = std::round(x * scale);
	if (v < lo || v > hi) {
		++clips;
		return static_cast<Int>(v < lo ? lo : hi);
	}
	return static_cast<Int>(v);
}

void encode(double x, SampleFormat format, std::string& out, std::size_t& clips) {
	switch (component_bytes(format)) {
	case 1: {
		const auto v = quantize<std::int8_t>(x, 128.0, clips);
		out.push_back(static_cast<char>(v));
		break;
	}
	case 2: {
		const auto v = quantize<std::int16_t>(x, 32768.0, clips);
		char bytes[2];
		std::memcpy(bytes, &v, 2);
		out.append(bytes, 2);
		break;
	}
	default: {
		const auto v = static_cast<float>(x);
		char bytes[4];
		std::memcpy(bytes, &v, 4);
		out.append(bytes, 4);
		break;
	}
	}
}

// Shortest round-trip decimal form.
std::string exact(double v) {
	if (std::isnan(v))
		return "nan";
	if (std::isinf(v))
		return v > 0 ? "inf" : "-inf";
	char buf[32];
	const auto res = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& key) {
	double v = 0.0;
	const char* first = text.data();
	const char* last = first + text.size();
	if (text == "inf")
		return INFINITY;
	if (text == "-inf")
		return -INFINITY;
	const auto res = std::from_chars(first, last, v);
	require(res.ec == std::errc{} && res.ptr == last, ErrorKind::parameter,
		"truth key '" + key + "' is not a number: " + text);
	return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
	std::uint64_t v = 0;
	const char* last = text.data() + text.size();
	const auto res = std::from_chars(text.data(), last, v);
	require(res.ec == std::errc{} && res.ptr == last, ErrorKind::parameter,
		"truth key '" + key + "' is not an unsigned integer: " + text);
	return v;
}

std::string bits_text(const std::vector<std::int8_t>& bits) {
	std::string s;
	s.reserve(bits.size());
	for (auto b : bits)
		s.push_back(b > 0 ? '+' : '-');
	return s;
}

std::vector<std::int8_t> parse_bits(const std::string& text) {
	std::vector<std::int8_t> bits;
	for (char c : text) {
		require(c == '+' || c == '-', ErrorKind::parameter, "data bits must be written as + or -");
		bits.push_back(c == '+' ? 1 : -1);
	}
	return bits;
}

// Fields that vary per pass epoch, in sidecar order.
constexpr std::string_view kEpochFields =
	"t0,doppler0,doppler_rate,code_phase0,bit_phase0_ms,amplitude,cn0_dbhz,seed,signal_present,data_bits";

std::string epoch_line(const SynthParams& p) {
	std::ostringstream s;
	s << exact(p.t0) << ',' << exact(p.doppler0) << ',' << exact(p.doppler_rate) << ','
	  << exact(p.code_phase0) << ',' << exact(p.bit_phase0_ms) << ',' << exact(p.amplitude) << ','
	  << (p.cn0_dbhz ? exact(*p.cn0_dbhz) : std::string("none")) << ',' << p.seed << ','
	  << (p.signal_present ? 1 : 0) << ',' << bits_text(p.data_bits);
	return s.str();
}

SynthParams parse_epoch(const std::string& text, const SynthParams& base) {
	std::vector<std::string> parts;
	std::stringstream s(text);
	std::string item;
	while (std::getline(s, item, ','))
		parts.push_back(item);
	if (!text.empty() && text.back() == ',')
		parts.emplace_back();
	require(parts.size() == 10, ErrorKind::parameter,
		"epoch line needs " + std::string(kEpochFields) + ": " + text);
	SynthParams p = base;
	p.t0 = parse_double(parts[0], "epoch.t0");
	p.doppler0 = parse_double(parts[1], "epoch.doppler0");
	p.doppler_rate = parse_double(parts[2], "epoch.doppler_rate");
	p.code_phase0 = parse_double(parts[3], "epoch.code_phase0");
	p.bit_phase0_ms = parse_double(parts[4], "epoch.bit_phase0_ms");
	p.amplitude = parse_double(parts[5], "epoch.amplitude");
	if (parts[6] == "none")
		p.cn0_dbhz.reset();
	else
		p.cn0_dbhz = parse_double(parts[6], "epoch.cn0_dbhz");
	p.seed = parse_u64(parts[7], "epoch.seed");
	p.signal_present = parts[8] == "1";
	p.data_bits = parse_bits(parts[9]);
	return p;
}

} // namespace

std::string_view to_string(SampleFormat format) noexcept {
	for (const auto& [f, tag] : kFormatTags)
		if (f == format)
			return tag;
	return "unknown";
}

SampleFormat parse_sample_format(std::string_view tag) {
	for (const auto& [f, t] : kFormatTags)
		if (t == tag)
			return f;
	fail(ErrorKind::unknown_format, "unknown sample format '" + std::string(tag) + "'");
}

bool is_iq(SampleFormat format) noexcept {
	return format == SampleFormat::int8_iq || format == SampleFormat::int16_iq
		|| format == SampleFormat::float32_iq;
}

std::size_t sample_bytes(SampleFormat format) noexcept {
	return component_bytes(format) * (is_iq(format) ? 2 : 1);
}

std::size_t sample_count(const std::filesystem::path& path, const SampleFileMeta& meta) {
	std::error_code ec;
	const auto bytes = std::filesystem::file_size(path, ec);
	require(!ec, ErrorKind::io, "cannot stat " + path.string() + ": " + ec.message());
	const std::size_t width = sample_bytes(meta.format);
	if (bytes % width != 0)
		fail(ErrorKind::truncated_file, path.string() + " is truncated: "
			+ std::to_string(bytes % width) + " trailing byte(s) at byte offset "
			+ std::to_string(bytes - bytes % width) + " do not form a whole "
			+ std::string(to_string(meta.format)) + " sample");
	return bytes / width;
}

SampledSignal read_samples(const std::filesystem::path& path, const SampleFileMeta& meta,
	std::size_t offset, std::size_t count) {
	require(meta.sample_rate > 0.0, ErrorKind::parameter, "sample rate must be positive");
	const std::size_t total = sample_count(path, meta);
	if (offset > total || count > total - offset)
		fail(ErrorKind::out_of_range, "read of samples [" + std::to_string(offset) + ", "
			+ std::to_string(offset + count) + ") exceeds the " + std::to_string(total)
			+ " samples in " + path.string());

	const std::size_t width = sample_bytes(meta.format);
	const std::size_t comp = component_bytes(meta.format);
	std::ifstream in(path, std::ios::binary);
	require(in.good(), ErrorKind::io, "cannot open " + path.string());
	in.seekg(static_cast<std::streamoff>(offset * width));
	std::vector<unsigned char> raw(count * width);
	in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
	if (static_cast<std::size_t>(in.gcount()) != raw.size())
		fail(ErrorKind::truncated_file, path.string() + " ended early at byte offset "
			+ std::to_string(offset * width + static_cast<std::size_t>(in.gcount())));

	SampledSignal out;
	out.sample_rate = meta.sample_rate;
	out.intermediate_freq = meta.intermediate_freq;
	out.t0 = meta.t0 + static_cast<double>(offset) / meta.sample_rate;
	out.samples.resize(count);
	if (is_iq(meta.format))
		out.quadrature.resize(count);
	for (std::size_t k = 0; k < count; ++k) {
		const unsigned char* p = raw.data() + k * width;
		out.samples[k] = decode(p, meta.format);
		if (is_iq(meta.format))
			out.quadrature[k] = decode(p + comp, meta.format);
	}
	return out;
}

SampledSignal read_samples(const std::filesystem::path& path, const SampleFileMeta& meta) {
	return read_samples(path, meta, 0, sample_count(path, meta));
}

std::size_t write_samples(const SampledSignal& signal, std::ostream& out, SampleFormat format) {
	require(!signal.is_complex() || is_iq(format), ErrorKind::parameter,
		"an iq signal cannot be stored in a real format");
	require(!signal.is_complex() || signal.quadrature.size() == signal.samples.size(),
		ErrorKind::parameter, "quadrature length differs from in-phase length");
	const bool finite = std::all_of(signal.samples.begin(), signal.samples.end(),
		[](double v) { return std::isfinite(v); })
		&& std::all_of(signal.quadrature.begin(), signal.quadrature.end(),
			[](double v) { return std::isfinite(v); });
	require(finite, ErrorKind::parameter, "signal holds non-finite samples");

	std::string bytes;
	bytes.reserve(signal.size() * sample_bytes(format));
	std::size_t clips = 0;
	for (std::size_t k = 0; k < signal.size(); ++k) {
		encode(signal.samples[k], format, bytes, clips);
		if (is_iq(format))
			encode(signal.is_complex() ? signal.quadrature[k] : 0.0, format, bytes, clips);
	}
	out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
	require(out.good(), ErrorKind::io, "sample write failed");
	return clips;
}

std::size_t write_samples(const SampledSignal& signal, const std::filesystem::path& path,
	const SampleFileMeta& meta) {
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	require(out.good(), ErrorKind::io, "cannot create " + path.string());
	const std::size_t clips = write_samples(signal, out, meta.format);
	out.flush();
	require(out.good(), ErrorKind::io, "write to " + path.string() + " failed");
	return clips;
}

std::filesystem::path truth_path(const std::filesystem::path& sample_file) {
	auto p = sample_file;
	p += ".truth";
	return p;
}

void write_truth(const std::filesystem::path& path, const TruthRecord& record) {
	const SynthParams& p = record.params;
	std::ostringstream s;
	s << "format=" << to_string(record.meta.format) << '\n'
	  << "sample_rate=" << exact(record.meta.sample_rate) << '\n'
	  << "intermediate_freq=" << exact(record.meta.intermediate_freq) << '\n'
	  << "t0=" << exact(record.meta.t0) << '\n'
	  << "prn_id=" << p.prn_id << '\n'
	  << "chip_rate=" << exact(p.chip_rate) << '\n'
	  << "carrier_freq=" << exact(p.carrier_freq) << '\n'
	  << "amplitude=" << exact(p.amplitude) << '\n'
	  << "code_phase0=" << exact(p.code_phase0) << '\n'
	  << "doppler0=" << exact(p.doppler0) << '\n'
	  << "doppler_rate=" << exact(p.doppler_rate) << '\n'
	  << "bit_phase0_ms=" << exact(p.bit_phase0_ms) << '\n'
	  << "cn0_dbhz=" << (p.cn0_dbhz ? exact(*p.cn0_dbhz) : std::string("none")) << '\n'
	  << "duration=" << exact(p.duration) << '\n'
	  << "seed=" << p.seed << '\n'
	  << "signal_present=" << (p.signal_present ? 1 : 0) << '\n'
	  << "data_bits=" << bits_text(p.data_bits) << '\n';
	if (!record.epochs.empty()) {
		s << "epoch_seconds=" << exact(record.epoch_seconds) << '\n'
		  << "epoch_count=" << record.epochs.size() << '\n'
		  << "epoch_fields=" << kEpochFields << '\n';
		for (std::size_t k = 0; k < record.epochs.size(); ++k)
			s << "epoch." << k << '=' << epoch_line(record.epochs[k]) << '\n';
	}
	std::ofstream out(path, std::ios::trunc);
	require(out.good(), ErrorKind::io, "cannot create " + path.string());
	out << s.str();
	require(out.good(), ErrorKind::io, "write to " + path.string() + " failed");
}

TruthRecord read_truth(const std::filesystem::path& path) {
	std::ifstream in(path);
	require(in.good(), ErrorKind::io, "cannot open truth sidecar " + path.string());
	std::map<std::string, std::string> kv;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		if (line.empty() || line.front() == '#')
			continue;
		const auto eq = line.find('=');
		require(eq != std::string::npos, ErrorKind::parameter,
			path.string() + ":" + std::to_string(lineno) + ": expected key=value");
		kv[line.substr(0, eq)] = line.substr(eq + 1);
	}
	auto get = [&](const std::string& key) -> const std::string& {
		const auto it = kv.find(key);
		require(it != kv.end(), ErrorKind::parameter, "truth sidecar lacks '" + key + "'");
		return it->second;
	};
	auto num = [&](const std::string& key) { return parse_double(get(key), key); };

	TruthRecord r;
	r.meta.format = parse_sample_format(get("format"));
	r.meta.sample_rate = num("sample_rate");
	r.meta.intermediate_freq = num("intermediate_freq");
	r.meta.t0 = num("t0");
	SynthParams& p = r.params;
	p.sample_rate = r.meta.sample_rate;
	p.intermediate_freq = r.meta.intermediate_freq;
	p.t0 = r.meta.t0;
	p.prn_id = static_cast<int>(parse_u64(get("prn_id"), "prn_id"));
	p.chip_rate = num("chip_rate");
	p.carrier_freq = num("carrier_freq");
	p.amplitude = num("amplitude");
	p.code_phase0 = num("code_phase0");
	p.doppler0 = num("doppler0");
	p.doppler_rate = num("doppler_rate");
	p.bit_phase0_ms = num("bit_phase0_ms");
	if (get("cn0_dbhz") == "none")
		p.cn0_dbhz.reset();
	else
		p.cn0_dbhz = num("cn0_dbhz");
	p.duration = num("duration");
	p.seed = parse_u64(get("seed"), "seed");
	p.signal_present = get("signal_present") == "1";
	p.data_bits = parse_bits(get("data_bits"));

	if (kv.count("epoch_count")) {
		r.epoch_seconds = num("epoch_seconds");
		const auto count = parse_u64(get("epoch_count"), "epoch_count");
		r.epochs.reserve(count);
		for (std::uint64_t k = 0; k < count; ++k) {
			SynthParams e = parse_epoch(get("epoch." + std::to_string(k)), p);
			e.duration = r.epoch_seconds;
			r.epochs.push_back(std::move(e));
		}
	}
	return r;
}

} // namespace leoacq
