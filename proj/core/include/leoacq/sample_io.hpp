#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "leoacq/constants.hpp"
#include "leoacq/signal_synth.hpp"

namespace leoacq {

enum class SampleFormat { int8_real, int16_real, float32_real, int8_iq, int16_iq, float32_iq };

/// Tags as used on the command line: int8-real, int16-iq, ...
std::string_view to_string(SampleFormat format) noexcept;
/// Throws ErrorKind::unknown_format.
SampleFormat parse_sample_format(std::string_view tag);

bool is_iq(SampleFormat format) noexcept;
/// Bytes per sample, counting both components of an iq sample.
std::size_t sample_bytes(SampleFormat format) noexcept;

/// All binary formats are little-endian.
struct SampleFileMeta {
	double sample_rate = kDefaultSampleRate;
	double intermediate_freq = kDefaultIntermediateFreq;
	SampleFormat format = SampleFormat::float32_real;
	double t0 = 0.0;
};

/// Samples in the file, after checking its length is whole samples.
std::size_t sample_count(const std::filesystem::path& path, const SampleFileMeta& meta);

/// Reads `count` samples starting at sample `offset`. Integer formats are
/// divided by 128 or 32768, so the most negative code maps to -1 exactly.
/// t0 of the result is meta.t0 + offset / sample_rate.
SampledSignal read_samples(const std::filesystem::path& path, const SampleFileMeta& meta,
	std::size_t offset, std::size_t count);

/// The whole file.
SampledSignal read_samples(const std::filesystem::path& path, const SampleFileMeta& meta);

/// Writes the signal in meta.format and returns how many values were clipped
/// to the integer range. Real signals written as iq get a zero Q channel; iq
/// signals cannot be written to a real format.
std::size_t write_samples(const SampledSignal& signal, const std::filesystem::path& path,
	const SampleFileMeta& meta);

/// Appends the encoded samples to a binary stream; same rules as above.
std::size_t write_samples(const SampledSignal& signal, std::ostream& out, SampleFormat format);

/// Contents of a `<name>.truth` sidecar: key=value lines for the file
/// metadata, the synthesis parameters and optional per-epoch truth.
struct TruthRecord {
	SampleFileMeta meta;
	SynthParams params;
	/// Per-epoch synthesis parameters for pass recordings, epochs laid end
	/// to end in the file. Empty for a single-stream recording.
	std::vector<SynthParams> epochs;
	double epoch_seconds = 0.0;  // samples per epoch / sample_rate, pass recordings only
};

std::filesystem::path truth_path(const std::filesystem::path& sample_file);
void write_truth(const std::filesystem::path& path, const TruthRecord& record);
TruthRecord read_truth(const std::filesystem::path& path);

} // namespace leoacq
