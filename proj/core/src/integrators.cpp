#include "leoacq/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "complex_math.hpp"
#include "leoacq/error.hpp"

namespace leoacq {

namespace {

constexpr std::size_t kBlockUnits = 10;

void check_grids(std::span<const CorrelationGrid> grids, std::size_t min_units) {
	require(grids.size() >= min_units, ErrorKind::insufficient_units,
		"needs at least " + std::to_string(min_units) + " unit grid(s), got "
			+ std::to_string(grids.size()));
	for (const auto& g : grids)
		require(g.same_shape(grids.front()), ErrorKind::shape_mismatch,
			"unit grids differ in plan or shape");
}

DetectionGrid empty_like(const CorrelationGrid& like, Strategy strategy, std::size_t units) {
	DetectionGrid out;
	out.rows = like.rows();
	out.cols = like.cols();
	out.samples_per_chip = like.samples_per_chip();
	out.plan = like.plan();
	out.spec = IntegrationSpec{strategy, 1, static_cast<int>(units)};
	out.values.assign(out.rows * out.cols, 0.0);
	return out;
}

} // namespace

std::string_view to_string(Strategy strategy) noexcept {
	switch (strategy) {
	case Strategy::coherent: return "coherent";
	case Strategy::noncoherent: return "noncoherent";
	case Strategy::pre_guess: return "pre_guess";
	case Strategy::differential: return "differential";
	case Strategy::alternate_half_bit: return "alternate_half_bit";
	}
	return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept {
	for (auto s : kAllStrategies)
		if (to_string(s) == name)
			return s;
	return std::nullopt;
}

void IntegrationSpec::validate() const {
	require(unit_ms == 1, ErrorKind::parameter, "processing units are fixed at 1 ms");
	require(total_ms >= 1, ErrorKind::parameter, "total integration must be at least 1 ms");
	require(total_ms % unit_ms == 0, ErrorKind::parameter,
		"total integration must be a multiple of the unit");
	if (strategy == Strategy::differential)
		require(total_ms >= 2, ErrorKind::parameter, "differential integration needs at least two units");
	if (strategy == Strategy::alternate_half_bit)
		require(total_ms % 20 == 0, ErrorKind::parameter,
			"alternate half-bit integration needs a multiple of 20 ms");
}

DetectionGrid integrate_noncoherent(std::span<const CorrelationGrid> grids) {
	check_grids(grids, 1);
	DetectionGrid out = empty_like(grids.front(), Strategy::noncoherent, grids.size());
	for (const auto& g : grids) {
		const auto v = g.values();
		for (std::size_t c = 0; c < v.size(); ++c)
			out.values[c] += detail::magnitude(v[c]);
	}
	return out;
}

DetectionGrid integrate_coherent(std::span<const CorrelationGrid> grids) {
	check_grids(grids, 1);
	DetectionGrid out = empty_like(grids.front(), Strategy::coherent, grids.size());
	if (grids.size() == 1) {
		const auto v = grids.front().values();
		for (std::size_t c = 0; c < v.size(); ++c)
			out.values[c] = detail::magnitude(v[c]);
		return out;
	}
	std::vector<std::complex<double>> acc(grids.front().values().begin(), grids.front().values().end());
	for (std::size_t m = 1; m < grids.size(); ++m) {
		const auto v = grids[m].values();
		for (std::size_t c = 0; c < v.size(); ++c)
			acc[c] += v[c];
	}
	for (std::size_t c = 0; c < acc.size(); ++c)
		out.values[c] = detail::magnitude(acc[c]);
	return out;
}

DetectionGrid integrate_pre_guess(std::span<const CorrelationGrid> grids) {
	check_grids(grids, 1);
	DetectionGrid out = empty_like(grids.front(), Strategy::pre_guess, grids.size());
	std::vector<std::complex<double>> acc(grids.front().values().begin(), grids.front().values().end());
	for (std::size_t m = 1; m < grids.size(); ++m) {
		const auto v = grids[m].values();
		for (std::size_t c = 0; c < v.size(); ++c) {
			const auto plus = acc[c] + v[c];
			const auto minus = acc[c] - v[c];
			acc[c] = detail::norm(plus) > detail::norm(minus) ? plus : minus;
		}
	}
	for (std::size_t c = 0; c < acc.size(); ++c)
		out.values[c] = detail::magnitude(acc[c]);
	return out;
}

DetectionGrid integrate_differential(std::span<const CorrelationGrid> grids) {
	check_grids(grids, 2);
	DetectionGrid out = empty_like(grids.front(), Strategy::differential, grids.size());
	const std::size_t cells = out.values.size();
	std::vector<std::complex<double>> acc(cells);
	for (std::size_t m = 1; m < grids.size(); ++m) {
		const auto prev = grids[m - 1].values();
		const auto cur = grids[m].values();
		for (std::size_t c = 0; c < cells; ++c)
			acc[c] += detail::conj_mul(prev[c], cur[c]);
	}
	for (std::size_t c = 0; c < cells; ++c)
		out.values[c] = detail::magnitude(acc[c]);
	return out;
}

DetectionGrid integrate_alternate_half_bit(std::span<const CorrelationGrid> grids) {
	check_grids(grids, 1);
	require(grids.size() % (2 * kBlockUnits) == 0, ErrorKind::parameter,
		"alternate half-bit integration needs a multiple of 20 units, got "
			+ std::to_string(grids.size()));
	DetectionGrid out = empty_like(grids.front(), Strategy::alternate_half_bit, grids.size());
	const std::size_t cells = out.values.size();

	// Blocks are numbered from 1, so block index 0 is "odd".
	std::vector<double> odd(cells, 0.0);
	std::vector<double> even(cells, 0.0);
	std::vector<std::complex<double>> block(cells);
	const std::size_t blocks = grids.size() / kBlockUnits;
	for (std::size_t b = 0; b < blocks; ++b) {
		std::fill(block.begin(), block.end(), std::complex<double>{});
		for (std::size_t u = 0; u < kBlockUnits; ++u) {
			const auto v = grids[b * kBlockUnits + u].values();
			for (std::size_t c = 0; c < cells; ++c)
				block[c] += v[c];
		}
		auto& branch = (b % 2 == 0) ? odd : even;
		for (std::size_t c = 0; c < cells; ++c)
			branch[c] += detail::magnitude(block[c]);
	}
	for (std::size_t c = 0; c < cells; ++c)
		out.values[c] = std::max(odd[c], even[c]);
	return out;
}

DetectionGrid integrate(const IntegrationSpec& spec, std::span<const CorrelationGrid> grids) {
	spec.validate();
	require(grids.size() == spec.units(), ErrorKind::insufficient_units,
		"spec needs " + std::to_string(spec.units()) + " unit grids, got "
			+ std::to_string(grids.size()));
	DetectionGrid out;
	switch (spec.strategy) {
	case Strategy::coherent: out = integrate_coherent(grids); break;
	case Strategy::noncoherent: out = integrate_noncoherent(grids); break;
	case Strategy::pre_guess: out = integrate_pre_guess(grids); break;
	case Strategy::differential: out = integrate_differential(grids); break;
	case Strategy::alternate_half_bit: out = integrate_alternate_half_bit(grids); break;
	}
	out.spec = spec;
	return out;
}

} // namespace leoacq
