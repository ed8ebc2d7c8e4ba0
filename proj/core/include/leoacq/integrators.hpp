#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "leoacq/acq_core.hpp"

namespace leoacq {

enum class Strategy { coherent, noncoherent, pre_guess, differential, alternate_half_bit };

inline constexpr Strategy kAllStrategies[] = {
	Strategy::coherent, Strategy::noncoherent, Strategy::pre_guess,
	Strategy::differential, Strategy::alternate_half_bit,
};

std::string_view to_string(Strategy strategy) noexcept;
std::optional<Strategy> parse_strategy(std::string_view name) noexcept;

struct IntegrationSpec {
	Strategy strategy = Strategy::coherent;
	int unit_ms = 1;
	int total_ms = 1;

	std::size_t units() const noexcept { return static_cast<std::size_t>(total_ms / unit_ms); }
	/// Throws ErrorKind::parameter when the strategy cannot run at total_ms.
	void validate() const;
	bool operator==(const IntegrationSpec&) const = default;
};

/// Non-negative detection statistic per (bin, code-phase sample).
struct DetectionGrid {
	std::vector<double> values;
	std::size_t rows = 0;
	std::size_t cols = 0;
	std::size_t samples_per_chip = 1;
	FrequencyPlan plan;
	IntegrationSpec spec;

	double at(std::size_t i, std::size_t j) const noexcept { return values[i * cols + j]; }
	double& at(std::size_t i, std::size_t j) noexcept { return values[i * cols + j]; }
	std::span<const double> row(std::size_t i) const noexcept { return {values.data() + i * cols, cols}; }
};

// All integrators combine cell by cell in ascending unit order.

/// sum_m |S(m)|
DetectionGrid integrate_noncoherent(std::span<const CorrelationGrid> grids);

/// |sum_m S(m)|
DetectionGrid integrate_coherent(std::span<const CorrelationGrid> grids);

/// |sum_m sign(m) S(m)|, sign(1) = +1 and sign(m) = +1 iff
/// |acc + S(m)| > |acc - S(m)| for the running signed sum acc. Resolved
/// independently per cell.
DetectionGrid integrate_pre_guess(std::span<const CorrelationGrid> grids);

/// |sum_{m=2..M} conj(S(m-1)) S(m)|; needs M >= 2.
DetectionGrid integrate_differential(std::span<const CorrelationGrid> grids);

/// 10-unit blocks integrated coherently; odd and even blocks accumulated
/// non-coherently apart; cellwise maximum of the two. M must be a multiple
/// of 20.
DetectionGrid integrate_alternate_half_bit(std::span<const CorrelationGrid> grids);

/// Dispatch on spec.strategy; the grid count must equal spec.units().
DetectionGrid integrate(const IntegrationSpec& spec, std::span<const CorrelationGrid> grids);

} // namespace leoacq
