#include "leoacq/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "leoacq/csv.hpp"
#include "leoacq/error.hpp"

namespace leoacq {

namespace {

// Cyclic distance between two code-phase samples.
std::size_t cyclic_distance(std::size_t a, std::size_t b, std::size_t n) {
	const std::size_t d = a > b ? a - b : b - a;
	return std::min(d, n - d);
}

double ratio(double num, double den) {
	if (den > 0.0)
		return num / den;
	return num > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

} // namespace

Peak peak(const DetectionGrid& grid) {
	require(grid.rows > 0 && grid.cols > 0 && grid.values.size() == grid.rows * grid.cols,
		ErrorKind::parameter, "detection grid is empty");
	Peak best{0, 0, grid.values.front()};
	for (std::size_t i = 0; i < grid.rows; ++i) {
		const auto row = grid.row(i);
		for (std::size_t j = 0; j < grid.cols; ++j) {
			if (row[j] > best.value)
				best = {i, j, row[j]};
		}
	}
	return best;
}

namespace {

double mtsmr_at(const DetectionGrid& grid, const Peak& p, std::size_t samples_per_chip) {
	require(grid.cols > 2 * samples_per_chip + 1, ErrorKind::parameter,
		"exclusion window covers the whole row");
	const auto row = grid.row(p.bin);
	double second = 0.0;
	for (std::size_t j = 0; j < grid.cols; ++j) {
		if (cyclic_distance(j, p.sample, grid.cols) <= samples_per_chip)
			continue;
		second = std::max(second, row[j]);
	}
	return ratio(p.value, second);
}

// Total minus the excluded rectangle, which is far cheaper than testing
// every cell against the window.
double mtmr_at(const DetectionGrid& grid, const Peak& p, std::size_t samples_per_chip, double total) {
	const std::size_t first_row = p.bin == 0 ? 0 : p.bin - 1;
	const std::size_t last_row = std::min(grid.rows - 1, p.bin + 1);
	const std::size_t width = std::min(grid.cols, 2 * samples_per_chip + 1);
	double excluded = 0.0;
	for (std::size_t i = first_row; i <= last_row; ++i) {
		const auto row = grid.row(i);
		for (std::size_t k = 0; k < width; ++k)
			excluded += row[(p.sample + grid.cols - samples_per_chip % grid.cols + k) % grid.cols];
	}
	const std::size_t count = grid.rows * grid.cols - (last_row - first_row + 1) * width;
	require(count > 0, ErrorKind::parameter, "mean exclusion leaves no cells");
	return ratio(p.value, std::max(0.0, total - excluded) / static_cast<double>(count));
}

} // namespace

double mtsmr(const DetectionGrid& grid, std::size_t samples_per_chip) {
	return mtsmr_at(grid, peak(grid), samples_per_chip);
}

double mtmr(const DetectionGrid& grid, std::size_t samples_per_chip) {
	double total = 0.0;
	for (double v : grid.values)
		total += v;
	return mtmr_at(grid, peak(grid), samples_per_chip, total);
}

bool decide(double indicator, double threshold) {
	require(threshold > 0.0, ErrorKind::parameter, "threshold must be positive");
	return indicator >= threshold;
}

AcqResult evaluate(const DetectionGrid& grid, double threshold, double t) {
	require(grid.rows > 0 && grid.cols > 0 && grid.values.size() == grid.rows * grid.cols,
		ErrorKind::parameter, "detection grid is empty");
	// One pass for the peak and the grid total.
	Peak p{0, 0, grid.values.front()};
	double total = 0.0;
	for (std::size_t i = 0; i < grid.rows; ++i) {
		const auto row = grid.row(i);
		for (std::size_t j = 0; j < grid.cols; ++j) {
			total += row[j];
			if (row[j] > p.value)
				p = {i, j, row[j]};
		}
	}
	AcqResult r;
	r.t = t;
	r.spec = grid.spec;
	r.doppler_hat = grid.plan.bins.at(p.bin);
	r.code_phase_hat = p.sample;
	r.mtsmr = mtsmr_at(grid, p, grid.samples_per_chip);
	r.mtmr = mtmr_at(grid, p, grid.samples_per_chip, total);
	r.threshold_used = threshold;
	r.decided = decide(r.mtsmr, threshold);
	r.bin_width = grid.plan.bin_width;
	r.samples_per_code = grid.cols;
	r.samples_per_chip = grid.samples_per_chip;
	return r;
}

void write_results_csv(std::ostream& out, std::span<const AcqResult> results) {
	CsvWriter csv(out, "t_s,strategy,total_ms,doppler_hz,code_phase_samples,mtsmr,mtmr,decided");
	for (const auto& r : results) {
		csv.field(r.t).field(to_string(r.spec.strategy)).field(r.spec.total_ms)
			.field(r.doppler_hat).field(r.code_phase_hat).field(r.mtsmr).field(r.mtmr)
			.field(r.decided);
		csv.end_row();
	}
}

} // namespace leoacq
