#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include <fftw3.h>

namespace leoacq::detail {

struct FftwFree {
	void operator()(void* p) const noexcept { fftw_free(p); }
};

/// SIMD-aligned complex buffer owned through fftw_malloc.
class AlignedBuffer {
public:
	explicit AlignedBuffer(std::size_t n);

	std::complex<double>* data() noexcept { return ptr_.get(); }
	const std::complex<double>* data() const noexcept { return ptr_.get(); }
	std::size_t size() const noexcept { return size_; }
	std::span<std::complex<double>> span() noexcept { return {data(), size_}; }
	std::complex<double>& operator[](std::size_t i) noexcept { return ptr_.get()[i]; }
	const std::complex<double>& operator[](std::size_t i) const noexcept { return ptr_.get()[i]; }

private:
	std::unique_ptr<std::complex<double>, FftwFree> ptr_;
	std::size_t size_;
};

/// Unnormalized complex DFT of fixed length and direction. Planning is
/// serialized (FFTW's planner is not thread-safe); execute() may run
/// concurrently on distinct aligned buffers. FFTW_ESTIMATE keeps the chosen
/// algorithm, and so the rounding, identical from run to run.
class FftPlan {
public:
	enum class Direction { forward, backward };

	FftPlan(std::size_t n, Direction direction);
	~FftPlan();
	FftPlan(const FftPlan&) = delete;
	FftPlan& operator=(const FftPlan&) = delete;

	std::size_t size() const noexcept { return n_; }
	/// Out-of-place only: the plan was made for distinct buffers.
	void execute(const AlignedBuffer& in, AlignedBuffer& out) const;

private:
	std::size_t n_;
	fftw_plan plan_ = nullptr;
};

/// Smallest 2^a 3^b 5^c that is >= n; FFTW is fastest on such lengths.
std::size_t smooth_length(std::size_t n);

} // namespace leoacq::detail
