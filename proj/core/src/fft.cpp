#include "fft.hpp"

#include <algorithm>
#include <mutex>
#include <new>

#include "leoacq/error.hpp"

namespace leoacq::detail {

namespace {

std::mutex& planner_mutex() {
	static std::mutex m;
	return m;
}

} // namespace

AlignedBuffer::AlignedBuffer(std::size_t n)
	: ptr_(reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n == 0 ? 1 : n))), size_(n) {
	if (!ptr_)
		throw std::bad_alloc();
}

std::size_t smooth_length(std::size_t n) {
	std::size_t best = 1;
	while (best < n)
		best *= 2;
	for (std::size_t p5 = 1; p5 < best; p5 *= 5)
		for (std::size_t p3 = p5; p3 < best; p3 *= 3) {
			std::size_t v = p3;
			while (v < n)
				v *= 2;
			best = std::min(best, v);
		}
	return best;
}

FftPlan::FftPlan(std::size_t n, Direction direction) : n_(n) {
	require(n > 0, ErrorKind::parameter, "FFT length must be positive");
	AlignedBuffer scratch_in(n);
	AlignedBuffer scratch_out(n);
	const int sign = direction == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
	std::lock_guard lock(planner_mutex());
	plan_ = fftw_plan_dft_1d(static_cast<int>(n),
		reinterpret_cast<fftw_complex*>(scratch_in.data()),
		reinterpret_cast<fftw_complex*>(scratch_out.data()), sign, FFTW_ESTIMATE);
	require(plan_ != nullptr, ErrorKind::parameter, "FFTW could not plan the transform");
}

FftPlan::~FftPlan() {
	if (plan_) {
		std::lock_guard lock(planner_mutex());
		fftw_destroy_plan(plan_);
	}
}

void FftPlan::execute(const AlignedBuffer& in, AlignedBuffer& out) const {
	fftw_execute_dft(plan_,
		reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
		reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace leoacq::detail
