#pragma once

#include <cmath>
#include <complex>

namespace leoacq::detail {

// Plain complex arithmetic. The std::complex operators go through the
// Annex G inf/nan recovery path, which costs several times the multiply
// itself in the inner loops; inputs here are always finite.

inline std::complex<double> mul(std::complex<double> a, std::complex<double> b) noexcept {
	return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

/// conj(a) * b
inline std::complex<double> conj_mul(std::complex<double> a, std::complex<double> b) noexcept {
	return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

/// |z| without hypot's overflow guard.
inline double magnitude(std::complex<double> z) noexcept {
	return std::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

inline double norm(std::complex<double> z) noexcept {
	return z.real() * z.real() + z.imag() * z.imag();
}

} // namespace leoacq::detail
