#include "leoacq/error.hpp"

namespace leoacq {

std::string_view to_string(ErrorKind kind) noexcept {
	switch (kind) {
	case ErrorKind::parameter: return "parameter error";
	case ErrorKind::unknown_prn: return "unknown PRN";
	case ErrorKind::unit_length: return "unit length";
	case ErrorKind::no_visibility: return "no visibility";
	case ErrorKind::shape_mismatch: return "shape mismatch";
	case ErrorKind::insufficient_units: return "insufficient units";
	case ErrorKind::truncated_file: return "truncated file";
	case ErrorKind::unknown_format: return "unknown format";
	case ErrorKind::out_of_range: return "out-of-range read";
	case ErrorKind::io: return "i/o error";
	}
	return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
	: std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) {
	throw Error(kind, what);
}

} // namespace leoacq
