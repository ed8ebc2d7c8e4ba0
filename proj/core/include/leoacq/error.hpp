#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leoacq {

enum class ErrorKind {
	parameter,
	unknown_prn,
	unit_length,
	no_visibility,
	shape_mismatch,
	insufficient_units,
	truncated_file,
	unknown_format,
	out_of_range,
	io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
	Error(ErrorKind kind, const std::string& what);

	ErrorKind kind() const noexcept { return kind_; }

private:
	ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
	if (!condition)
		fail(kind, what);
}

} // namespace leoacq
