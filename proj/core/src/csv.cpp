#include "leoacq/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

namespace leoacq {

std::string format_number(double value) {
	if (std::isnan(value))
		return "nan";
	if (std::isinf(value))
		return value > 0 ? "inf" : "-inf";
	char buffer[64];
	auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
		std::chars_format::general, 12);
	if (result.ec != std::errc{})
		return "nan";
	return std::string(buffer, result.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view header) : out_(out) {
	out_ << header << '\n';
}

void CsvWriter::separator() {
	if (row_started_)
		out_ << ',';
	row_started_ = true;
}

CsvWriter& CsvWriter::field(double value) {
	separator();
	out_ << format_number(value);
	return *this;
}

CsvWriter& CsvWriter::field(std::int64_t value) {
	separator();
	out_ << value;
	return *this;
}

CsvWriter& CsvWriter::field(std::string_view value) {
	separator();
	out_ << value;
	return *this;
}

void CsvWriter::end_row() {
	out_ << '\n';
	row_started_ = false;
}

} // namespace leoacq
