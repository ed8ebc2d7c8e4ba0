#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace leoacq {

/// Decimal-point rendering independent of the global locale, 12 significant
/// digits. Non-finite values render as inf/-inf/nan.
std::string format_number(double value);

/// Minimal comma-separated writer: header row on construction, '\n' endings.
class CsvWriter {
public:
	CsvWriter(std::ostream& out, std::string_view header);

	CsvWriter& field(double value);
	CsvWriter& field(std::int64_t value);
	CsvWriter& field(std::size_t value) { return field(static_cast<std::int64_t>(value)); }
	CsvWriter& field(int value) { return field(static_cast<std::int64_t>(value)); }
	CsvWriter& field(bool value) { return field(static_cast<std::int64_t>(value ? 1 : 0)); }
	CsvWriter& field(std::string_view value);
	CsvWriter& field(const char* value) { return field(std::string_view(value)); }
	void end_row();

private:
	void separator();

	std::ostream& out_;
	bool row_started_ = false;
};

} // namespace leoacq
