#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace yieldcast::csv {

struct Row {
    std::size_t line = 0;  // 1-based line number in the source text
    std::vector<std::string> fields;
};

// Comma-delimited text with a mandatory header row. Blank lines are skipped;
// quoting is not supported. Throws MalformedRow if the header differs from
// `expected_header` or a row has the wrong number of fields.
std::vector<Row> read(std::string_view text, const std::vector<std::string>& expected_header);

std::vector<std::string> split(std::string_view line);

double parse_double(const std::string& field, std::size_t line);
int parse_int(const std::string& field, std::size_t line);

// Shortest "%.<digits>g" rendering; the dataset files use 6 significant digits.
std::string format_number(double value, int significant_digits = 6);

// Round-trip `value` through format_number so in-memory data matches what a
// reader of the written file would see.
double quantize(double value, int significant_digits = 6);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace yieldcast::csv
