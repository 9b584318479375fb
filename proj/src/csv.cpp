#include "yieldcast/csv.hpp"

#include "yieldcast/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace yieldcast::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    return out;
}

}  // namespace

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto piece = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        out.emplace_back(trim(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<Row> read(std::string_view text, const std::vector<std::string>& expected_header) {
    std::vector<Row> rows;
    bool header_seen = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        auto fields = split(line);
        if (!header_seen) {
            if (fields != expected_header) {
                fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected header '" +
                                                  join(expected_header) + "', got '" + std::string(line) + "'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != expected_header.size()) {
            fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(expected_header.size()) + " fields, got " +
                                              std::to_string(fields.size()));
        }
        rows.push_back(Row{line_no, std::move(fields)});
    }
    if (!header_seen) {
        fail(ErrorCode::MalformedRow, "missing header row '" + join(expected_header) + "'");
    }
    return rows;
}

double parse_double(const std::string& field, std::size_t line) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (field.empty() || end != begin + field.size() || !std::isfinite(v)) {
        fail(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": not a finite number: '" + field + "'");
    }
    return v;
}

int parse_int(const std::string& field, std::size_t line) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        fail(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": not an integer: '" + field + "'");
    }
    return v;
}

std::string format_number(double value, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

double quantize(double value, int significant_digits) {
    return std::strtod(format_number(value, significant_digits).c_str(), nullptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InputMissing, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::InputMissing, "cannot write '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

}  // namespace yieldcast::csv
