#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace narrative::csv {

struct Row {
    std::size_t line = 0;  // 1-based line where the row starts
    std::vector<std::string> fields;
};

/// RFC 4180 parser: quoted fields may hold commas, doubled quotes and line
/// breaks. Accepts LF or CRLF and skips a leading UTF-8 BOM. Throws
/// InputError on an unterminated quote or stray characters after a
/// closing quote.
std::vector<Row> parse(std::string_view content);

std::vector<Row> read_file(const std::string& path);

/// Reads a whole file; throws InputError if it cannot be opened.
std::string slurp(const std::string& path);

std::string escape(std::string_view field);

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void write_row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

}  // namespace narrative::csv
