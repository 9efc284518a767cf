#include "narrative/csv.hpp"

#include <fstream>
#include <sstream>

#include "narrative/error.hpp"

namespace narrative::csv {

std::vector<Row> parse(std::string_view content) {
    if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

    std::vector<Row> rows;
    Row row;
    std::string field;
    std::size_t line = 1;
    row.line = 1;
    bool in_quotes = false;
    bool after_quote = false;  // just closed a quoted field
    bool row_started = false;

    auto end_field = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row = Row{};
        row_started = false;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                    after_quote = true;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (!row_started) {
            row.line = line;
            row_started = true;
        }
        if (c == ',') {
            end_field();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
            end_row();
            ++line;
        } else if (c == '"' && field.empty() && !after_quote) {
            in_quotes = true;
        } else if (after_quote) {
            throw InputError("csv line " + std::to_string(line) + ": unexpected character after closing quote");
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw InputError("csv line " + std::to_string(row.line) + ": unterminated quoted field");
    }
    if (row_started) end_row();
    return rows;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<Row> read_file(const std::string& path) {
    return parse(slurp(path));
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void Writer::write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(fields[i]);
    }
    out_ << '\n';
}

}  // namespace narrative::csv
