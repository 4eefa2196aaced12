#pragma once

#include "../core/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace magnon::experiment {

using Cell = std::variant<std::string, double>;

/// Decimal with 12 significant digits; non-finite values print as nan/inf/-inf.
inline std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string quote_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

/// Comma-separated table with '#' metadata lines above the header.
class CsvTable {
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_metadata(std::string line) { metadata_.push_back(std::move(line)); }

    void add_row(std::vector<Cell> row)
    {
        if (row.size() != header_.size()) {
            throw DimensionMismatch("row has " + std::to_string(row.size()) + " cells, header has " +
                                    std::to_string(header_.size()));
        }
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& metadata() const noexcept { return metadata_; }
    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < header_.size(); ++i) {
            if (header_[i] == name) {
                return i;
            }
        }
        throw InputError("no column named " + name);
    }

    double number(std::size_t row, const std::string& name) const
    {
        const Cell& c = rows_.at(row).at(column(name));
        if (const double* d = std::get_if<double>(&c)) {
            return *d;
        }
        throw InputError("column " + name + " holds text");
    }

    std::string text(std::size_t row, const std::string& name) const
    {
        const Cell& c = rows_.at(row).at(column(name));
        if (const std::string* s = std::get_if<std::string>(&c)) {
            return *s;
        }
        return format_number(std::get<double>(c));
    }

    void write(std::ostream& os) const
    {
        for (const auto& m : metadata_) {
            os << "# " << m << '\n';
        }
        write_line(os, header_);
        for (const auto& row : rows_) {
            std::vector<std::string> cells;
            cells.reserve(row.size());
            for (const auto& c : row) {
                if (const double* d = std::get_if<double>(&c)) {
                    cells.push_back(format_number(*d));
                } else {
                    // text that would read back as a number keeps its quotes
                    const auto& s = std::get<std::string>(c);
                    const bool numeric = std::holds_alternative<double>(to_cell(s));
                    cells.push_back(numeric ? "\"" + s + "\"" : quote_field(s));
                }
            }
            write_raw_line(os, cells);
        }
    }

    std::string str() const
    {
        std::ostringstream os;
        write(os);
        return os.str();
    }

    /// Reads a table produced by write(). Unquoted cells that parse fully as numbers become doubles.
    static CsvTable parse(std::istream& is)
    {
        CsvTable t;
        std::string line;
        bool have_header = false;
        while (std::getline(is, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (!have_header && !line.empty() && line[0] == '#') {
                t.metadata_.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
                continue;
            }
            if (line.empty()) {
                continue;
            }
            auto fields = split_line(line);
            if (!have_header) {
                for (auto& f : fields) {
                    t.header_.push_back(std::move(f.text));
                }
                have_header = true;
                continue;
            }
            std::vector<Cell> row;
            for (auto& f : fields) {
                row.push_back(f.quoted ? Cell{f.text} : to_cell(f.text));
            }
            t.add_row(std::move(row));
        }
        return t;
    }

    static CsvTable parse(const std::string& text)
    {
        std::istringstream is(text);
        return parse(is);
    }

private:
    struct Field {
        std::string text;
        bool quoted = false;
    };

    static void write_line(std::ostream& os, const std::vector<std::string>& cells)
    {
        std::vector<std::string> quoted;
        for (const auto& c : cells) {
            quoted.push_back(quote_field(c));
        }
        write_raw_line(os, quoted);
    }

    static void write_raw_line(std::ostream& os, const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                os << ',';
            }
            os << cells[i];
        }
        os << '\n';
    }

    static std::vector<Field> split_line(const std::string& line)
    {
        std::vector<Field> out(1);
        bool in_quotes = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (in_quotes) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    out.back().text += '"';
                    ++i;
                } else if (c == '"') {
                    in_quotes = false;
                } else {
                    out.back().text += c;
                }
            } else if (c == '"') {
                in_quotes = true;
                out.back().quoted = true;
            } else if (c == ',') {
                out.emplace_back();
            } else {
                out.back().text += c;
            }
        }
        if (in_quotes) {
            throw InputError("unterminated quoted CSV field");
        }
        return out;
    }

    static Cell to_cell(const std::string& s)
    {
        if (s == "nan") {
            return std::nan("");
        }
        if (s == "inf" || s == "-inf") {
            return s[0] == '-' ? -HUGE_VAL : HUGE_VAL;
        }
        if (s.empty()) {
            return s;
        }
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() + s.size()) {
            return v;
        }
        return s;
    }

    std::vector<std::string> metadata_;
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

} // namespace magnon::experiment
