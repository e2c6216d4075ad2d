#include "hrlnav/csvio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hrlnav/errors.hpp"

namespace hrlnav::io {

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    // to_chars with no precision argument gives the shortest string that
    // round-trips, and is locale-independent.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header) {
    out_.open(path, std::ios::out | std::ios::trunc);
    if (!out_) throw IoError("cannot open for writing: " + path);
    out_ << header << "\n";
    n_fields_ = split_csv_line(header).size();
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    if (fields.size() != n_fields_)
        throw IoError("csv row has " + std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(n_fields_));
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << "\n";
    if (!out_) throw IoError("csv write failed");
}

void CsvWriter::flush() { out_.flush(); }

size_t CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw IoError("csv column not found: " + name);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) break;
        auto fields = split_csv_line(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != table.header.size())
                throw IoError("csv row width mismatch in " + path);
            table.rows.push_back(std::move(fields));
        }
    }
    if (first) throw IoError("csv file is empty: " + path);
    return table;
}

std::vector<std::optional<double>> numeric_column(const CsvTable& table, const std::string& name) {
    size_t col = table.column(name);
    std::vector<std::optional<double>> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const std::string& s = row[col];
        if (s.empty()) {
            out.push_back(std::nullopt);
            continue;
        }
        double v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw IoError("csv field is not numeric: '" + s + "' in column " + name);
        out.push_back(v);
    }
    return out;
}

}  // namespace hrlnav::io
