#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace hrlnav::io {

/// Shortest round-trippable decimal form of a double (via to_chars), so
/// repeated runs produce byte-identical files. Integral values print
/// without an exponent or trailing zeros.
std::string csv_number(double v);

/// Parse one CSV line into fields (no quoting; the writers never emit
/// commas inside fields).
std::vector<std::string> split_csv_line(const std::string& line);

/// Append-only CSV writer that emits the header once.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header);
    void write_row(const std::vector<std::string>& fields);
    void flush();

private:
    std::ofstream out_;
    size_t n_fields_;
};

/// Fully parsed CSV: header plus rows of raw strings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws IoError when absent.
    size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// Numeric view of one column; empty fields map to nullopt.
std::vector<std::optional<double>> numeric_column(const CsvTable& table, const std::string& name);

}  // namespace hrlnav::io
