#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cyclocopula {

/// Numeric CSV table: header row required, comma separated, '.' decimal point.
class CsvTable {
public:
    CsvTable(std::vector<std::string> header, std::vector<std::vector<double>> columns);

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }

    bool has_column(const std::string& name) const;
    /// Throws DataError naming the missing column.
    std::span<const double> column(const std::string& name) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> columns_;
};

/// Throws DataError on malformed input (ragged rows, non-numeric cells).
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

} // namespace cyclocopula
