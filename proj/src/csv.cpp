#include "cyclocopula/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cyclocopula/error.hpp"

namespace cyclocopula {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

} // namespace

CsvTable::CsvTable(std::vector<std::string> header, std::vector<std::vector<double>> columns)
    : header_(std::move(header)), columns_(std::move(columns)) {
    if (header_.size() != columns_.size()) {
        throw DataError("csv: header and column count differ");
    }
}

bool CsvTable::has_column(const std::string& name) const {
    for (const auto& h : header_) {
        if (h == name) {
            return true;
        }
    }
    return false;
}

std::span<const double> CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) {
            return columns_[i];
        }
    }
    throw DataError("csv: missing column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("csv: empty input, header row required");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    auto header = split(line);
    std::vector<std::vector<double>> columns(header.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw DataError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(cells.size()));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double value = 0.0;
            const auto* begin = cells[i].data();
            const auto* end = begin + cells[i].size();
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc{} || ptr != end || cells[i].empty()) {
                throw DataError("csv line " + std::to_string(line_no) + ": cannot parse '" + cells[i] +
                                "' in column '" + header[i] + "'");
            }
            columns[i].push_back(value);
        }
    }
    return CsvTable(std::move(header), std::move(columns));
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    return read_csv(in);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns) {
    if (header.size() != columns.size()) {
        throw UsageError("write_csv: header and column count differ");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out << (i ? "," : "") << format_double(columns[i][r]);
        }
        out << '\n';
    }
}

} // namespace cyclocopula
