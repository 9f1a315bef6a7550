#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evt/paired_sample.hpp"

namespace evt {

struct CsvOptions {
    char delimiter = ',';
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delimiter)) out.push_back(trim(field));
    if (!line.empty() && line.back() == delimiter) out.push_back("");
    return out;
}

inline double parse_number(const std::string& field, const std::string& path, long line_no,
                           const std::string& column) {
    std::size_t used = 0;
    double value = 0.0;
    bool ok = true;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        ok = false;
    }
    if (!ok || used != field.size())
        throw std::runtime_error(path + ": row " + std::to_string(line_no) + ", column '" + column +
                                 "': cannot parse '" + field + "' as a number");
    return value;
}

}  // namespace detail

// Loads a paired sample from a delimited text file. The header row must
// name the target column first (conventionally `x`) followed by one column
// per related variable. Rows with an empty target field are the extra
// observations of the related variables alone. Error messages cite the file
// line and column of the offending field.
inline PairedSample load_paired_csv(const std::string& path, const CsvOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    ++line_no;
    const std::vector<std::string> header = detail::split_line(line, options.delimiter);
    if (header.size() < 2)
        throw std::runtime_error(path + ": header must name the target column and at least one related column");
    const std::size_t width = header.size();

    std::vector<double> x;
    std::vector<std::vector<double>> y_rows;
    std::vector<std::vector<double>> extra_rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> fields = detail::split_line(line, options.delimiter);
        if (fields.size() != width)
            throw std::runtime_error(path + ": row " + std::to_string(line_no) + ": expected " +
                                     std::to_string(width) + " fields, found " +
                                     std::to_string(fields.size()));
        std::vector<double> related(width - 1);
        for (std::size_t c = 1; c < width; ++c)
            related[c - 1] = detail::parse_number(fields[c], path, line_no, header[c]);
        if (fields[0].empty()) {
            extra_rows.push_back(std::move(related));
        } else {
            x.push_back(detail::parse_number(fields[0], path, line_no, header[0]));
            y_rows.push_back(std::move(related));
        }
    }

    PairedSample sample;
    sample.x = std::move(x);
    sample.y = Matrix(sample.x.size(), width - 1);
    for (std::size_t r = 0; r < y_rows.size(); ++r)
        for (std::size_t c = 0; c + 1 < width; ++c) sample.y(r, c) = y_rows[r][c];
    sample.y_extra = Matrix(extra_rows.size(), width - 1);
    for (std::size_t r = 0; r < extra_rows.size(); ++r)
        for (std::size_t c = 0; c + 1 < width; ++c) sample.y_extra(r, c) = extra_rows[r][c];
    sample.validate();
    return sample;
}

// Appends extra related-variable rows from a second file. The file may
// either carry the same columns as the main file (with the target field
// left empty) or only the related columns.
inline void append_extra_csv(PairedSample& sample, const std::string& path,
                             const CsvOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open file");

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    ++line_no;
    const std::vector<std::string> header = detail::split_line(line, options.delimiter);
    const std::size_t related = static_cast<std::size_t>(sample.d() - 1);
    bool has_target_column;
    if (header.size() == related + 1)
        has_target_column = true;
    else if (header.size() == related)
        has_target_column = false;
    else
        throw std::runtime_error(path + ": expected " + std::to_string(related) + " related columns");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> fields = detail::split_line(line, options.delimiter);
        if (fields.size() != header.size())
            throw std::runtime_error(path + ": row " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, found " +
                                     std::to_string(fields.size()));
        const std::size_t first = has_target_column ? 1 : 0;
        if (has_target_column && !fields[0].empty())
            throw std::runtime_error(path + ": row " + std::to_string(line_no) +
                                     ": extra rows must leave the target field empty");
        std::vector<double> row(related);
        for (std::size_t c = 0; c < related; ++c)
            row[c] = detail::parse_number(fields[first + c], path, line_no, header[first + c]);
        rows.push_back(std::move(row));
    }

    Matrix merged(sample.y_extra.rows() + rows.size(), related);
    for (std::size_t r = 0; r < sample.y_extra.rows(); ++r)
        for (std::size_t c = 0; c < related; ++c) merged(r, c) = sample.y_extra(r, c);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < related; ++c) merged(sample.y_extra.rows() + r, c) = rows[r][c];
    sample.y_extra = std::move(merged);
    sample.validate();
}

// Writes a paired sample in the format load_paired_csv reads, with enough
// digits that a load/save cycle reproduces every value bit for bit.
inline void save_paired_csv(const std::string& path, const PairedSample& sample,
                            const CsvOptions& options = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out.precision(std::numeric_limits<double>::max_digits10);

    out << "x";
    for (int j = 2; j <= sample.d(); ++j) out << options.delimiter << "y" << j;
    out << "\n";
    for (std::size_t r = 0; r < sample.x.size(); ++r) {
        out << sample.x[r];
        for (std::size_t c = 0; c < sample.y.cols(); ++c) out << options.delimiter << sample.y(r, c);
        out << "\n";
    }
    for (std::size_t r = 0; r < sample.y_extra.rows(); ++r) {
        for (std::size_t c = 0; c < sample.y_extra.cols(); ++c)
            out << options.delimiter << sample.y_extra(r, c);
        out << "\n";
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

// Radiated seismic energy, in megajoules, of an event of magnitude M:
// E = 2 * 10^(1.5 (M - 1)).
inline double magnitude_to_energy(double magnitude) {
    return 2.0 * std::pow(10.0, 1.5 * (magnitude - 1.0));
}

}  // namespace evt
