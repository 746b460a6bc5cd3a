#include "mssal/data_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace mssal {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& cell, double& out) {
    std::string t = strip(cell);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

DataMatrix read_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    size_t ncol = 0;
    long data_row = 0;

    auto column_name = [&](size_t j) {
        return has_header ? "'" + names[j] + "'"
                          : std::to_string(j + 1);
    };

    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && rows.empty() && first) continue;
        auto cells = split_line(line);
        if (first) {
            ncol = cells.size();
            if (has_header) {
                for (auto& c : cells) names.push_back(strip(c));
                first = false;
                continue;
            }
            first = false;
        }
        ++data_row;
        if (cells.size() != ncol) {
            throw std::runtime_error(path + ": row " + std::to_string(data_row) +
                                     " has " + std::to_string(cells.size()) +
                                     " cells, expected " + std::to_string(ncol));
        }
        std::vector<double> vals(ncol);
        for (size_t j = 0; j < ncol; ++j) {
            if (!parse_double(cells[j], vals[j]) || !std::isfinite(vals[j])) {
                throw std::runtime_error(path + ": row " + std::to_string(data_row) +
                                         ", column " + column_name(j) +
                                         ": cannot parse '" + strip(cells[j]) + "'");
            }
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) {
        throw std::runtime_error(path + ": no data rows");
    }
    if (!has_header) {
        for (size_t j = 0; j < ncol; ++j) names.push_back("c" + std::to_string(j + 1));
    }

    DataMatrix out;
    out.column_names = std::move(names);
    out.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(ncol));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < ncol; ++j) {
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        }
    }
    return out;
}

void write_csv(const DataMatrix& data, const std::string& path) {
    if (path.empty()) throw std::runtime_error("write_csv: empty path");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (size_t j = 0; j < data.column_names.size(); ++j) {
        if (j) out << ',';
        out << data.column_names[j];
    }
    out << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index j = 0; j < data.p(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.values(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_labels(const VectorXi& labels, const std::string& path) {
    if (path.empty()) throw std::runtime_error("write_labels: empty path");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "label\n";
    for (Eigen::Index i = 0; i < labels.size(); ++i) out << labels[i] << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

VectorXi read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::vector<int> vals;
    long row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = strip(line);
        if (t.empty()) continue;
        ++row;
        int v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            if (row == 1) continue;  // header row
            throw std::runtime_error(path + ": row " + std::to_string(row) +
                                     ": cannot parse label '" + t + "'");
        }
        vals.push_back(v);
    }
    if (vals.empty()) throw std::runtime_error(path + ": no labels");
    VectorXi out(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
    return out;
}

}  // namespace mssal
