// File output helpers: CSV matrices and tables, binary PGM images, atomic
// writes (write-then-rename) and a small content digest for manifests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qms {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes `content` to a sibling temp file and renames it over `path`.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string csv_matrix(const std::vector<double>& data, std::size_t rows,
                              std::size_t cols) {
    if (data.size() != rows * cols) throw std::invalid_argument("csv_matrix: shape mismatch");
    std::ostringstream out;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c) out << ',';
            out << format_double(data[r * cols + c]);
        }
        out << '\n';
    }
    return out.str();
}

inline void write_csv_matrix(const std::filesystem::path& path, const std::vector<double>& data,
                             std::size_t rows, std::size_t cols) {
    atomic_write(path, csv_matrix(data, rows, cols));
}

struct CsvMatrix {
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

inline CsvMatrix read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    CsvMatrix m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t cols = 0;
        while (std::getline(row, cell, ',')) {
            m.data.push_back(std::stod(cell));
            ++cols;
        }
        if (m.rows == 0) m.cols = cols;
        else if (cols != m.cols) throw std::runtime_error("ragged CSV: " + path.string());
        ++m.rows;
    }
    return m;
}

/// 8-bit binary PGM with linear intensity scaling, max-normalized.
inline void write_pgm(const std::filesystem::path& path, const std::vector<double>& data,
                      std::size_t rows, std::size_t cols) {
    if (data.size() != rows * cols) throw std::invalid_argument("write_pgm: shape mismatch");
    const double peak = data.empty() ? 0.0 : *std::max_element(data.begin(), data.end());
    std::ostringstream out;
    out << "P5\n" << cols << ' ' << rows << "\n255\n";
    for (double v : data) {
        const int level =
            peak > 0.0 ? static_cast<int>(std::min(255.0, std::max(0.0, v / peak * 255.0)))
                       : 0;
        out.put(static_cast<char>(level));
    }
    atomic_write(path, out.str());
}

/// FNV-1a 64-bit digest of a file's bytes, hex-encoded; recorded in run
/// manifests so inputs can be checked for drift.
inline std::string fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for digest: " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char byte;
    while (in.get(byte)) {
        hash ^= static_cast<unsigned char>(byte);
        hash *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace qms
