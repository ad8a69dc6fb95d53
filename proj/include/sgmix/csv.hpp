#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sgmix {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> data;  // row-major

    std::size_t rows() const { return data.size(); }
    std::size_t columns() const { return header.size(); }
    double cell(std::size_t i, std::size_t j) const { return data[i][j]; }
    int column_index(const std::string& name) const;  // -1 if absent
};

// Numeric CSV with a required header row. Parse failures report the
// offending 1-based line number.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// 16-bit binary PGM (P5, maxval 65535), values scaled from [0, vmax].
void write_pgm16(const std::string& path, std::span<const double> image, int width,
                 int height, double vmax);

// Square image matrix as CSV without header (one row per image row).
void write_matrix_csv(const std::string& path, std::span<const double> image, int width,
                      int height);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sgmix
