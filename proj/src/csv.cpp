#include "sgmix/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sgmix/errors.hpp"

namespace sgmix {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == name) return static_cast<int>(j);
    }
    return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_line(line);
        if (lineno == 1) {
            table.header = fields;
            // A numeric first row means the required header is missing.
            double tmp;
            auto r = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), tmp);
            if (r.ec == std::errc() && r.ptr == fields[0].data() + fields[0].size()) {
                throw DataError(path + ":1: header row required");
            }
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(table.header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        std::vector<double> row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const std::string& f = fields[j];
            auto res = std::from_chars(f.data(), f.data() + f.size(), row[j]);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": cannot parse number '" + f + "'");
            }
        }
        table.data.push_back(std::move(row));
    }
    if (table.header.empty()) throw DataError(path + ": empty file");
    return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out << ',';
        out << header[j];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << format_double(row[j]);
        }
        out << '\n';
    }
}

void write_pgm16(const std::string& path, std::span<const double> image, int width,
                 int height, double vmax) {
    if (!(vmax > 0.0)) throw ParameterError("write_pgm16: vmax must be positive");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << "P5\n" << width << " " << height << "\n65535\n";
    for (double v : image) {
        double t = std::clamp(v / vmax, 0.0, 1.0);
        auto word = static_cast<std::uint16_t>(std::lround(t * 65535.0));
        unsigned char hi = static_cast<unsigned char>(word >> 8);
        unsigned char lo = static_cast<unsigned char>(word & 0xff);
        out.put(static_cast<char>(hi));
        out.put(static_cast<char>(lo));
    }
}

void write_matrix_csv(const std::string& path, std::span<const double> image, int width,
                      int height) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            if (j) out << ',';
            out << format_double(image[static_cast<std::size_t>(i) * width + j]);
        }
        out << '\n';
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

}  // namespace sgmix
