#include "tmi/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace tmi {

namespace {

constexpr char kMagic[4] = {'T', 'M', 'I', 'F'};
constexpr std::uint8_t kBinaryVersion = 1;

std::string strip(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& token, Eigen::Index row, Eigen::Index col,
                    const std::string& path) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(path + ": cannot parse value '" + token + "' at row " +
                         std::to_string(row) + ", column " + std::to_string(col));
    }
    return value;
}

Matrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    Eigen::Index cols = -1;
    Eigen::Index row_index = 0;
    while (std::getline(in, line)) {
        const std::string trimmed = strip(line);
        if (trimmed.empty()) {
            ++row_index;
            continue;  // tolerate blank lines (usually a trailing newline)
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = trimmed.find(',', start);
            std::string token = strip(trimmed.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start));
            row.push_back(parse_double(token, row_index, static_cast<Eigen::Index>(row.size()),
                                       path));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError(path + ": row " + std::to_string(row_index) + " has " +
                             std::to_string(row.size()) + " values, expected " +
                             std::to_string(cols));
        }
        rows.push_back(std::move(row));
        ++row_index;
    }
    if (rows.empty()) {
        throw ParseError(path + ": file contains no data rows");
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

std::uint64_t read_u64_le(std::istream& in, const std::string& path, const char* what) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw ParseError(path + ": truncated while reading " + what);
    }
    std::uint64_t value = 0;
    for (int i = 7; i >= 0; --i) {
        value = (value << 8) | bytes[i];
    }
    return value;
}

void write_u64_le(std::ostream& out, std::uint64_t value) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<unsigned char>(value >> (8 * i));
    }
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

Matrix load_matrix_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw ParseError(path + ": bad magic bytes, expected \"TMIF\"");
    }
    char version = 0;
    if (!in.get(version) || static_cast<std::uint8_t>(version) != kBinaryVersion) {
        throw ParseError(path + ": unsupported format version " +
                         std::to_string(static_cast<int>(version)));
    }
    const std::uint64_t n = read_u64_le(in, path, "row count");
    const std::uint64_t d = read_u64_le(in, path, "column count");
    if (n == 0 || d == 0 || n > (1ull << 32) || d > (1ull << 32)) {
        throw ParseError(path + ": implausible dimensions " + std::to_string(n) + "x" +
                         std::to_string(d));
    }
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::uint64_t idx = 0; idx < n * d; ++idx) {
        const std::uint64_t bits = read_u64_le(in, path, "matrix values");
        m.data()[idx] = std::bit_cast<double>(bits);
    }
    return m;
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot open file for writing: " + path);
    }
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            // 17 significant digits: lossless round trip for IEEE doubles
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << buf;
            if (j + 1 < m.cols()) out << ',';
        }
        out << '\n';
    }
    if (!out) {
        throw ParseError("write failed: " + path);
    }
}

void save_matrix_binary(const Matrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot open file for writing: " + path);
    }
    out.write(kMagic, 4);
    out.put(static_cast<char>(kBinaryVersion));
    write_u64_le(out, static_cast<std::uint64_t>(m.rows()));
    write_u64_le(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index idx = 0; idx < m.size(); ++idx) {
        write_u64_le(out, std::bit_cast<std::uint64_t>(m.data()[idx]));
    }
    if (!out) {
        throw ParseError("write failed: " + path);
    }
}

Matrix load_matrix(const std::string& path, FileFormat format) {
    return format == FileFormat::csv ? load_matrix_csv(path) : load_matrix_binary(path);
}

}  // namespace

FileFormat parse_format(const std::string& name) {
    if (name == "csv") return FileFormat::csv;
    if (name == "binary") return FileFormat::binary;
    throw UsageError("unknown format '" + name + "', expected csv or binary");
}

std::string format_name(FileFormat format) {
    return format == FileFormat::csv ? "csv" : "binary";
}

FeatureMatrix load_features(const std::string& path, FileFormat format) {
    return FeatureMatrix(load_matrix(path, format));
}

void save_features(const FeatureMatrix& features, const std::string& path, FileFormat format) {
    if (format == FileFormat::csv) {
        save_matrix_csv(features.data(), path);
    } else {
        save_matrix_binary(features.data(), path);
    }
}

LabelVector load_labels(const std::string& path, std::optional<std::int32_t> num_classes) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    std::vector<std::int32_t> labels;
    std::string line;
    Eigen::Index row = 0;
    while (std::getline(in, line)) {
        const std::string token = strip(line);
        if (token.empty()) {
            ++row;
            continue;
        }
        std::int32_t value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            throw ParseError(path + ": cannot parse label '" + token + "' at line " +
                             std::to_string(row));
        }
        labels.push_back(value);
        ++row;
    }
    if (labels.empty()) {
        throw ParseError(path + ": file contains no labels");
    }
    if (num_classes.has_value()) {
        return LabelVector(std::move(labels), *num_classes);
    }
    return LabelVector::infer(std::move(labels));
}

void save_labels(const LabelVector& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot open file for writing: " + path);
    }
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        out << labels[i] << '\n';
    }
    if (!out) {
        throw ParseError("write failed: " + path);
    }
}

AccuracyVector load_accuracies(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    std::vector<std::string> ids;
    std::vector<double> values;
    std::string line;
    Eigen::Index row = 0;
    while (std::getline(in, line)) {
        const std::string trimmed = strip(line);
        if (trimmed.empty()) {
            ++row;
            continue;
        }
        const std::size_t comma = trimmed.rfind(',');
        if (comma == std::string::npos || comma == 0) {
            throw ParseError(path + ": expected 'model_id,accuracy' at line " +
                             std::to_string(row));
        }
        ids.push_back(strip(trimmed.substr(0, comma)));
        values.push_back(parse_double(strip(trimmed.substr(comma + 1)), row, 1, path));
        ++row;
    }
    if (ids.empty()) {
        throw ParseError(path + ": file contains no accuracies");
    }
    return AccuracyVector(std::move(ids), std::move(values));
}

SourcePredictionMatrix load_source_predictions(const std::string& path, FileFormat format) {
    return SourcePredictionMatrix(load_matrix(path, format));
}

}  // namespace tmi
