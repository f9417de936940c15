#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "photonsurf/errors.hpp"

namespace photonsurf::io {

/// Fixed 17-significant-digit text, which round-trips every double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
        append_row_text(header);
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_) throw Error(ErrorCode::InvalidArgument, "csv row width mismatch");
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_double(v));
        append_row_text(cells);
        ++rows_;
    }

    std::size_t rows() const { return rows_; }
    const std::string& text() const { return text_; }

    void save(const std::filesystem::path& path) const { write_file(path, text_); }

    static void write_file(const std::filesystem::path& path, const std::string& content) {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
        out << content;
    }

private:
    void append_row_text(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

}  // namespace photonsurf::io
