#include "dostrace/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dostrace/version.hpp"

namespace dostrace::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns, const config::Config& cfg)
    : columns_(std::move(columns)) {
    header_comment_ = "# dostrace v" + std::string(kVersion) +
                      " config=" + cfg.hash_hex();
}

void CsvWriter::add_row(const std::vector<double>& numeric) {
    std::vector<std::string> cells;
    cells.reserve(numeric.size());
    for (double v : numeric) cells.push_back(format_double(v));
    rows_.push_back(std::move(cells));
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    rows_.push_back(cells);
}

std::string CsvWriter::str() const {
    std::ostringstream out;
    out << header_comment_ << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "," : "") << columns_[i];
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

void CsvWriter::write(const std::string& path) const {
    write_text_file(path, str());
}

std::string resolve_output_dir(const config::Config& cfg) {
    std::string dir;
    if (const char* env = std::getenv("DOSTRACE_OUT"))
        dir = env;
    else
        dir = cfg.get_string("out.dir", "out");
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::vector<double> read_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sequence file: " + path);
    std::vector<double> out;
    std::string line;
    int mu_col = -1;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            first = false;
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i] == "mu") mu_col = static_cast<int>(i);
            if (mu_col >= 0) continue;  // header row
        }
        if (cells.empty()) continue;
        const std::string& v = mu_col >= 0 && mu_col < static_cast<int>(cells.size())
                                   ? cells[mu_col]
                                   : cells[0];
        try {
            out.push_back(std::stod(v));
        } catch (...) {
            throw std::runtime_error("sequence file: bad value '" + v + "'");
        }
    }
    return out;
}

}  // namespace dostrace::io
