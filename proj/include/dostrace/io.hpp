#pragma once

#include <string>
#include <vector>

#include "dostrace/config.hpp"

namespace dostrace::io {

// CSV with a provenance comment header; numeric cells use %.17g so equal
// values always serialize to identical bytes.
class CsvWriter {
  public:
    CsvWriter(std::vector<std::string> columns, const config::Config& cfg);
    void add_row(const std::vector<double>& numeric);
    void add_row(const std::vector<std::string>& cells);
    void write(const std::string& path) const;
    std::string str() const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::string header_comment_;
};

std::string format_double(double v);

// Output directory: DOSTRACE_OUT env overrides the configured/default one;
// created if missing.
std::string resolve_output_dir(const config::Config& cfg);

void write_text_file(const std::string& path, const std::string& content);

// One-value-per-line or CSV with a "mu" column.
std::vector<double> read_sequence_file(const std::string& path);

}  // namespace dostrace::io
