#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lppn::io {

//! 12 significant digits, independent of the locale.
std::string format_number(double x);

/// One CSV cell, already rendered.
struct Cell {
    Cell(double x) : text(format_number(x)) {}
    Cell(std::int64_t x) : text(std::to_string(x)) {}
    Cell(int x) : text(std::to_string(x)) {}
    Cell(std::uint64_t x) : text(std::to_string(x)) {}
    Cell(bool x) : text(x ? "1" : "0") {}
    Cell(std::string s) : text(std::move(s)) {}
    Cell(const char* s) : text(s) {}

    std::string text;
};

class CsvTable {
public:
    CsvTable(std::string name, std::vector<std::string> header);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }

    //! Throws std::invalid_argument when the cell count differs from the header.
    void add_row(std::vector<Cell> cells);

    std::string render() const;

private:
    std::string name_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

//! Writes to a temporary sibling and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

//! UTC, ISO 8601 with seconds.
std::string utc_timestamp();

}  // namespace lppn::io
