#include "boltz/csv.hpp"

#include <charconv>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "boltz/error.hpp"

namespace boltz {

void ensure_directory(const std::string& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return (std::filesystem::path(dir) / name).string();
}

std::string format_double(double x) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
    if (!out_) throw ConfigError("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::invalid_argument("csv row width does not match header of " + path_);
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
    out_.flush();
}

void CsvWriter::row_cells(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("csv row width does not match header of " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(ss, cell, ',')) t.header.push_back(cell);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number '" + cell + "'");
            }
        }
        if (row.size() != t.header.size())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                              " columns");
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw ConfigError("'" + path + "' has no header row");
    return t;
}

}  // namespace boltz
