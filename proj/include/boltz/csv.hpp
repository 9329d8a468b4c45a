#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace boltz {

// Creates the directory (and parents) if needed; no-op for an empty path.
void ensure_directory(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& name);

// Comma-separated output with full double precision.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void comment(const std::string& text);
    void row(const std::vector<double>& values);
    // Mixed rows: preformatted cells.
    void row_cells(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t columns_;
};

std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int column(const std::string& name) const;  // -1 if absent
};

// Reads a numeric CSV with one header row; lines starting with '#' are skipped.
CsvTable read_csv(const std::string& path);

}  // namespace boltz
