#pragma once
// CSV emission and re-ingestion. Files carry a '#'-prefixed header block with
// free-form comment lines plus one "# columns: a,b,c" line; data rows are
// comma-separated doubles printed with %.17g so a rerun under the same seed
// reproduces byte-identical files.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "thermo/errors.hpp"

namespace thermo {

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), out_(path) {
        if (!out_) throw ValidationError("cannot open for writing: " + path);
    }

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void columns(const std::vector<std::string>& names) {
        out_ << "# columns:";
        for (std::size_t i = 0; i < names.size(); ++i)
            out_ << (i == 0 ? " " : ",") << names[i];
        out_ << "\n";
        width_ = names.size();
    }

    void row(const std::vector<double>& values) {
        if (width_ > 0 && values.size() != width_)
            throw ValidationError(path_ + ": row width differs from declared columns");
        std::string line;
        char buf[32];
        for (std::size_t i = 0; i < values.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", values[i]);
            if (i) line += ',';
            line += buf;
        }
        out_ << line << "\n";
    }

    // Flush and close so the file can be hashed while the writer is in scope.
    void close() { out_.close(); }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t width_ = 0;
};

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw ValidationError("csv column not found: " + name);
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open csv: " + path);
    CsvTable t;
    std::string line;
    int lineno = 0;
    const std::string columns_tag = "# columns:";
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (line.rfind(columns_tag, 0) == 0) {
                std::stringstream ss(line.substr(columns_tag.size()));
                std::string name;
                while (std::getline(ss, name, ',')) {
                    while (!name.empty() && name.front() == ' ') name.erase(name.begin());
                    if (!name.empty()) t.columns.push_back(name);
                }
            } else {
                t.comments.push_back(line);
            }
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw ValidationError(path + ":" + std::to_string(lineno) +
                                      ": non-numeric field: " + field);
            }
        }
        if (!t.columns.empty() && row.size() != t.columns.size())
            throw ValidationError(path + ":" + std::to_string(lineno) + ": row has " +
                                  std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(t.columns.size()));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace thermo
