#pragma once

// Numeric CSV tables: header row, '.' decimal separator, every value
// written with 17 significant digits so doubles round-trip exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pathctl/errors.hpp"

namespace pathctl::experiments {

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row)
    {
        if (row.size() != header.size()) {
            throw InvalidArgument("CSV row has " + std::to_string(row.size()) + " values, header has "
                                  + std::to_string(header.size()));
        }
        rows.push_back(std::move(row));
    }

    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw InvalidArgument("no CSV column named '" + name + "'");
    }

    std::vector<double> values(const std::string& name) const
    {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string to_csv_string(const CsvTable& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += t.header[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << text;
    if (!out) {
        throw IoError("write to " + path + " failed");
    }
}

inline void write_csv(const std::string& path, const CsvTable& t) { write_text_file(path, to_csv_string(t)); }

/// Row numbers in errors count the header as row 1.
inline CsvTable parse_csv(const std::string& text)
{
    CsvTable t;
    std::stringstream ss(text);
    std::string line;
    std::size_t row = 0;
    while (std::getline(ss, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row == 1) {
            std::stringstream hs(line);
            std::string name;
            while (std::getline(hs, name, ',')) t.header.push_back(name);
            if (t.header.empty() || line.empty()) throw IoError("row 1: missing CSV header");
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> values;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cell.size()) {
                throw IoError("row " + std::to_string(row) + ": '" + cell + "' is not a number");
            }
            values.push_back(v);
        }
        if (values.size() != t.header.size()) {
            throw IoError("row " + std::to_string(row) + ": expected " + std::to_string(t.header.size())
                          + " fields, found " + std::to_string(values.size()));
        }
        t.rows.push_back(std::move(values));
    }
    if (row == 0) throw IoError("row 1: empty CSV");
    return t;
}

inline CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

}  // namespace pathctl::experiments
