#include "momnoise/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace momnoise {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Dataset::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("Dataset: row width does not match header");
    rows.push_back(std::move(row));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_csv(const Dataset& ds, std::ostream& out) {
    out << "# schema=" << ds.schema << "\n";
    for (size_t i = 0; i < ds.columns.size(); ++i)
        out << ds.columns[i] << (i + 1 < ds.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : ds.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
}

Dataset read_csv(std::istream& in) {
    Dataset ds;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# schema=", 0) == 0) {
            ds.schema = line.substr(9);
            continue;
        }
        if (line[0] == '#') continue;
        if (!have_header) {
            ds.columns = split_csv_line(line);
            have_header = true;
            continue;
        }
        auto row = split_csv_line(line);
        if (row.size() != ds.columns.size())
            throw std::runtime_error("read_csv: ragged row");
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

void write_jsonl(const Dataset& ds, std::ostream& out) {
    for (const auto& row : ds.rows) {
        nlohmann::ordered_json obj;
        obj["schema"] = ds.schema;
        for (size_t i = 0; i < ds.columns.size(); ++i) obj[ds.columns[i]] = row[i];
        out << obj.dump() << "\n";
    }
}

Dataset read_jsonl(std::istream& in) {
    Dataset ds;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto obj = nlohmann::ordered_json::parse(line);
        if (ds.columns.empty()) {
            for (const auto& [key, value] : obj.items())
                if (key != "schema") ds.columns.push_back(key);
            ds.schema = obj.value("schema", "");
        }
        std::vector<std::string> row;
        row.reserve(ds.columns.size());
        for (const auto& col : ds.columns) row.push_back(obj.at(col).get<std::string>());
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

void write_dataset_file(const Dataset& ds, const std::string& path, const std::string& format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    if (format == "csv")
        write_csv(ds, out);
    else if (format == "jsonl")
        write_jsonl(ds, out);
    else
        throw std::invalid_argument("unknown output format: " + format);
}

}  // namespace momnoise
