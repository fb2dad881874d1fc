#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace momnoise {

/// Shortest exact decimal form of a double (17 significant digits round-trip
/// bit-exactly through strtod).
std::string format_full(double v);

/// A flat table with a versioned schema tag. Cells are stored as the exact
/// strings that will be written, numbers preformatted with format_full.
struct Dataset {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

/// CSV: a `# schema=...` comment line, then a header row, then records.
void write_csv(const Dataset& ds, std::ostream& out);
Dataset read_csv(std::istream& in);

/// JSON lines: one object per record, each carrying the schema tag.
void write_jsonl(const Dataset& ds, std::ostream& out);
Dataset read_jsonl(std::istream& in);

void write_dataset_file(const Dataset& ds, const std::string& path, const std::string& format);

}  // namespace momnoise
