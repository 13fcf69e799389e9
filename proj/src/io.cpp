#include "svwe/io.hpp"

#include <cstdio>

#include "svwe/errors.hpp"

namespace svwe {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header_comments,
                     const std::vector<std::string>& columns)
    : out_(path) {
    if (!out_) throw Error("cannot open output file " + path);
    for (const std::string& c : header_comments) out_ << "# " << c << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 == columns.size() ? "\n" : ",");
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format_double(values[i]) << (i + 1 == values.size() ? "\n" : ",");
}

void CsvWriter::raw_row(const std::string& line) { out_ << line << "\n"; }

std::uint64_t config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace svwe
