#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace svwe {

// CSV emission with a provenance header: every file begins with '#' comment
// lines carrying the fully resolved config, its hash, and the seed, so any
// result file can be regenerated from its own header. No timestamps, so
// rerunning an identical config writes byte-identical files.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header_comments,
              const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);

  private:
    std::ofstream out_;
};

// FNV-1a over the canonical config string.
std::uint64_t config_hash(const std::string& canonical);

std::string format_double(double v);

}  // namespace svwe
