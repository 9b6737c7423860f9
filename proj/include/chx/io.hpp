#pragma once

#include "chx/grid.hpp"

#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace chx::io {

// fixed shortest-round-trip decimal formatting, '.' decimal separator
std::string num(double v);

// base.f64: little-endian float64 samples, row-major (last axis fastest);
// base.meta: text sidecar with d, n and the semantic name
void dump_field(const Field& f, const std::string& base, const std::string& name);
Field load_field(const std::string& base, std::string* name = nullptr);

// CSV with a header row, comma separators, LF line endings
class Csv {
  public:
    Csv(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
    std::size_t width_;
};

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace chx::io
