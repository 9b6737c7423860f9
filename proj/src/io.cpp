#include "chx/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <map>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

namespace chx::io {

std::string num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void dump_field(const Field& f, const std::string& base, const std::string& name) {
    std::ofstream bin(base + ".f64", std::ios::binary | std::ios::trunc);
    if (!bin) throw std::runtime_error("dump_field: cannot open " + base + ".f64");
    bin.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!bin) throw std::runtime_error("dump_field: write failed for " + base + ".f64");

    std::ofstream meta(base + ".meta", std::ios::trunc);
    if (!meta) throw std::runtime_error("dump_field: cannot open " + base + ".meta");
    meta << "d " << f.grid.d << "\n"
         << "n " << f.grid.n << "\n"
         << "name " << name << "\n";
}

Field load_field(const std::string& base, std::string* name) {
    std::ifstream meta(base + ".meta");
    if (!meta) throw std::runtime_error("load_field: cannot open " + base + ".meta");
    std::map<std::string, std::string> kv;
    std::string key, rest;
    while (meta >> key) {
        std::getline(meta, rest);
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        kv[key] = rest;
    }
    if (!kv.count("d") || !kv.count("n")) throw std::runtime_error("load_field: sidecar missing d or n");
    const TorusGrid g(std::stoi(kv["d"]), std::stoi(kv["n"]));
    if (name) *name = kv.count("name") ? kv["name"] : "";

    std::ifstream bin(base + ".f64", std::ios::binary);
    if (!bin) throw std::runtime_error("load_field: cannot open " + base + ".f64");
    std::vector<double> values(g.points());
    bin.read(reinterpret_cast<char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (bin.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double)))
        throw std::runtime_error("load_field: short read in " + base + ".f64");
    return field_from_values(g, std::move(values));
}

Csv::Csv(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), width_(header.size()) {
    if (!out_) throw std::runtime_error("Csv: cannot open " + path);
    row(header);
}

void Csv::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::invalid_argument("Csv: wrong cell count");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

}  // namespace chx::io
