#include "spdiff/table.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace spdiff {

std::string Table::num(double v) {
    // shortest representation that round-trips a double; '.' decimal point
    // guaranteed by the C locale of snprintf in this process
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error("Table::add_row: cell count does not match header");
    rows.push_back(std::move(cells));
}

namespace {
std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}
} // namespace

std::string Table::to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cells[i]);
        }
        out += "\r\n";
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
}

void write_outputs(const RunResult& r, const std::string& out_dir,
                   const std::string& name) {
    std::filesystem::create_directories(out_dir);
    const auto csv_path = std::filesystem::path(out_dir) / (name + ".csv");
    const auto meta_path = std::filesystem::path(out_dir) / (name + ".meta.json");
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + csv_path.string());
        f << r.table.to_csv();
    }
    {
        std::ofstream f(meta_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + meta_path.string());
        f << r.metadata.dump(2) << "\n";
    }
}

} // namespace spdiff
