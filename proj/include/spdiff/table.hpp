#pragma once

// Result tables: RFC-4180 CSV emission ('.' decimal point, no locale
// dependence) plus a JSON metadata sidecar carrying the fully resolved
// config, engine versions and guard statuses. Re-running an experiment from
// its sidecar reproduces the CSV byte for byte.

#include "spdiff/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace spdiff {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // shortest round-trippable decimal representation
    static std::string num(double v);

    void add_row(std::vector<std::string> cells);
    std::string to_csv() const; // RFC-4180, CRLF line endings
};

struct RunResult {
    Table table;
    nlohmann::json metadata; // config + engine versions + guard statuses
    bool guards_ok = true;
};

// Write `<out_dir>/<name>.csv` and `<out_dir>/<name>.meta.json`.
void write_outputs(const RunResult& r, const std::string& out_dir,
                   const std::string& name);

} // namespace spdiff
