#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace battlife {

/// Time series produced by a simulation run, with enough metadata to
/// reproduce it. Serialized as `# key=value` lines, a header row, then one
/// row per sample, LF line endings throughout.
struct RunReport {
    std::vector<std::pair<std::string, std::string>> meta;

    struct Row {
        double t_min = 0;
        double sigma_mamin = 0;
        double metric = 0;
        double pct = 0;
    };
    std::vector<Row> rows;

    void set_meta(const std::string& key, const std::string& value);
    const std::string* find_meta(const std::string& key) const;
};

std::string report_to_csv(const RunReport& r);

/// Write via a temporary file in the same directory and rename into place,
/// so readers never observe a half-written file.
void write_text_atomic(const std::string& text, const std::string& path);

void write_report_csv(const RunReport& r, const std::string& path);

RunReport parse_report_csv(const std::string& text, const std::string& origin);
RunReport read_report_csv(const std::string& path);

} // namespace battlife
