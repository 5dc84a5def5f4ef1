#include "battlife/report.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "battlife/errors.hpp"
#include "battlife/units.hpp"

namespace battlife {

namespace {

constexpr const char* kHeader = "t_min,sigma_mAmin,remaining_metric,remaining_pct";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r' && ch != ' ' && ch != '\t') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double_field(const std::string& s, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end == s.c_str() || *end != '\0') {
        throw ValidationError(where + ": expected number, got '" + s + "'");
    }
    return v;
}

} // namespace

void RunReport::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : meta) {
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    }
    meta.emplace_back(key, value);
}

const std::string* RunReport::find_meta(const std::string& key) const {
    for (const auto& kv : meta) {
        if (kv.first == key) return &kv.second;
    }
    return nullptr;
}

std::string report_to_csv(const RunReport& r) {
    std::string out;
    for (const auto& kv : r.meta) {
        out += "# ";
        out += kv.first;
        out += '=';
        out += kv.second;
        out += '\n';
    }
    out += kHeader;
    out += '\n';
    for (const auto& row : r.rows) {
        out += format_fixed(row.t_min, 4);
        out += ',';
        out += format_fixed(row.sigma_mamin, 4);
        out += ',';
        out += format_fixed(row.metric, 4);
        out += ',';
        out += format_fixed(row.pct, 4);
        out += '\n';
    }
    return out;
}

void write_text_atomic(const std::string& text, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ValidationError("cannot open '" + tmp + "' for writing");
        }
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw ValidationError("failed writing '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ValidationError("cannot move '" + tmp + "' to '" + path + "'");
    }
}

void write_report_csv(const RunReport& r, const std::string& path) {
    write_text_atomic(report_to_csv(r), path);
}

RunReport parse_report_csv(const std::string& text, const std::string& origin) {
    RunReport r;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string where = origin + ":" + std::to_string(line_no);
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        if (raw[0] == '#') {
            std::size_t start = raw.find_first_not_of(" \t", 1);
            if (start == std::string::npos) continue;
            std::size_t eq = raw.find('=', start);
            if (eq == std::string::npos) {
                throw ValidationError(where + ": metadata line without '='");
            }
            r.meta.emplace_back(raw.substr(start, eq - start),
                                raw.substr(eq + 1));
            continue;
        }
        if (!header_seen) {
            std::string stripped;
            for (char ch : raw) {
                if (ch != ' ' && ch != '\t') stripped.push_back(ch);
            }
            if (stripped != kHeader) {
                throw ValidationError(where + ": expected header '" +
                                      kHeader + "'");
            }
            header_seen = true;
            continue;
        }
        auto fields = split_fields(raw);
        if (fields.size() != 4) {
            throw ValidationError(where + ": expected 4 columns, got " +
                                  std::to_string(fields.size()));
        }
        RunReport::Row row;
        row.t_min = parse_double_field(fields[0], where);
        row.sigma_mamin = parse_double_field(fields[1], where);
        row.metric = parse_double_field(fields[2], where);
        row.pct = parse_double_field(fields[3], where);
        r.rows.push_back(row);
    }
    if (!header_seen) {
        throw ValidationError(origin + ": missing header '" +
                              std::string(kHeader) + "'");
    }
    return r;
}

RunReport read_report_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open report file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_report_csv(ss.str(), path);
}

} // namespace battlife
