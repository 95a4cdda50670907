#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "edi/error.hpp"
#include "edi/harness.hpp"

namespace edi {

namespace {

constexpr const char* kHeader = "n,w,psi_db_analytical,psi_db_empirical,snr_db,snr_ci95_db";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw InvalidInputError("report CSV: bad number '" + s + "'");
    return v;
}

std::size_t parse_size(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty() || s[0] == '-') throw InvalidInputError("report CSV: bad integer '" + s + "'");
    return static_cast<std::size_t>(v);
}

/// JSON has no representation for inf/NaN; encode them as strings.
nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    return fmt(v);
}

double num_from(const nlohmann::json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    return j.get<double>();
}

}  // namespace

void write_report_csv(std::ostream& out, const SweepReport& report) {
    out << kHeader << '\n';
    for (const auto& r : report.rows) {
        out << r.n << ',' << r.w << ',' << fmt(r.psi_db_analytical) << ',' << fmt(r.psi_db_empirical) << ','
            << fmt(r.snr_db) << ',' << fmt(r.snr_ci95_db) << '\n';
    }
}

SweepReport parse_report_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kHeader) throw InvalidInputError("report CSV: missing or wrong header");
    SweepReport rep;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 6) throw InvalidInputError("report CSV: expected 6 columns in '" + line + "'");
        SweepRow r;
        r.n = parse_size(f[0]);
        r.w = parse_size(f[1]);
        r.psi_db_analytical = parse_double(f[2]);
        r.psi_db_empirical = parse_double(f[3]);
        r.snr_db = parse_double(f[4]);
        r.snr_ci95_db = parse_double(f[5]);
        rep.rows.push_back(r);
    }
    return rep;
}

nlohmann::json report_to_json(const SweepReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"n", r.n},
                        {"w", r.w},
                        {"psi_db_analytical", num(r.psi_db_analytical)},
                        {"psi_db_empirical", num(r.psi_db_empirical)},
                        {"snr_db", num(r.snr_db)},
                        {"snr_ci95_db", num(r.snr_ci95_db)}});
    }
    return nlohmann::json{{"rows", rows},
                          {"r_p", num(report.r_p)},
                          {"w_star", report.w_star},
                          {"config_hash", report.config_hash},
                          {"seeds", report.seeds},
                          {"launch_power_dbm", num(report.launch_power_dbm)},
                          {"neighbor_loading", report.neighbor_loading}};
}

SweepReport report_from_json(const nlohmann::json& j) {
    try {
        SweepReport rep;
        for (const auto& r : j.at("rows")) {
            SweepRow row;
            row.n = r.at("n").get<std::size_t>();
            row.w = r.at("w").get<std::size_t>();
            row.psi_db_analytical = num_from(r.at("psi_db_analytical"));
            row.psi_db_empirical = num_from(r.at("psi_db_empirical"));
            row.snr_db = num_from(r.at("snr_db"));
            row.snr_ci95_db = num_from(r.at("snr_ci95_db"));
            rep.rows.push_back(row);
        }
        rep.r_p = num_from(j.at("r_p"));
        rep.w_star = j.at("w_star").get<std::size_t>();
        rep.config_hash = j.at("config_hash").get<std::string>();
        rep.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        rep.launch_power_dbm = num_from(j.at("launch_power_dbm"));
        rep.neighbor_loading = j.at("neighbor_loading").get<std::string>();
        return rep;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInputError(std::string("report JSON: ") + e.what());
    }
}

void emit_report(const SweepReport& report, ReportFormat format, const std::string& path) {
    if (report.rows.empty()) throw InvalidInputError("refusing to emit a report without rows");
    std::ofstream out(path);
    if (!out) throw IoError(path, std::strerror(errno));
    if (format == ReportFormat::csv)
        write_report_csv(out, report);
    else
        out << report_to_json(report).dump(2) << '\n';
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace edi
