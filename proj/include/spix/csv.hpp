#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spix/metrics.hpp"

namespace spix {

inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

inline constexpr const char* kMetricsCsvHeader =
    "dataset,image_id,algorithm,k_desired,k_generated,rec,ue_np,ue_levin,ue_bergh,asa,ev,co,"
    "icv,mde,runtime_ms";

// One metrics.csv row; metrics at 6 decimals, runtime at 3 (blank when
// timings are suppressed for byte-deterministic output).
inline std::string metrics_csv_row(const std::string& dataset, const std::string& image_id,
                                   const std::string& algorithm, int k_desired,
                                   const MetricRecord& r, bool with_timing) {
    std::string row = dataset + ',' + image_id + ',' + algorithm + ',' +
                      std::to_string(k_desired) + ',' + std::to_string(r.k_generated);
    for (double v : {r.rec, r.ue_np, r.ue_levin, r.ue_bergh, r.asa, r.ev, r.co, r.icv, r.mde})
        row += ',' + format_fixed(v, 6);
    row += ',';
    if (with_timing && r.runtime_ns)
        row += format_fixed(static_cast<double>(*r.runtime_ns) / 1e6, 3);
    return row;
}

// Failed (image, K) combinations keep their position in the file with every
// metric cell left blank.
inline std::string metrics_csv_infeasible_row(const std::string& dataset,
                                              const std::string& image_id,
                                              const std::string& algorithm, int k_desired) {
    std::string row = dataset + ',' + image_id + ',' + algorithm + ',' +
                      std::to_string(k_desired) + ',';
    for (int i = 0; i < 10; ++i) row += ',';
    return row;
}

// Minimal CSV line splitting; the formats here never quote fields.
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

}  // namespace spix
