#pragma once

// Machine-readable run reports: nested documents with stable key order,
// every numeric metric paired with the tolerance it was validated under,
// plus a flat CSV rendering. Timing data goes to the diagnostic stream,
// never into the report, so identical (config, seed) runs are byte-identical.

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace pineq {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunReport {
    nlohmann::ordered_json doc;

    RunReport(const std::string& command, std::uint64_t seed, double tolerance_scale) {
        doc["version"] = kToolVersion;
        doc["command"] = command;
        doc["seed"] = seed;
        doc["tolerance_scale"] = tolerance_scale;
    }

    /// Numeric metric with its validation tolerance, at a slash-separated path.
    void metric(const std::string& path, double value, double tolerance) {
        auto& slot = at(path);
        slot["value"] = value;
        slot["tolerance"] = tolerance;
    }

    /// Non-metric payload (strings, booleans, arrays, nested objects).
    void info(const std::string& path, nlohmann::ordered_json value) {
        at(path) = std::move(value);
    }

private:
    nlohmann::ordered_json& at(const std::string& path) {
        nlohmann::ordered_json* node = &doc;
        size_t start = 0;
        while (true) {
            const size_t slash = path.find('/', start);
            const std::string key = path.substr(start, slash - start);
            node = &(*node)[key];
            if (slash == std::string::npos) return *node;
            start = slash + 1;
        }
    }
};

enum class ReportFormat { Json, Csv };

inline std::string format_17g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline bool is_metric_node(const nlohmann::ordered_json& node) {
    return node.is_object() && node.size() == 2 && node.contains("value") &&
           node.contains("tolerance") && node["value"].is_number() &&
           node["tolerance"].is_number();
}

inline void collect_csv_rows(const nlohmann::ordered_json& node, const std::string& prefix,
                             std::string& out) {
    if (is_metric_node(node)) {
        out += prefix + "," + format_17g(node["value"].get<double>()) + "," +
               format_17g(node["tolerance"].get<double>()) + "\n";
        return;
    }
    if (node.is_object()) {
        for (const auto& [key, child] : node.items())
            collect_csv_rows(child, prefix.empty() ? key : prefix + "/" + key, out);
    } else if (node.is_array()) {
        int i = 0;
        for (const auto& child : node)
            collect_csv_rows(child, prefix + "/" + std::to_string(i++), out);
    }
}

}  // namespace detail

inline std::string emit_report(const RunReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) return report.doc.dump(2) + "\n";
    std::string out = "metric,value,tolerance\n";
    detail::collect_csv_rows(report.doc, "", out);
    return out;
}

}  // namespace pineq
