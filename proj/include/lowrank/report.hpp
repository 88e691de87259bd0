//
// lowrank / report : structured verdicts for one bound instance
//
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lowrank/io.hpp"

namespace lowrank {

// One evaluated theorem instance. The inequality is normalized to
//   rhs_lower - tol <= lhs <= rhs_upper + tol
// with rhs_lower absent for one-sided bounds. `context` records the scalar
// ingredients (norms, eps_Z, gaps, sub-assert outcomes) in insertion order.
struct BoundReport {
    std::string bound_id;
    double lhs = 0.0;
    std::optional<double> rhs_lower;
    double rhs_upper = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    bool holds = false;
    int m = -1;
    int n = -1;
    int k = -1;
    int c = -1;
    std::string p;      // schatten index as text; empty when not applicable
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> context;

    void add_context(std::string key, double value) {
        context.emplace_back(std::move(key), value);
    }

    bool has_context(const std::string& key) const {
        for (const auto& [k_, v] : context)
            if (k_ == key) return true;
        return false;
    }

    double context_value(const std::string& key) const {
        for (const auto& [k_, v] : context)
            if (k_ == key) return v;
        throw std::out_of_range("BoundReport: no context entry '" + key + "'");
    }
};

// Computes slack and verdict. `sub_asserts_ok` folds in any secondary
// inequalities the checker verified (Weyl, Mirsky, the eps_Z cap); when a
// checker has such asserts it also records `sub_ok` in the context so the
// verdict stays re-derivable from the serialized row.
inline void finalize_report(BoundReport& r, bool sub_asserts_ok = true) {
    double s = r.rhs_upper - r.lhs;
    if (r.rhs_lower) s = std::min(s, r.lhs - *r.rhs_lower);
    if (!std::isfinite(s)) throw std::logic_error("BoundReport: non-finite slack");
    r.slack = s;
    r.holds = (s >= -r.tolerance) && sub_asserts_ok;
}

// --- serialization ---------------------------------------------------------

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

inline std::vector<std::string> parse_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

inline const char* report_csv_header() {
    return "bound_id,m,n,k,c,p,seed,lhs,rhs_lower,rhs_upper,slack,tolerance,holds,context_json";
}

inline nlohmann::json context_to_json(const BoundReport& r) {
    nlohmann::json ctx = nlohmann::json::object();
    for (const auto& [key, value] : r.context) ctx[key] = value;
    return ctx;
}

inline std::string report_to_csv_row(const BoundReport& r) {
    auto int_cell = [](int v) { return v < 0 ? std::string() : std::to_string(v); };
    std::string row;
    row += csv_quote(r.bound_id);
    row += ',';
    row += int_cell(r.m) + ',' + int_cell(r.n) + ',' + int_cell(r.k) + ',' + int_cell(r.c) + ',';
    row += r.p;
    row += ',';
    row += std::to_string(r.seed);
    row += ',';
    row += format_double(r.lhs);
    row += ',';
    row += r.rhs_lower ? format_double(*r.rhs_lower) : std::string();
    row += ',';
    row += format_double(r.rhs_upper);
    row += ',';
    row += format_double(r.slack);
    row += ',';
    row += format_double(r.tolerance);
    row += ',';
    row += r.holds ? "true" : "false";
    row += ',';
    row += csv_quote(context_to_json(r).dump());
    return row;
}

inline nlohmann::json report_to_json(const BoundReport& r) {
    nlohmann::json j;
    j["bound_id"] = r.bound_id;
    if (r.m >= 0) j["m"] = r.m;
    if (r.n >= 0) j["n"] = r.n;
    if (r.k >= 0) j["k"] = r.k;
    if (r.c >= 0) j["c"] = r.c;
    if (!r.p.empty()) j["p"] = r.p;
    j["seed"] = r.seed;
    j["lhs"] = r.lhs;
    if (r.rhs_lower) j["rhs_lower"] = *r.rhs_lower;
    j["rhs_upper"] = r.rhs_upper;
    j["slack"] = r.slack;
    j["tolerance"] = r.tolerance;
    j["holds"] = r.holds;
    j["context"] = context_to_json(r);
    return j;
}

} // namespace lowrank
