#pragma once

#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "favardlab/estimators.hpp"
#include "favardlab/geometry.hpp"
#include "favardlab/interval_set.hpp"
#include "favardlab/verification.hpp"

namespace favardlab {

inline nlohmann::json disks_to_json(const std::vector<Disk>& disks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Disk& d : disks) {
        arr.push_back({{"cx", d.center.x}, {"cy", d.center.y}, {"r", d.radius}});
    }
    return arr;
}

inline nlohmann::json interval_set_to_json(const IntervalSet& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Interval& iv : s.intervals()) {
        arr.push_back({iv.lo, iv.hi});
    }
    return arr;
}

inline IntervalSet interval_set_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw input_error("interval set JSON must be an array of pairs");
    std::vector<Interval> raw;
    for (const auto& pair : arr) {
        if (!pair.is_array() || pair.size() != 2) {
            throw input_error("interval set JSON must be an array of [lo, hi] pairs");
        }
        raw.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return make_interval_set(std::move(raw));
}

inline nlohmann::json record_to_json(const EstimateRecord& r) {
    return {{"k", r.k},
            {"mean", r.mean},
            {"stderr", r.stderr_},
            {"samples", r.samples},
            {"theta", r.theta}};
}

inline nlohmann::json overlap_report_to_json(const OverlapReport& r) {
    return {{"a", r.a},
            {"set_measure", r.set_measure},
            {"integral", r.integral},
            {"lower_bound", r.lower_bound},
            {"upper_bound", r.upper_bound},
            {"quad_tol", r.quad_tol},
            {"bounds_ok", r.bounds_ok},
            {"vanishing_ok", r.vanishing_ok},
            {"midpoint_ok", r.midpoint_ok},
            {"pass", r.pass()}};
}

inline nlohmann::json overlap_sweep_to_json(const OverlapSweep& s) {
    nlohmann::json cases = nlohmann::json::array();
    for (const OverlapSweepCase& c : s.cases) {
        cases.push_back({{"a", c.a},
                         {"full_interval", overlap_report_to_json(c.full_interval)},
                         {"closed_form", c.closed_form},
                         {"closed_form_ok", c.closed_form_ok},
                         {"random_count", c.random_count},
                         {"random_failures", c.random_failures},
                         {"pass", c.pass()}});
    }
    return {{"cases", cases}, {"pass", s.pass}};
}

inline nlohmann::json induction_report_to_json(const InductionReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const InductionRow& row : r.rows) {
        rows.push_back({{"k", row.k},
                        {"e_prev", row.e_prev},
                        {"e_k", row.e_k},
                        {"slack", row.slack},
                        {"tolerance", row.tolerance},
                        {"pass", row.pass}});
    }
    // both normalizations of the overlap constant, for reference: the raw
    // integral bound and the expectation form actually used by default
    return {{"c", r.c},
            {"c_integral_form", std::numbers::sqrt2 / 48.0},
            {"c_expectation_form", std::numbers::sqrt2 / (24.0 * std::numbers::pi)},
            {"rows", rows},
            {"pass", r.pass}};
}

inline nlohmann::json fit_report_to_json(const FitReport& r) {
    auto model = [](const FitModel& m) {
        return nlohmann::json{{"C", m.C}, {"exponent", m.exponent}, {"rss", m.rss}};
    };
    nlohmann::json table = nlohmann::json::array();
    for (const auto& [k, v] : r.k_times_mean) table.push_back({k, v});
    return {{"power", model(r.power)},
            {"inverse_k", model(r.inverse)},
            {"sqrt_log", model(r.sqrt_log)},
            {"k_times_mean", table}};
}

inline nlohmann::json mattila_report_to_json(const MattilaReport& r) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& [k, v] : r.ratios) table.push_back({k, v});
    return {{"ratios", table}, {"r_min", r.r_min}, {"r_max", r.r_max}, {"pass", r.pass}};
}

// ---- verdict summary CSVs -------------------------------------------------

inline std::string summary_csv(const OverlapSweep& s) {
    std::string out = "a,set_measure,integral,lower_bound,upper_bound,closed_form_ok,"
                      "random_failures,pass\n";
    for (const OverlapSweepCase& c : s.cases) {
        out += format_g17(c.a) + ',' + format_g17(c.full_interval.set_measure) + ',' +
               format_g17(c.full_interval.integral) + ',' +
               format_g17(c.full_interval.lower_bound) + ',' +
               format_g17(c.full_interval.upper_bound) + ',' + (c.closed_form_ok ? "1" : "0") +
               ',' + std::to_string(c.random_failures) + ',' + (c.pass() ? "1" : "0") + "\n";
    }
    return out;
}

inline std::string summary_csv(const InductionReport& r) {
    std::string out = "k,e_prev,e_k,slack,tolerance,pass\n";
    for (const InductionRow& row : r.rows) {
        out += std::to_string(row.k) + ',' + format_g17(row.e_prev) + ',' + format_g17(row.e_k) +
               ',' + format_g17(row.slack) + ',' + format_g17(row.tolerance) + ',' +
               (row.pass ? "1" : "0") + "\n";
    }
    return out;
}

inline std::string summary_csv(const MattilaReport& r) {
    std::string out = "k,ratio,r_min,r_max,pass\n";
    for (const auto& [k, ratio] : r.ratios) {
        const bool in_band = ratio >= r.r_min && ratio <= r.r_max;
        out += std::to_string(k) + ',' + format_g17(ratio) + ',' + format_g17(r.r_min) + ',' +
               format_g17(r.r_max) + ',' + (in_band ? "1" : "0") + "\n";
    }
    return out;
}

inline std::string summary_csv(const ThetaInvarianceReport& r) {
    std::string out = "theta_a,theta_b,z,pass\n";
    for (const ThetaInvarianceRow& row : r.rows) {
        out += format_g17(row.theta_a) + ',' + format_g17(row.theta_b) + ',' + format_g17(row.z) +
               ',' + (row.pass ? "1" : "0") + "\n";
    }
    return out;
}

inline nlohmann::json theta_invariance_report_to_json(const ThetaInvarianceReport& r) {
    nlohmann::json estimates = nlohmann::json::array();
    for (const EstimateRecord& e : r.estimates) estimates.push_back(record_to_json(e));
    nlohmann::json rows = nlohmann::json::array();
    for (const ThetaInvarianceRow& row : r.rows) {
        rows.push_back({{"theta_a", row.theta_a},
                        {"theta_b", row.theta_b},
                        {"z", row.z},
                        {"pass", row.pass}});
    }
    return {{"k", r.k},
            {"estimates", estimates},
            {"pairs", rows},
            {"max_abs_z", r.max_abs_z},
            {"pass", r.pass}};
}

}  // namespace favardlab
