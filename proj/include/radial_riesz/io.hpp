#pragma once

// CSV and JSON forms of tuples, verdicts, grids, profiles, kernel tables, plans and ratio records.
// Numbers are written with 17 significant digits ("inf", "-inf", "nan" for non-finite values).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "exponents.hpp"
#include "grid.hpp"
#include "kernel_table.hpp"
#include "lab.hpp"
#include "potential.hpp"

namespace radial_riesz {

using json = nlohmann::ordered_json;

inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Non-finite doubles become strings; JSON has no literal for them.
inline json json_number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

// --- tuples ------------------------------------------------------------------------------

inline json tuple_to_json(const ExponentTuple& t) {
    return {{"n", t.n}, {"gamma", t.gamma}, {"p", t.p}, {"q", t.q}, {"alpha", t.alpha}, {"beta", t.beta}};
}

inline ExponentTuple tuple_from_json(const json& j) {
    if (!j.is_object()) throw precondition_error("tuple must be a JSON object");
    ExponentTuple t;
    const auto num = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_number())
            throw precondition_error(std::string("tuple field '") + key + "' missing or not a number");
        return j.at(key).get<double>();
    };
    const double n = num("n");
    if (n != std::round(n)) throw precondition_error("tuple field 'n' must be an integer");
    t.n = static_cast<int>(n);
    t.gamma = num("gamma");
    t.p = num("p");
    t.q = num("q");
    t.alpha = num("alpha");
    t.beta = num("beta");
    return t;
}

inline std::vector<ExponentTuple> tuples_from_json(const json& j) {
    if (!j.is_array()) throw precondition_error("tuples file must hold a JSON array of tuples");
    std::vector<ExponentTuple> out;
    for (const json& e : j) out.push_back(tuple_from_json(e));
    return out;
}

// --- verdicts ----------------------------------------------------------------------------

inline json verdict_to_json(const AdmissibilityVerdict& v) {
    json reasons = json::array();
    for (const ConditionCheck& c : v.reasons)
        reasons.push_back({{"condition", c.condition}, {"lhs", json_number(c.lhs)}, {"rhs", json_number(c.rhs)}, {"holds", c.holds}});
    return {{"class", std::string(to_string(v.cls))}, {"reasons", reasons}, {"boundary", v.boundary}};
}

inline AdmissibilityVerdict verdict_from_json(const json& j) {
    AdmissibilityVerdict v;
    v.cls = admissibility_class_from_string(j.at("class").get<std::string>());
    v.boundary = j.at("boundary").get<bool>();
    for (const json& r : j.at("reasons"))
        v.reasons.push_back({r.at("condition").get<std::string>(), r.at("lhs").get<double>(), r.at("rhs").get<double>(),
                             r.at("holds").get<bool>()});
    return v;
}

// --- grids and profiles --------------------------------------------------------------------

inline json grid_to_json(const LogGrid& g) {
    return {{"r_min", g.r_min()}, {"r_max", g.r_max()}, {"count", g.count()}};
}

inline LogGrid grid_from_json(const json& j) {
    return LogGrid(j.at("r_min").get<double>(), j.at("r_max").get<double>(), j.at("count").get<std::size_t>());
}

inline void write_profile_csv(std::ostream& os, const RadialProfile& v) {
    os << "# r_min=" << format_double(v.grid.r_min()) << " r_max=" << format_double(v.grid.r_max())
       << " count=" << v.grid.count() << " edge_margin=" << v.edge_margin << "\n";
    os << "r,value\n";
    for (std::size_t j = 0; j < v.size(); ++j) os << format_double(v.grid.node(j)) << "," << format_double(v.samples[j]) << "\n";
}

inline json profile_to_json(const RadialProfile& v) {
    json r = json::array();
    json s = json::array();
    for (std::size_t j = 0; j < v.size(); ++j) {
        r.push_back(v.grid.node(j));
        s.push_back(json_number(v.samples[j]));
    }
    return {{"grid", grid_to_json(v.grid)}, {"edge_margin", v.edge_margin}, {"r", r}, {"value", s}};
}

// --- kernel tables and plans ---------------------------------------------------------------

inline void write_table_csv(std::ostream& os, const KernelTable& t) {
    os << "# n=" << t.params.n << " gamma=" << format_double(t.params.gamma) << " q=" << format_double(t.q)
       << " beta=" << format_double(t.beta) << "\n";
    os << "a_left,a_right,cell_average,regime_tag\n";
    for (std::size_t m = 0; m < t.values.size(); ++m)
        os << format_double(t.cell_left(m)) << "," << format_double(t.cell_right(m)) << "," << format_double(t.values[m])
           << "," << to_string(t.regime_tags[m]) << "\n";
}

inline json plan_to_json(const ConvolutionPlan& p) {
    json j = {{"n", p.params().n},
              {"gamma", p.params().gamma},
              {"weight", p.weight()},
              {"tilt", p.tilt()},
              {"input_grid", grid_to_json(p.grid())},
              {"ratio_grid", grid_to_json(p.table().grid)},
              {"padded_length", p.padded_length()},
              {"edge_margin", p.edge_margin()}};
    j["tuple"] = p.tuple() ? tuple_to_json(*p.tuple()) : json(nullptr);
    return j;
}

// --- ratio records ---------------------------------------------------------------------------

inline constexpr const char* ratio_csv_header =
    "n,gamma,p,q,alpha,beta,family,N,lhs,rhs,ratio,verdict,edge_excluded_count,error";

namespace detail {

// Quotes a CSV field when it contains a separator, quote or line break.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' || c == '\r' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace detail

inline void write_ratio_row(std::ostream& os, const RatioRecord& r) {
    const ExponentTuple& t = r.tuple;
    os << t.n << "," << format_double(t.gamma) << "," << format_double(t.p) << "," << format_double(t.q) << ","
       << format_double(t.alpha) << "," << format_double(t.beta) << "," << detail::csv_field(r.family) << "," << r.N
       << ",";
    if (r.ok())
        os << format_double(r.lhs) << "," << format_double(r.rhs) << "," << format_double(r.ratio);
    else
        os << ",,";
    os << "," << r.verdict << "," << r.edge_excluded_count << "," << detail::csv_field(r.error) << "\n";
}

inline json ratio_to_json(const RatioRecord& r) {
    json j = tuple_to_json(r.tuple);
    j["family"] = r.family;
    j["N"] = r.N;
    if (r.ok()) {
        j["lhs"] = json_number(r.lhs);
        j["rhs"] = json_number(r.rhs);
        j["ratio"] = json_number(r.ratio);
    } else {
        j["lhs"] = j["rhs"] = j["ratio"] = nullptr;
    }
    j["verdict"] = r.verdict;
    j["edge_excluded_count"] = r.edge_excluded_count;
    j["error"] = r.ok() ? json(nullptr) : json(r.error);
    return j;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw precondition_error(path + ": " + e.what());
    }
}

} // namespace radial_riesz
