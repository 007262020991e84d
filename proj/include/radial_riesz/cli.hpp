#pragma once

// Command-line front end. `run_cli` is the whole program; tools/radial_riesz.cpp only forwards
// argv. Exit codes: 0 success, 1 inadmissible tuple (check only), 2 usage or validation error,
// 3 I/O error, 4 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "errors.hpp"
#include "exponents.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "kernel.hpp"
#include "lab.hpp"
#include "potential.hpp"

namespace radial_riesz::cli {

enum ExitCode : int { ok = 0, inadmissible = 1, usage = 2, io = 3, numerical = 4 };

inline constexpr const char* default_grid = "1e-4:1e4:2^14";

inline double parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw precondition_error(what + ": '" + s + "' is not a number");
    return x;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

/// Node count written as an integer or as b^e.
inline std::size_t parse_count(const std::string& s, const std::string& what) {
    const auto parts = split(s, '^');
    double v = 0.0;
    if (parts.size() == 1)
        v = parse_number(parts[0], what);
    else if (parts.size() == 2)
        v = std::pow(parse_number(parts[0], what), parse_number(parts[1], what));
    else
        throw precondition_error(what + ": '" + s + "' is not a count");
    if (!(v >= 2.0) || v != std::round(v) || v > 1e9) throw precondition_error(what + ": count must be an integer >= 2");
    return static_cast<std::size_t>(v);
}

/// r_min:r_max:N
inline LogGrid parse_grid(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw precondition_error("--grid expects r_min:r_max:N, got '" + s + "'");
    return LogGrid(parse_number(parts[0], "--grid r_min"), parse_number(parts[1], "--grid r_max"),
                   parse_count(parts[2], "--grid N"));
}

/// gaussian[:scale] | ball[:radius] | cusp[:eta]; the cusp takes p from `p`.
inline TestFamily parse_family(const std::string& s, double p = 2.0) {
    const auto parts = split(s, ':');
    if (parts.empty() || parts.size() > 2) throw precondition_error("bad family '" + s + "'");
    const bool has_arg = parts.size() == 2;
    const double arg = has_arg ? parse_number(parts[1], "family parameter") : 0.0;
    TestFamily f;
    if (parts[0] == "gaussian")
        f = Gaussian{has_arg ? arg : 1.0};
    else if (parts[0] == "ball")
        f = BallIndicator{has_arg ? arg : 1.0};
    else if (parts[0] == "cusp")
        f = CounterexampleCusp{p, has_arg ? arg : 2.0 / p};
    else
        throw precondition_error("unknown family '" + parts[0] + "' (expected gaussian, ball or cusp)");
    validate_family(f);
    return f;
}

/// Destination of a subcommand's records. A file that is left incomplete by a hard failure
/// is removed; on stdout a trailing "# incomplete" line marks the truncation instead.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : path_(path), out_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw io_error("cannot open " + path + " for writing");
            out_ = file_.get();
        }
    }

    std::ostream& stream() { return *out_; }

    void finish() {
        out_->flush();
        if (!*out_) throw io_error("write failed" + (path_.empty() ? std::string() : " for " + path_));
        finished_ = true;
    }

    void abandon(const std::string& why) {
        if (finished_) return;
        if (file_) {
            file_->close();
            std::error_code ec;
            std::filesystem::remove(path_, ec);
        } else {
            *out_ << "# incomplete: " << why << "\n";
            out_->flush();
        }
    }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_;
    bool finished_ = false;
};

struct GlobalFlags {
    std::string grid = default_grid;
    std::string output;
    std::string format = "csv";
};

// ---------------------------------------------------------------------------------------
// Subcommands

struct KernelFlags {
    int n = 3;
    double gamma = 1.0;
    std::vector<double> a;
    std::string a_range;
    bool closed_form = false;
    double tol = quad::default_tolerance;
};

inline int cmd_kernel(const KernelFlags& f, const GlobalFlags& g, std::ostream& out) {
    const KernelParams kp(f.n, f.gamma);
    if (f.closed_form && f.n != 3) throw precondition_error("--closed-form requires n = 3");
    if (!(f.tol > 0.0)) throw precondition_error("--tol must be positive");
    std::vector<double> as = f.a;
    if (!f.a_range.empty()) {
        const auto parts = split(f.a_range, ':');
        if (parts.size() != 3) throw precondition_error("--a-range expects lo:hi:count");
        const double lo = parse_number(parts[0], "--a-range lo");
        const double hi = parse_number(parts[1], "--a-range hi");
        const std::size_t count = parse_count(parts[2], "--a-range count");
        const LogGrid r(lo, hi, count);
        for (double x : r.nodes()) as.push_back(x);
    }
    if (as.empty()) throw precondition_error("give at least one ratio with --a or --a-range");
    for (double a : as)
        if (!(a >= 0.0) || !std::isfinite(a)) throw domain_error("kernel ratio a must be finite and >= 0");

    Output o(g.output, out);
    try {
        json rows = json::array();
        if (g.format == "csv") {
            o.stream() << "a,value,regime" << (f.closed_form ? ",closed_form,rel_err" : "") << "\n";
        }
        for (double a : as) {
            const double v = eval_kernel(kp, a, f.tol);
            const std::string regime(to_string(regime_of(a)));
            double closed = 0.0;
            double rel = 0.0;
            if (f.closed_form) {
                closed = a == 0.0 ? 2.0 : eval_kernel_closed_n3(f.gamma, a);
                rel = std::isinf(v) && std::isinf(closed) ? 0.0 : std::abs(v - closed) / std::abs(closed);
            }
            if (g.format == "csv") {
                o.stream() << format_double(a) << "," << format_double(v) << "," << regime;
                if (f.closed_form) o.stream() << "," << format_double(closed) << "," << format_double(rel);
                o.stream() << "\n";
            } else {
                json row = {{"a", a}, {"value", json_number(v)}, {"regime", regime}};
                if (f.closed_form) {
                    row["closed_form"] = json_number(closed);
                    row["rel_err"] = json_number(rel);
                }
                rows.push_back(row);
            }
        }
        if (g.format == "json") o.stream() << rows.dump(2) << "\n";
        o.finish();
    } catch (const std::exception& e) {
        o.abandon(e.what());
        throw;
    }
    return ok;
}

struct CheckFlags {
    int n = 3;
    double gamma = 1.0;
    double p = 2.0;
    std::optional<double> q;
    double alpha = 0.0;
    double beta = 0.0;
    bool solve_q = false;
};

inline int cmd_check(const CheckFlags& f, const GlobalFlags& g, std::ostream& out) {
    ExponentTuple t{f.n, f.gamma, f.p, 0.0, f.alpha, f.beta};
    if (f.solve_q) {
        if (f.q) throw precondition_error("pass either --q or --solve-q, not both");
        t.q = solve_q(f.n, f.gamma, f.p, f.alpha, f.beta);
    } else {
        if (!f.q) throw precondition_error("--q is required unless --solve-q is given");
        t.q = *f.q;
    }
    const AdmissibilityVerdict v = classify(t);
    json j = {{"tuple", tuple_to_json(t)}, {"scaling_residual", scaling_residual(t)}};
    const json verdict = verdict_to_json(v);
    for (const auto& [key, value] : verdict.items()) j[key] = value;
    Output o(g.output, out);
    o.stream() << j.dump(2) << "\n";
    o.finish();
    return v.cls == AdmissibilityClass::Inadmissible ? inadmissible : ok;
}

struct PotentialFlags {
    int n = 3;
    double gamma = 1.0;
    std::string family = "gaussian";
    bool oracle = false;
    std::size_t probes = 16;
    std::string emit_plan;
    double tol = 1e-8;
};

inline int cmd_potential(const PotentialFlags& f, const GlobalFlags& g, std::ostream& out) {
    const KernelParams kp(f.n, f.gamma);
    const LogGrid grid = parse_grid(g.grid);
    const TestFamily fam = parse_family(f.family);
    if (std::holds_alternative<CounterexampleCusp>(fam))
        throw precondition_error("potential supports the gaussian and ball families");
    if (f.oracle && f.probes < 2) throw precondition_error("--probes must be at least 2");
    if (!(f.tol > 0.0)) throw precondition_error("--tol must be positive");
    const ExponentTuple ctx{f.n, f.gamma};
    const auto v0 = family_function(fam, ctx);
    const RadialProfile v = sample(v0, grid);

    const ConvolutionPlan plan(kp, grid);
    if (!f.emit_plan.empty()) {
        std::ofstream pf(f.emit_plan, std::ios::binary | std::ios::trunc);
        if (!pf) throw io_error("cannot open " + f.emit_plan + " for writing");
        pf << plan_to_json(plan).dump(2) << "\n";
        if (!pf) throw io_error("write failed for " + f.emit_plan);
    }
    const RadialProfile T = riesz_radial(v, plan);

    Output o(g.output, out);
    try {
        if (!f.oracle) {
            if (g.format == "csv") {
                write_profile_csv(o.stream(), T);
            } else {
                o.stream() << profile_to_json(T).dump(2) << "\n";
            }
        } else {
            // Probe radii spread evenly in ln r over the edge-safe nodes; the oracle integrates
            // the family's exact profile over its support within the grid.
            double support_hi = grid.r_max();
            if (const auto* b = std::get_if<BallIndicator>(&fam)) support_hi = std::min(support_hi, b->radius);
            if (const auto* ga = std::get_if<Gaussian>(&fam)) support_hi = std::min(support_hi, 40.0 * ga->scale);
            const std::size_t first = T.edge_margin;
            const std::size_t last = grid.count() - 1 - T.edge_margin;
            json rows = json::array();
            if (g.format == "csv") o.stream() << "r,value,direct,rel_err\n";
            for (std::size_t i = 0; i < f.probes; ++i) {
                const std::size_t j = first + static_cast<std::size_t>(std::llround(
                                                  static_cast<double>(i) * static_cast<double>(last - first) /
                                                  static_cast<double>(f.probes - 1)));
                const double rho = grid.node(j);
                const double direct = support_hi > grid.r_min()
                                          ? riesz_direct(v0, grid.r_min(), support_hi, kp, rho, {}, f.tol)
                                          : 0.0;
                const double rel = direct == 0.0 ? std::abs(T.samples[j]) : std::abs(T.samples[j] - direct) / std::abs(direct);
                if (g.format == "csv")
                    o.stream() << format_double(rho) << "," << format_double(T.samples[j]) << "," << format_double(direct)
                               << "," << format_double(rel) << "\n";
                else
                    rows.push_back({{"r", rho}, {"value", T.samples[j]}, {"direct", direct}, {"rel_err", rel}});
            }
            if (g.format == "json") o.stream() << rows.dump(2) << "\n";
        }
        o.finish();
    } catch (const std::exception& e) {
        o.abandon(e.what());
        throw;
    }
    return ok;
}

inline void write_records(Output& o, const GlobalFlags& g, const std::vector<RatioRecord>& rs) {
    if (g.format == "csv") {
        o.stream() << ratio_csv_header << "\n";
        for (const RatioRecord& r : rs) write_ratio_row(o.stream(), r);
    } else {
        json a = json::array();
        for (const RatioRecord& r : rs) a.push_back(ratio_to_json(r));
        o.stream() << a.dump(2) << "\n";
    }
}

struct SweepFlags {
    std::string tuples_file;
    std::vector<std::string> families{"gaussian", "ball"};
};

inline int cmd_sweep(const SweepFlags& f, const GlobalFlags& g, std::ostream& out) {
    const LogGrid grid = parse_grid(g.grid);
    const std::vector<ExponentTuple> tuples = tuples_from_json(read_json_file(f.tuples_file));
    for (const std::string& s : f.families) parse_family(s);  // reject bad names before any work
    Output o(g.output, out);
    try {
        json rows = json::array();
        const bool csv = g.format == "csv";
        if (csv) o.stream() << ratio_csv_header << "\n";
        const auto sink = [&](const RatioRecord& r) {
            if (csv) {
                write_ratio_row(o.stream(), r);
                o.stream().flush();
            } else {
                rows.push_back(ratio_to_json(r));
            }
        };
        for (const ExponentTuple& t : tuples) {
            std::vector<TestFamily> fams;
            for (const std::string& s : f.families) fams.push_back(parse_family(s, t.p));
            sweep({t}, fams, grid, sink);
        }
        if (!csv) o.stream() << rows.dump(2) << "\n";
        o.finish();
    } catch (const std::exception& e) {
        o.abandon(e.what());
        throw;
    }
    return ok;
}

struct SharpnessFlags {
    double p = 2.0;
    double q = 4.0;
    double gamma = 2.85;
    double alpha = -0.3;
    double beta = -0.3;
    std::optional<double> eta;
    int levels = 4;
    bool control = false;
    std::string base_nodes = "2^12";
    double half_range = 4.0;
};

inline int cmd_sharpness(const SharpnessFlags& f, const GlobalFlags& g, std::ostream& out) {
    SharpnessOptions opt;
    opt.base_nodes = parse_count(f.base_nodes, "--base-nodes");
    opt.half_range = f.half_range;
    opt.control = f.control;
    Output o(g.output, out);
    try {
        write_records(o, g, sharpness_probe(f.p, f.q, f.gamma, f.alpha, f.beta, f.eta, f.levels, opt));
        o.finish();
    } catch (const std::exception& e) {
        o.abandon(e.what());
        throw;
    }
    return ok;
}

struct EmbedFlags {
    int n = 3;
    double s = 1.0;
    double c = 0.0;
    std::optional<double> q;
    std::string family = "gaussian";
    std::string ladder;
};

inline int cmd_embed(const EmbedFlags& f, const GlobalFlags& g, std::ostream& out) {
    const LogGrid grid = parse_grid(g.grid);
    const TestFamily fam = parse_family(f.family);
    if (std::holds_alternative<CounterexampleCusp>(fam)) throw precondition_error("embed supports the gaussian and ball families");
    const ExponentTuple ctx{f.n, f.n - f.s};
    std::vector<double> scales;
    if (!f.ladder.empty()) {
        if (f.q) throw precondition_error("--ladder measures the critical exponent; omit --q");
        const auto parts = split(f.ladder, ':');
        if (parts.size() != 2) throw precondition_error("--ladder expects lo:hi (powers of two)");
        const double lo = parse_number(parts[0], "--ladder lo");
        const double hi = parse_number(parts[1], "--ladder hi");
        if (lo != std::round(lo) || hi != std::round(hi) || hi < lo || hi - lo > 64)
            throw precondition_error("--ladder bounds must be integers with lo <= hi");
        for (int k = static_cast<int>(lo); k <= static_cast<int>(hi); ++k) scales.push_back(std::ldexp(1.0, k));
    }
    // Region checks before any potential is computed.
    if (f.q)
        detail::require_embedding_region(f.n, f.s, f.c, *f.q, false);
    else
        detail::require_embedding_region(f.n, f.s, f.c, critical_embedding_exponent(f.n, f.s, f.c), true);

    Output o(g.output, out);
    try {
        std::vector<RatioRecord> rs;
        const std::vector<FamilyMember> members =
            scales.empty() ? family_members(fam, grid, ctx) : family_members(make_ladder(fam, scales), grid, ctx);
        const ConvolutionPlan plan(KernelParams(f.n, f.n - f.s), grid);
        for (const FamilyMember& m : members) {
            RatioRecord r = f.q ? embedding_ratio(f.n, f.s, f.c, *f.q, m.profile)
                                : critical_embedding_ratio(f.n, f.s, f.c, m.profile, &plan);
            r.family = m.id;
            rs.push_back(std::move(r));
        }
        write_records(o, g, rs);
        o.finish();
    } catch (const std::exception& e) {
        o.abandon(e.what());
        throw;
    }
    return ok;
}

// ---------------------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Riesz potentials of radial functions and weighted inequality experiments", "radial_riesz"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalFlags g;
    app.add_option("--grid", g.grid, "log grid r_min:r_max:N (N may be written b^e)")->capture_default_str();
    app.add_option("-o,--output", g.output, "output file (default stdout)");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    KernelFlags kf;
    auto* kernel = app.add_subcommand("kernel", "evaluate the reduced spherical kernel I_{gamma,k}(a)");
    kernel->add_option("--n", kf.n, "dimension")->required();
    kernel->add_option("--gamma", kf.gamma, "kernel exponent, 0 < gamma < n")->required();
    kernel->add_option("--a", kf.a, "ratio(s) a >= 0");
    kernel->add_option("--a-range", kf.a_range, "log-spaced ratios lo:hi:count");
    kernel->add_flag("--closed-form", kf.closed_form, "compare with the n = 3 closed form");
    kernel->add_option("--tol", kf.tol, "relative quadrature tolerance")->capture_default_str();

    CheckFlags cf;
    auto* check = app.add_subcommand("check", "classify an exponent tuple (JSON verdict)");
    check->add_option("--n", cf.n)->required();
    check->add_option("--gamma", cf.gamma)->required();
    check->add_option("--p", cf.p)->required();
    check->add_option("--q", cf.q);
    check->add_option("--alpha", cf.alpha)->required();
    check->add_option("--beta", cf.beta)->required();
    check->add_flag("--solve-q", cf.solve_q, "fill q from the scaling relation");

    PotentialFlags pf;
    auto* potential = app.add_subcommand("potential", "Riesz potential of a test profile on the grid");
    potential->add_option("--n", pf.n)->required();
    potential->add_option("--gamma", pf.gamma)->required();
    potential->add_option("--family", pf.family, "gaussian[:scale] or ball[:radius]")->capture_default_str();
    potential->add_flag("--oracle", pf.oracle, "compare with direct quadrature at probe radii");
    potential->add_option("--probes", pf.probes, "number of oracle probe radii")->capture_default_str();
    potential->add_option("--emit-plan", pf.emit_plan, "write the convolution plan as JSON to this file");
    potential->add_option("--tol", pf.tol, "oracle relative tolerance")->capture_default_str();

    SweepFlags sf;
    auto* sweep_cmd = app.add_subcommand("sweep", "inequality ratios for tuples x families");
    sweep_cmd->add_option("--tuples-file", sf.tuples_file, "JSON array of tuples")->required();
    sweep_cmd->add_option("--families", sf.families, "gaussian[:scale], ball[:radius], cusp[:eta]")->capture_default_str();

    SharpnessFlags shf;
    auto* sharp = app.add_subcommand("sharpness", "n = 3 counterexample probe on [1/R, R]");
    sharp->add_option("--p", shf.p)->capture_default_str();
    sharp->add_option("--q", shf.q)->capture_default_str();
    sharp->add_option("--gamma", shf.gamma)->capture_default_str();
    sharp->add_option("--alpha", shf.alpha)->capture_default_str();
    sharp->add_option("--beta", shf.beta)->capture_default_str();
    sharp->add_option("--eta", shf.eta, "cusp log exponent (default 2/p)");
    sharp->add_option("--levels", shf.levels)->capture_default_str();
    sharp->add_flag("--control", shf.control, "allow an admissible tuple as a control run");
    sharp->add_option("--base-nodes", shf.base_nodes, "node count of the coarsest level")->capture_default_str();
    sharp->add_option("--half-range", shf.half_range, "grid spans [1/R, R]")->capture_default_str();

    EmbedFlags ef;
    auto* embed = app.add_subcommand("embed", "weighted Sobolev embedding ratio ||x|^{c/q} u||_q / ||f||_2");
    embed->add_option("--n", ef.n)->capture_default_str();
    embed->add_option("--s", ef.s, "smoothness order")->capture_default_str();
    embed->add_option("--c", ef.c, "weight exponent")->capture_default_str();
    embed->add_option("--q", ef.q, "Lebesgue exponent (default: the critical one)");
    embed->add_option("--family", ef.family)->capture_default_str();
    embed->add_option("--ladder", ef.ladder, "dilations 2^lo..2^hi at the critical exponent, as lo:hi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        parse_grid(g.grid);
        if (*kernel) return cmd_kernel(kf, g, out);
        if (*check) return cmd_check(cf, g, out);
        if (*potential) return cmd_potential(pf, g, out);
        if (*sweep_cmd) return cmd_sweep(sf, g, out);
        if (*sharp) return cmd_sharpness(shf, g, out);
        if (*embed) return cmd_embed(ef, g, out);
    } catch (const io_error& e) {
        err << "error: " << e.what() << "\n";
        return io;
    } catch (const std::invalid_argument& e) {  // precondition_error, inconsistent_scaling
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return numerical;
    }
    return usage;
}

} // namespace radial_riesz::cli
