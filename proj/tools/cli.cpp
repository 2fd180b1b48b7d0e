#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matrix_source.hpp"
#include "pkrylov/cost_model.hpp"
#include "pkrylov/errors.hpp"
#include "pkrylov/solvers.hpp"
#include "pkrylov/sparse.hpp"
#include "pkrylov/speedup.hpp"
#include "pkrylov/stats_csv.hpp"
#include "reference_matrices.hpp"

namespace pkrylov::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Flags shared by the subcommands. Each subcommand registers the subset it
// understands.
struct Options {
    std::string matrix;
    std::string gen;
    std::vector<std::string> matrices;
    std::vector<std::string> gens;
    std::string reference_dir;
    std::string method = "cg";
    std::vector<std::string> methods;
    std::string variant = "pipelined";
    std::string bench_variant = "both";
    std::string format = "csr";
    std::size_t restart = 30;
    double tol = 1e-8;
    std::size_t max_iters = 500;
    std::optional<std::size_t> fixed_iters;
    std::size_t runs = 10;
    std::uint64_t seed = 1;
    std::size_t groups = 128;
    std::size_t group_size = 256;
    std::string profile;
    std::string csv;
    unsigned jobs = 1;
    std::optional<double> launch_latency, transfer_latency, bandwidth, transfer_bandwidth;
};

// Thrown for input that CLI11 accepts syntactically but we reject.
struct FlagError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Method method_of(const std::string& s) {
    if (auto m = parse_method(s)) return *m;
    throw FlagError("unknown method '" + s + "' (cg, bicgstab, gmres)");
}

Variant variant_of(const std::string& s) {
    if (auto v = parse_variant(s)) return *v;
    throw FlagError("unknown variant '" + s + "' (classical, pipelined)");
}

LaunchConfig launch_of(const Options& o) {
    LaunchConfig lc{o.groups, o.group_size};
    lc.validate();
    return lc;
}

SolverConfig solver_config(const Options& o) {
    SolverConfig cfg;
    cfg.tolerance = o.tol;
    cfg.max_iterations = o.max_iters;
    cfg.restart = o.restart;
    cfg.fixed_iterations = o.fixed_iters;
    cfg.validate();
    return cfg;
}

DeviceProfile profile_of(const Options& o) {
    DeviceProfile p = o.profile.empty() ? DeviceProfile{} : load_profile(o.profile);
    if (o.launch_latency) p.launch_latency = *o.launch_latency;
    if (o.transfer_latency) p.transfer_latency = *o.transfer_latency;
    if (o.bandwidth) p.bandwidth = *o.bandwidth;
    if (o.transfer_bandwidth) p.transfer_bandwidth = *o.transfer_bandwidth;
    p.validate();
    return p;
}

NamedSystem single_source(const Options& o) {
    if (o.matrix.empty() == o.gen.empty()) {
        throw FlagError("exactly one of --matrix or --gen is required");
    }
    return o.matrix.empty() ? generate(o.gen, o.seed) : load(o.matrix);
}

std::string solver_name(Method m, Variant v) {
    return std::string(to_string(m)) + "-" + std::string(to_string(v));
}

// Holds the matrix in the requested storage so the view stays valid.
struct Operator {
    const CsrMatrix* csr;
    std::optional<EllMatrix> ell;

    Operator(const CsrMatrix& a, const std::string& format) : csr(&a) {
        if (format == "ell") {
            ell = csr_to_ell(a);
        } else if (format != "csr") {
            throw FlagError("unknown format '" + format + "' (csr, ell)");
        }
    }
    MatrixView view() const { return ell ? MatrixView(*ell) : MatrixView(*csr); }
};

double median(std::vector<double> v) {
    if (v.empty()) return nan;
    std::sort(v.begin(), v.end());
    const auto mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double ms_per_iteration(const SolverResult& r) {
    return r.iterations ? 1e3 * r.loop_seconds / static_cast<double>(r.iterations) : nan;
}

// Runs one configuration `runs` times; returns the first result and the
// median wall time per iteration.
std::pair<SolverResult, double> measure(Method m, Variant v, MatrixView a, const DenseVector& b,
                                        const SolverConfig& cfg, const LaunchConfig& lc,
                                        std::size_t runs) {
    auto first = solve(m, v, a, b, {}, cfg, lc);
    std::vector<double> times{ms_per_iteration(first)};
    for (std::size_t i = 1; i < runs; ++i) {
        times.push_back(ms_per_iteration(solve(m, v, a, b, {}, cfg, lc)));
    }
    return {std::move(first), median(std::move(times))};
}

int exit_code(Termination t) {
    switch (t) {
        case Termination::converged:
        case Termination::lucky_breakdown: return exit_converged;
        case Termination::breakdown: return exit_breakdown;
        case Termination::max_iterations: return exit_max_iterations;
    }
    return exit_breakdown;
}

double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

int cmd_solve(const Options& o, std::ostream& out) {
    const auto m = method_of(o.method);
    const auto v = variant_of(o.variant);
    const auto cfg = solver_config(o);
    const auto lc = launch_of(o);
    const auto profile = profile_of(o);
    const auto src = single_source(o);
    const Operator op(src.system.matrix, o.format);

    const auto r = solve(m, v, op.view(), src.system.rhs, {}, cfg, lc);
    const auto per = summarize_iterations(r.trace);
    const double monitored = r.residual_history.empty() ? nan : r.residual_history.back();
    const double true_rel = r.rhs_norm > 0 ? r.true_final_residual / r.rhs_norm : r.true_final_residual;

    out << std::setprecision(6);
    out << "matrix       " << src.name << " (n=" << src.system.matrix.rows()
        << ", nnz=" << src.system.matrix.nnz() << ", " << o.format << ")\n";
    out << "solver       " << solver_name(m, v);
    if (m == Method::gmres) out << " (m=" << cfg.restart << ")";
    out << "\n";
    out << "termination  " << to_string(r.termination);
    if (r.breakdown) out << " (" << to_string(*r.breakdown) << ")";
    out << "\n";
    out << "iterations   " << r.iterations << "\n";
    out << "monitored    " << monitored << " (relative)\n";
    out << "true         " << r.true_final_residual << " (absolute), " << true_rel << " (relative)\n";
    out << "per iter     " << per.launches << " launches, " << per.transfers << " transfers, "
        << per.bytes_kernel << " kernel bytes\n";
    const auto totals = r.trace.totals();
    out << "trace total  " << totals.launches << " launches, " << totals.transfers
        << " transfers over " << r.trace.records().size() << " records\n";
    out << "predicted    " << 1e6 * predicted_time_per_iteration(r.trace, profile) << " us/iter\n";
    out << "wall clock   " << ms_per_iteration(r) << " ms/iter (not reproducible)\n";
    return exit_code(r.termination);
}

int cmd_compare(const Options& o, std::ostream& out) {
    const auto m = method_of(o.method);
    auto cfg = solver_config(o);
    if (!cfg.fixed_iterations) cfg.fixed_iterations = 30;
    const auto lc = launch_of(o);
    const auto profile = profile_of(o);
    const auto src = single_source(o);
    const Operator op(src.system.matrix, o.format);
    const auto runs = std::max<std::size_t>(o.runs, 1);

    auto [classical, c_ms] = measure(m, Variant::classical, op.view(), src.system.rhs, cfg, lc, runs);
    auto [pipelined, p_ms] = measure(m, Variant::pipelined, op.view(), src.system.rhs, cfg, lc, runs);

    out << to_string(m) << " on " << src.name << " (n=" << src.system.matrix.rows()
        << ", nnz=" << src.system.matrix.nnz() << "), " << *cfg.fixed_iterations
        << " fixed iterations, median of " << runs << " runs\n";
    out << std::left << std::setw(11) << "variant" << std::right << std::setw(12) << "ms/iter"
        << std::setw(16) << "launches/iter" << std::setw(16) << "transfers/iter"
        << std::setw(20) << "predicted us/iter" << std::setw(12) << "iterations" << "\n";
    const auto row = [&](const char* name, const SolverResult& r, double ms) {
        const auto s = summarize_iterations(r.trace);
        out << std::left << std::setw(11) << name << std::right << std::setprecision(4)
            << std::setw(12) << ms << std::setw(16) << s.launches << std::setw(16) << s.transfers
            << std::setw(20) << 1e6 * predicted_time_per_iteration(r.trace, profile)
            << std::setw(12) << r.iterations << "\n";
    };
    row("classical", classical, c_ms);
    row("pipelined", pipelined, p_ms);

    const auto& hc = classical.residual_history;
    const auto& hp = pipelined.residual_history;
    double dev = 0.0;
    for (std::size_t i = 0; i < std::min(hc.size(), hp.size()); ++i) {
        dev = std::max(dev, relative_gap(hc[i], hp[i]));
    }
    out << std::setprecision(3) << std::scientific;
    out << "max residual-history deviation  " << dev;
    if (hc.size() != hp.size()) {
        out << " (histories differ in length: " << hc.size() << " vs " << hp.size() << ")";
    }
    out << "\n";
    if (m == Method::gmres) {
        double diff = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < classical.x.size(); ++i) {
            diff += (classical.x[i] - pipelined.x[i]) * (classical.x[i] - pipelined.x[i]);
            ref += classical.x[i] * classical.x[i];
        }
        out << "final iterate deviation         "
            << (ref > 0 ? std::sqrt(diff / ref) : std::sqrt(diff)) << "\n";
    }
    out << std::defaultfloat;
    return exit_converged;
}

// One bench cell before it runs.
struct Cell {
    std::shared_ptr<const NamedSystem> system;  // null when loading failed
    std::string matrix_name;
    Method method;
    Variant variant;
};

StatsRecord run_cell(const Cell& c, const Options& o, const SolverConfig& cfg,
                     const LaunchConfig& lc, const DeviceProfile& profile) {
    StatsRecord rec;
    rec.solver = solver_name(c.method, c.variant);
    rec.matrix = c.matrix_name;
    rec.ms_per_iter_median = rec.launches_per_iter = rec.transfers_per_iter = nan;
    rec.predicted_us_per_iter = rec.residual_30 = nan;
    if (!c.system) return rec;
    const auto& a = c.system->system.matrix;
    rec.n = a.rows();
    rec.nnz = a.nnz();
    try {
        const Operator op(a, o.format);
        auto [r, ms] = measure(c.method, c.variant, op.view(), c.system->system.rhs, cfg, lc,
                               std::max<std::size_t>(o.runs, 1));
        const auto s = summarize_iterations(r.trace);
        rec.ms_per_iter_median = ms;
        rec.launches_per_iter = s.launches;
        rec.transfers_per_iter = s.transfers;
        rec.predicted_us_per_iter = 1e6 * predicted_time_per_iteration(r.trace, profile);
        if (r.termination != Termination::breakdown && !r.residual_history.empty()) {
            rec.residual_30 = r.residual_history.back();
        }
    } catch (const std::exception&) {
        // recorded as NaN cells
    }
    return rec;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
    auto cfg = solver_config(o);
    if (!cfg.fixed_iterations) cfg.fixed_iterations = 30;
    const auto lc = launch_of(o);
    const auto profile = profile_of(o);

    std::vector<Method> methods;
    for (const auto& s : o.methods) methods.push_back(method_of(s));
    std::vector<Variant> variants{Variant::classical, Variant::pipelined};
    if (o.bench_variant != "both") variants = {variant_of(o.bench_variant)};

    std::vector<Cell> cells;
    const auto add = [&](std::shared_ptr<const NamedSystem> sys, const std::string& name,
                         const std::vector<Method>& ms) {
        for (auto m : ms) {
            for (auto v : variants) cells.push_back({sys, name, m, v});
        }
    };
    const std::vector<Method> all = methods.empty()
                                        ? std::vector<Method>{Method::cg, Method::bicgstab, Method::gmres}
                                        : methods;
    for (const auto& spec : o.gens) {
        for (const auto& one : expand_ladder(spec)) {
            add(std::make_shared<const NamedSystem>(generate(one, o.seed)), one, all);
        }
    }
    for (const auto& path : o.matrices) {
        std::shared_ptr<const NamedSystem> sys;
        try {
            sys = std::make_shared<const NamedSystem>(load(path));
        } catch (const std::exception& e) {
            err << "warning: " << path << ": " << e.what() << "\n";
        }
        add(sys, std::filesystem::path(path).stem().string(), all);
    }
    if (!o.reference_dir.empty()) {
        // Symmetric matrices go to CG, the rest to BiCGStab and GMRES.
        for (const auto& ref : reference_matrices) {
            const auto path = std::filesystem::path(o.reference_dir) / (std::string(ref.name) + ".mtx");
            if (!std::filesystem::exists(path)) {
                err << "note: " << path.string() << " not found, skipped\n";
                continue;
            }
            std::vector<Method> ms;
            for (auto m : all) {
                if ((m == Method::cg) == ref.symmetric) ms.push_back(m);
            }
            std::shared_ptr<const NamedSystem> sys;
            try {
                sys = std::make_shared<const NamedSystem>(load(path.string()));
            } catch (const std::exception& e) {
                err << "warning: " << path.string() << ": " << e.what() << "\n";
            }
            add(sys, std::string(ref.name), ms);
        }
    }
    if (o.gens.empty() && o.matrices.empty() && o.reference_dir.empty()) {
        throw FlagError("bench needs at least one --gen, --matrix or --reference-dir source");
    }

    std::vector<StatsRecord> records(cells.size());
    const unsigned jobs = std::max(1u, o.jobs);
    for (std::size_t start = 0; start < cells.size(); start += jobs) {
        const auto stop = std::min(cells.size(), start + jobs);
        std::vector<std::future<StatsRecord>> pending;
        for (auto i = start; i < stop; ++i) {
            pending.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                         run_cell, std::cref(cells[i]), std::cref(o),
                                         std::cref(cfg), std::cref(lc), std::cref(profile)));
        }
        for (auto i = start; i < stop; ++i) records[i] = pending[i - start].get();
    }

    if (o.csv.empty()) {
        write_stats_csv(records, out);
    } else {
        write_stats_csv(records, std::filesystem::path(o.csv));
        out << "wrote " << records.size() << " rows to " << o.csv << "\n";
    }
    return exit_converged;
}

int cmd_model(const Options& o, std::ostream& out) {
    const auto profile = profile_of(o);
    const auto m = method_of(o.method);
    auto cfg = solver_config(o);
    if (!cfg.fixed_iterations) cfg.fixed_iterations = 5;
    const auto lc = launch_of(o);

    const auto barrier = latency_barrier(profile);
    out << std::setprecision(8);
    out << "latency barrier  " << barrier.bytes << " bytes = " << barrier.doubles << " doubles\n";
    out << "profile          launch " << profile.launch_latency << " s, transfer "
        << profile.transfer_latency << " s, bandwidth " << profile.bandwidth
        << " B/s, link " << profile.transfer_bandwidth << " B/s\n";

    std::vector<NamedSystem> systems;
    const auto specs = o.gens.empty() ? std::vector<std::string>{"poisson2d:1..6"} : o.gens;
    for (const auto& spec : specs) {
        for (const auto& one : expand_ladder(spec)) systems.push_back(generate(one, o.seed));
    }
    std::vector<SpeedupCase> cases;
    for (const auto& s : systems) cases.push_back({s.name, &s.system.matrix, &s.system.rhs});
    const auto rows = speedup_curve(m, cases, profile, cfg, lc);

    out << to_string(m) << " predicted time per iteration (classical / pipelined)\n";
    out << std::left << std::setw(16) << "size" << std::right << std::setw(10) << "n"
        << std::setw(12) << "nnz" << std::setw(16) << "classical us" << std::setw(16)
        << "pipelined us" << std::setw(10) << "ratio" << "\n";
    out << std::setprecision(4);
    for (const auto& r : rows) {
        out << std::left << std::setw(16) << r.label << std::right << std::setw(10) << r.n
            << std::setw(12) << r.nnz << std::setw(16) << 1e6 * r.classical_seconds
            << std::setw(16) << 1e6 * r.pipelined_seconds << std::setw(10) << r.ratio << "\n";
    }
    return exit_converged;
}

void source_flags(CLI::App* cmd, Options& o) {
    auto* m = cmd->add_option("--matrix", o.matrix, "Matrix Market file");
    auto* g = cmd->add_option("--gen", o.gen, "generator: poisson2d:<k>, poisson3d:<n>[:<b>], random:<n>:<k>[:<seed>]");
    m->excludes(g);
}

void solver_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--m", o.restart, "GMRES restart length")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", o.tol, "relative residual tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", o.max_iters, "iteration limit")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "seed for random generators");
    cmd->add_option("--groups", o.groups, "workgroups per launch (power of two)");
    cmd->add_option("--group-size", o.group_size, "workgroup size (power of two)");
    cmd->add_option("--format", o.format, "storage format: csr or ell");
}

void fixed_flag(CLI::App* cmd, Options& o) {
    cmd->add_option("--fixed-iters", o.fixed_iters, "run exactly this many iterations");
}

void profile_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--profile", o.profile, "device profile file (key = value)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Pipelined Krylov solvers with launch and transfer accounting", "pkrylov"};
    app.require_subcommand(1);

    auto* solve_cmd = app.add_subcommand("solve", "solve one system and report the run");
    source_flags(solve_cmd, o);
    solver_flags(solve_cmd, o);
    fixed_flag(solve_cmd, o);
    profile_flags(solve_cmd, o);
    solve_cmd->add_option("--method", o.method, "cg, bicgstab or gmres");
    solve_cmd->add_option("--variant", o.variant, "classical or pipelined");

    auto* compare_cmd = app.add_subcommand("compare", "classical against pipelined on one system");
    source_flags(compare_cmd, o);
    solver_flags(compare_cmd, o);
    fixed_flag(compare_cmd, o);
    profile_flags(compare_cmd, o);
    compare_cmd->add_option("--method", o.method, "cg, bicgstab or gmres");
    compare_cmd->add_option("--runs", o.runs, "timed runs per variant")->check(CLI::PositiveNumber);

    auto* bench_cmd = app.add_subcommand("bench", "benchmark sweep written as CSV");
    bench_cmd->add_option("--matrix", o.matrices, "Matrix Market file (repeatable)");
    bench_cmd->add_option("--gen", o.gens, "generator or ladder such as poisson2d:1..4 (repeatable)");
    bench_cmd->add_option("--reference-dir", o.reference_dir, "directory holding the reference .mtx files");
    bench_cmd->add_option("--method", o.methods, "restrict to these methods (repeatable)");
    bench_cmd->add_option("--variant", o.bench_variant, "classical, pipelined or both");
    solver_flags(bench_cmd, o);
    fixed_flag(bench_cmd, o);
    profile_flags(bench_cmd, o);
    bench_cmd->add_option("--runs", o.runs, "timed runs per cell")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--csv", o.csv, "output path (stdout when omitted)");
    bench_cmd->add_option("--jobs", o.jobs, "cells run concurrently")->check(CLI::PositiveNumber);

    auto* model_cmd = app.add_subcommand("model", "latency barrier and predicted speedups");
    profile_flags(model_cmd, o);
    model_cmd->add_option("--launch-latency", o.launch_latency, "seconds");
    model_cmd->add_option("--transfer-latency", o.transfer_latency, "seconds");
    model_cmd->add_option("--bandwidth", o.bandwidth, "device bytes/second");
    model_cmd->add_option("--transfer-bandwidth", o.transfer_bandwidth, "link bytes/second");
    model_cmd->add_option("--method", o.method, "cg, bicgstab or gmres");
    model_cmd->add_option("--gen", o.gens, "sizes, default poisson2d:1..6 (repeatable)");
    model_cmd->add_option("--m", o.restart, "GMRES restart length")->check(CLI::PositiveNumber);
    model_cmd->add_option("--seed", o.seed, "seed for random generators");
    model_cmd->add_option("--groups", o.groups, "workgroups per launch");
    model_cmd->add_option("--group-size", o.group_size, "workgroup size");
    fixed_flag(model_cmd, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "pkrylov: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*solve_cmd) return cmd_solve(o, out);
        if (*compare_cmd) return cmd_compare(o, out);
        if (*bench_cmd) return cmd_bench(o, out, err);
        return cmd_model(o, out);
    } catch (const FlagError& e) {
        err << "pkrylov: " << e.what() << "\n";
        return exit_usage;
    } catch (const PreconditionError& e) {
        err << "pkrylov: " << e.what() << "\n";
        return exit_usage;
    } catch (const pkrylov::ParseError& e) {
        err << "pkrylov: " << e.what() << "\n";
        return exit_file;
    } catch (const RangeError& e) {
        err << "pkrylov: " << e.what() << "\n";
        return exit_file;
    } catch (const IoError& e) {
        err << "pkrylov: " << e.what() << "\n";
        return exit_file;
    } catch (const BreakdownError& e) {
        err << "pkrylov: breakdown: " << e.what() << "\n";
        return exit_breakdown;
    }
}

}  // namespace pkrylov::cli
