// Command-line front end: runs the estimators on the built-in matrix
// families or Matrix Market files and emits flat CSV rows plus a companion
// summary file.
//
// Exit codes: 0 success, 1 invariant violation (shuffle-test), 2 convergence
// criterion failure, 3 parse error, 4 step cap reached.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ruvn/ruvn.hpp"

namespace {

struct MatrixOptions {
    std::string family = "laplacian";
    std::size_t grid_side = 0;
    std::size_t dim = 0;
    std::string path;
    std::string transition = "rownorm";
    double eps = 0.01;
};

void add_matrix_options(CLI::App* cmd, MatrixOptions& opts) {
    cmd->add_option("--family", opts.family, "matrix family")
        ->check(CLI::IsMember({"laplacian", "covariance", "mm"}))
        ->capture_default_str();
    cmd->add_option("--n", opts.grid_side, "grid side (laplacian)");
    cmd->add_option("--d", opts.dim, "dimension (covariance, or laplacian as nx*ny)");
    cmd->add_option("--path", opts.path, "Matrix Market file (family mm)");
    cmd->add_option("--transition", opts.transition, "transition kernel")
        ->check(CLI::IsMember({"rownorm", "blend"}))
        ->capture_default_str();
    cmd->add_option("--eps", opts.eps, "blend weight toward the uniform kernel")
        ->capture_default_str();
}

// Factor d into the most square nx*ny grid available.
std::pair<std::size_t, std::size_t> pick_grid(std::size_t d) {
    std::size_t nx = static_cast<std::size_t>(std::sqrt(static_cast<double>(d)));
    while (nx > 1 && d % nx != 0) --nx;
    return {nx, d / nx};
}

ruvn::Testbed build_testbed(const MatrixOptions& opts, std::string& family_label) {
    if (opts.family == "laplacian") {
        family_label = "laplacian";
        if (opts.grid_side > 0) return ruvn::laplacian_5pt(opts.grid_side);
        if (opts.dim > 0) {
            const auto [nx, ny] = pick_grid(opts.dim);
            return ruvn::laplacian_5pt(nx, ny);
        }
        throw CLI::ValidationError("--n or --d required for the laplacian family");
    }
    if (opts.family == "covariance") {
        family_label = "covariance";
        if (opts.dim == 0) throw CLI::ValidationError("--d required for the covariance family");
        return ruvn::model_covariance(opts.dim);
    }
    family_label = "mm";
    if (opts.path.empty()) throw CLI::ValidationError("--path required for the mm family");
    ruvn::Matrix a = ruvn::read_matrix_market(opts.path);
    ruvn::Matrix b = ruvn::Matrix::identity(a.rows());
    b -= a;
    return {std::move(a), std::move(b)};
}

ruvn::TransitionKernel build_kernel(const MatrixOptions& opts, const ruvn::Matrix& a) {
    if (opts.transition == "rownorm") return ruvn::build_row_normalized(a);
    return ruvn::build_support_extended(a, opts.eps);
}

void write_rows(const std::string& out_path, const std::vector<ruvn::SweepRow>& rows) {
    std::ofstream out(out_path);
    out << ruvn::emit_csv(rows);
    std::ofstream summary(out_path + ".summary.csv");
    summary << ruvn::emit_summary_csv(ruvn::summarize(rows));
}

void write_grid(const std::string& path, const ruvn::Matrix& grid) {
    std::ofstream out(path);
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            if (j) out << ',';
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", grid(i, j));
            out << buf;
        }
        out << '\n';
    }
}

int require_convergence(const ruvn::Matrix& a, const ruvn::TransitionKernel& p, bool verbose) {
    const auto report = ruvn::check_convergence(a, p);
    if (verbose)
        std::cout << "rho_hat=" << report.rho_hat << " converges="
                  << (report.converges ? "yes" : "no")
                  << (report.indeterminate ? " (indeterminate)" : "") << '\n';
    if (!report.converges || report.indeterminate) {
        std::cerr << "convergence criterion failed: rho_hat=" << report.rho_hat << '\n';
        return 2;
    }
    return 0;
}

std::vector<std::uint64_t> multiples(std::size_t d, std::initializer_list<int> factors) {
    std::vector<std::uint64_t> out;
    for (int f : factors) out.push_back(static_cast<std::uint64_t>(f) * d);
    return out;
}

int run_shuffle_suite(std::size_t d, std::uint64_t steps, std::uint64_t seed) {
    using ruvn::BinaryMatrix;
    using ruvn::Permutation;
    std::size_t failures = 0;
    ruvn::Xoshiro256 rng(seed, 0);

    auto random_binary = [&](std::size_t dim) {
        BinaryMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) m(i, j) = rng.next() & 1;
        return m;
    };
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << '\n';
        if (!ok) ++failures;
    };

    { // traced-walk invariants after warm-up
        const ruvn::Matrix a = [&] {
            ruvn::Matrix m(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.uniform01();
            return m;
        }();
        const auto p = ruvn::build_support_extended(a, 0.05);
        std::size_t state = static_cast<std::size_t>(rng.below(d));
        BinaryMatrix pi(d);
        std::vector<bool> visited(d, false);
        bool warm = false, ok = true;
        for (std::uint64_t t = 0; t < steps; ++t) {
            visited[state] = true;
            pi = ruvn::mark_most_recent(pi, state);
            if (!warm && ruvn::warmup_complete(visited)) warm = true;
            if (warm && !pi.postwarmup_invariants_hold()) ok = false;
            state = p.sample(state, rng.uniform01());
        }
        report("post-warm-up invariants over traced walk", ok && warm);
    }

    { // repetition collapse
        bool ok = true;
        for (int trial = 0; trial < 2000; ++trial) {
            const std::size_t dim = 2 + static_cast<std::size_t>(rng.below(4));
            const std::size_t i = static_cast<std::size_t>(rng.below(dim));
            std::vector<std::size_t> seq(static_cast<std::size_t>(rng.below(13)));
            for (auto& s : seq) s = static_cast<std::size_t>(rng.below(dim));
            const BinaryMatrix start = random_binary(dim);
            BinaryMatrix left = ruvn::mark_most_recent(start, i);
            BinaryMatrix right = start;
            for (std::size_t s : seq) {
                left = ruvn::mark_most_recent(left, s);
                right = ruvn::mark_most_recent(right, s);
            }
            if (!(ruvn::mark_most_recent(left, i) == ruvn::mark_most_recent(right, i)))
                ok = false;
        }
        report("repetition collapses to last application", ok);
    }

    { // start independence + image cardinality for small dimensions
        bool ok = true;
        std::size_t factorial = 1;
        for (std::size_t dim = 2; dim <= 5; ++dim) {
            factorial *= dim;
            std::vector<std::size_t> perm(dim);
            for (std::size_t k = 0; k < dim; ++k) perm[k] = k;
            std::set<BinaryMatrix> images;
            do {
                BinaryMatrix a = random_binary(dim), b = random_binary(dim);
                for (std::size_t j : perm) {
                    a = ruvn::mark_most_recent(a, j);
                    b = ruvn::mark_most_recent(b, j);
                }
                if (!(a == b)) ok = false;
                images.insert(a);
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (images.size() != factorial) ok = false;
        }
        report("start independence and d! image cardinality (d<=5)", ok);
    }

    { // commutation with move-to-front
        bool ok = true;
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t dim = 2 + static_cast<std::size_t>(rng.below(5));
            std::vector<std::size_t> recency(dim);
            for (std::size_t k = 0; k < dim; ++k) recency[k] = k;
            for (std::size_t k = dim; k > 1; --k)
                std::swap(recency[k - 1], recency[static_cast<std::size_t>(rng.below(k))]);
            const Permutation sigma(recency);
            const std::size_t j = static_cast<std::size_t>(rng.below(dim));
            if (!(ruvn::mark_most_recent(ruvn::dominance_matrix(sigma), j) ==
                  ruvn::dominance_matrix(ruvn::move_to_front(sigma, j))))
                ok = false;
        }
        report("dominance matrix commutes with move-to-front", ok);
    }

    std::cout << (failures == 0 ? "all sections passed\n"
                                : std::to_string(failures) + " section(s) failed\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo matrix inversion via regenerative weighted walks"};
    app.require_subcommand(1);

    MatrixOptions invert_opts, classic_opts, check_opts;
    std::uint64_t n_target = 0, seed = 42, cap = ruvn::kDefaultStepCap;
    std::uint64_t replications = 0, truncation = 0;
    std::string out_path = "out.csv";

    auto* invert = app.add_subcommand("invert", "regenerative estimate of (I-A)^{-1}");
    add_matrix_options(invert, invert_opts);
    invert->add_option("--N", n_target, "cycle-count target per entry")->required();
    invert->add_option("--seed", seed)->capture_default_str();
    invert->add_option("--cap", cap, "max transitions")->capture_default_str();
    invert->add_option("--out", out_path, "CSV output path")->capture_default_str();

    auto* classic = app.add_subcommand("classic", "truncated baseline estimate");
    add_matrix_options(classic, classic_opts);
    classic->add_option("--R", replications, "replications per row")->required();
    classic->add_option("--rk", truncation, "transitions per replication")->required();
    classic->add_option("--seed", seed)->capture_default_str();
    classic->add_option("--out", out_path, "CSV output path")->capture_default_str();

    auto* check = app.add_subcommand("check", "print the convergence criterion verdict");
    add_matrix_options(check, check_opts);

    std::size_t sweep_figure = 13, sweep_d = 0;
    std::uint32_t sweep_seeds = 10;
    auto* sweep = app.add_subcommand("sweep", "reproduce an experiment family");
    sweep->add_option("--figure", sweep_figure, "experiment id: 1,2,3,4,13")
        ->check(CLI::IsMember({1, 2, 3, 4, 13}))
        ->capture_default_str();
    sweep->add_option("--d", sweep_d, "matrix dimension (default per figure)");
    sweep->add_option("--seeds", sweep_seeds, "replications per configuration")
        ->capture_default_str();
    sweep->add_option("--seed", seed, "base seed")->capture_default_str();
    sweep->add_option("--out", out_path, "CSV output path")->capture_default_str();

    std::string katz_path;
    MatrixOptions katz_opts;
    auto* katz = app.add_subcommand("katz", "centrality estimate from a Matrix Market graph");
    katz->add_option("--path", katz_path, "Matrix Market adjacency file")->required();
    katz->add_option("--N", n_target, "cycle-count target per entry")->required();
    katz->add_option("--seed", seed)->capture_default_str();
    katz->add_option("--cap", cap)->capture_default_str();
    katz->add_option("--out", out_path, "CSV output path")->capture_default_str();
    katz->add_option("--transition", katz_opts.transition, "transition kernel")
        ->check(CLI::IsMember({"rownorm", "blend"}))
        ->capture_default_str();
    katz->add_option("--eps", katz_opts.eps)->capture_default_str();

    std::size_t shuffle_d = 6;
    std::uint64_t shuffle_steps = 10000;
    auto* shuffle = app.add_subcommand("shuffle-test", "run the recency-operator invariants");
    shuffle->add_option("--d", shuffle_d)->capture_default_str();
    shuffle->add_option("--steps", shuffle_steps)->capture_default_str();
    shuffle->add_option("--seed", seed)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (invert->parsed()) {
            std::string family;
            const ruvn::Testbed tb = build_testbed(invert_opts, family);
            const auto kernel = build_kernel(invert_opts, tb.a);
            if (int rc = require_convergence(tb.a, kernel, true)) return rc;
            const ruvn::Matrix c_true = ruvn::exact_inverse(tb.b);
            const auto rc = ruvn::run_regen_case("invert", family, tb, c_true, kernel,
                                                 n_target, seed, 0, 0, cap);
            write_rows(out_path, {rc.row});
            std::cout << "d=" << rc.row.d << " N=" << n_target << " K=" << rc.row.steps
                      << " accesses=" << rc.row.accesses << " rel_frob=" << rc.row.rel_frob
                      << " rel_trace=" << rc.row.rel_trace << " flagged=" << rc.row.flagged
                      << '\n';
            if (rc.report.cap_reached) {
                std::cerr << "step cap reached before the cycle-count target\n";
                return 4;
            }
            return 0;
        }

        if (classic->parsed()) {
            std::string family;
            const ruvn::Testbed tb = build_testbed(classic_opts, family);
            const auto kernel = build_kernel(classic_opts, tb.a);
            if (int rc = require_convergence(tb.a, kernel, true)) return rc;
            const ruvn::Matrix c_true = ruvn::exact_inverse(tb.b);
            const auto row = ruvn::run_classic_case("classic", family, tb, c_true, kernel,
                                                    replications, truncation, seed, 0);
            write_rows(out_path, {row});
            std::cout << "d=" << row.d << " R=" << replications << " rk=" << truncation
                      << " accesses=" << row.accesses << " rel_frob=" << row.rel_frob << '\n';
            return 0;
        }

        if (check->parsed()) {
            std::string family;
            const ruvn::Testbed tb = build_testbed(check_opts, family);
            const auto kernel = build_kernel(check_opts, tb.a);
            return require_convergence(tb.a, kernel, true);
        }

        if (sweep->parsed()) {
            std::vector<ruvn::SweepRow> rows;
            if (sweep_figure == 1 || sweep_figure == 2) {
                const std::size_t d = sweep_d ? sweep_d : 6;
                const bool laplacian = sweep_figure == 1;
                std::string family = laplacian ? "laplacian" : "covariance";
                const ruvn::Testbed tb = laplacian
                                             ? ruvn::laplacian_5pt(pick_grid(d).first,
                                                                   pick_grid(d).second)
                                             : ruvn::model_covariance(d);
                const auto kernel = ruvn::build_row_normalized(tb.a);
                if (int rc = require_convergence(tb.a, kernel, false)) return rc;
                const auto sweep_out = ruvn::error_grid_sweep(
                    laplacian ? "fig1" : "fig2", family, tb, kernel,
                    multiples(d, {1, 2, 4, 8}), sweep_seeds, seed);
                rows = sweep_out.rows;
                const auto stem = out_path.substr(0, out_path.rfind('.'));
                for (const auto& [n, grid] : sweep_out.grids)
                    write_grid(stem + "_N" + std::to_string(n) + ".grid.csv", grid);
            } else if (sweep_figure == 3) {
                const std::size_t d = sweep_d ? sweep_d : 128;
                for (const bool laplacian : {true, false}) {
                    const ruvn::Testbed tb = laplacian
                                                 ? ruvn::laplacian_5pt(pick_grid(d).first,
                                                                       pick_grid(d).second)
                                                 : ruvn::model_covariance(d);
                    const auto kernel = ruvn::build_row_normalized(tb.a);
                    const auto verdict = ruvn::check_convergence(tb.a, kernel);
                    if (!verdict.converges || verdict.indeterminate) {
                        std::cerr << (laplacian ? "laplacian" : "covariance") << " at d=" << d
                                  << " fails the convergence criterion (rho_hat="
                                  << verdict.rho_hat << "); skipping\n";
                        continue;
                    }
                    const auto part = ruvn::metric_sweep(
                        "fig3", laplacian ? "laplacian" : "covariance", tb, kernel,
                        multiples(d, {1, 2, 3, 4, 5, 6}), sweep_seeds, seed);
                    rows.insert(rows.end(), part.begin(), part.end());
                }
                if (rows.empty()) return 2;
            } else if (sweep_figure == 4) {
                const std::size_t d = sweep_d ? sweep_d : 128;
                const auto [nx, ny] = pick_grid(d);
                const ruvn::Testbed tb = ruvn::laplacian_5pt(nx, ny);
                const auto kernel = ruvn::build_row_normalized(tb.a);
                if (int rc = require_convergence(tb.a, kernel, false)) return rc;
                rows = ruvn::metric_sweep("fig4", "laplacian", tb, kernel,
                                          multiples(d, {1, 2, 3, 4, 5, 6}), sweep_seeds, seed);
            } else {
                const std::size_t d = sweep_d ? sweep_d : 64;
                const auto [nx, ny] = pick_grid(d);
                const ruvn::Testbed tb = ruvn::laplacian_5pt(nx, ny);
                const auto kernel = ruvn::build_row_normalized(tb.a);
                if (int rc = require_convergence(tb.a, kernel, false)) return rc;
                rows = ruvn::error_vs_access_sweep("laplacian", tb, kernel,
                                                   multiples(d, {1, 2, 3}),
                                                   multiples(d, {1, 2}),
                                                   multiples(d, {1, 2, 3, 4, 5, 6}),
                                                   sweep_seeds, seed);
            }
            write_rows(out_path, rows);
            std::cout << rows.size() << " rows -> " << out_path << '\n';
            return 0;
        }

        if (katz->parsed()) {
            const ruvn::Matrix adj = ruvn::read_matrix_market(katz_path);
            std::cout << "parsed " << adj.rows() << "x" << adj.cols() << " graph with "
                      << ruvn::nonzero_count(adj) << " nonzeros\n";
            const auto sys = ruvn::katz_matrix(adj);
            std::cout << "alpha=" << sys.alpha << '\n';
            const auto kernel = katz_opts.transition == "rownorm"
                                    ? ruvn::build_row_normalized(sys.a)
                                    : ruvn::build_support_extended(sys.a, katz_opts.eps);
            if (int rc = require_convergence(sys.a, kernel, true)) return rc;
            const auto kc = ruvn::run_katz_case(sys, kernel, n_target, seed, 0, 0, cap);
            write_rows(out_path, {kc.row});
            std::cout << "K=" << kc.row.steps << " rel_frob=" << kc.row.rel_frob
                      << " centrality_rel_err=" << kc.row.rel_trace
                      << " ranked_correct=" << kc.ranked_correct << "/" << kc.row.d << '\n';
            return 0;
        }

        if (shuffle->parsed()) return run_shuffle_suite(shuffle_d, shuffle_steps, seed);
    } catch (const ruvn::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 3;
    } catch (const ruvn::UnsupportedFormatError& e) {
        std::cerr << "unsupported format: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
