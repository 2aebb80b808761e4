#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ruvn/classic.hpp"
#include "ruvn/linalg.hpp"
#include "ruvn/metrics.hpp"
#include "ruvn/regen.hpp"
#include "ruvn/testbeds.hpp"
#include "ruvn/transition.hpp"

namespace ruvn {

/// One experiment measurement. Column order in the CSV is fixed:
/// experiment,family,d,param,value,seed,rep,rel_frob,rel_trace,accesses,K,flagged,ms
struct SweepRow {
    std::string experiment;
    std::string family;
    std::size_t d = 0;
    std::string param;
    std::string value;
    std::uint64_t seed = 0;
    std::uint32_t rep = 0;
    double rel_frob = 0.0;
    double rel_trace = 0.0;
    std::uint64_t accesses = 0;
    std::uint64_t steps = 0; // the K column
    std::size_t flagged = 0;
    double ms = 0.0;

    friend bool operator==(const SweepRow& a, const SweepRow& b) {
        return a.experiment == b.experiment && a.family == b.family && a.d == b.d &&
               a.param == b.param && a.value == b.value && a.seed == b.seed && a.rep == b.rep &&
               a.rel_frob == b.rel_frob && a.rel_trace == b.rel_trace &&
               a.accesses == b.accesses && a.steps == b.steps && a.flagged == b.flagged &&
               a.ms == b.ms;
    }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

} // namespace detail

inline const char* kSweepCsvHeader =
    "experiment,family,d,param,value,seed,rep,rel_frob,rel_trace,accesses,K,flagged,ms";

inline std::string emit_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& r : rows) {
        out << r.experiment << ',' << r.family << ',' << r.d << ',' << r.param << ','
            << r.value << ',' << r.seed << ',' << r.rep << ','
            << detail::format_double(r.rel_frob) << ',' << detail::format_double(r.rel_trace)
            << ',' << r.accesses << ',' << r.steps << ',' << r.flagged << ','
            << detail::format_double(r.ms) << '\n';
    }
    return out.str();
}

inline std::vector<SweepRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader)
        throw ParseError(1, "unexpected CSV header");
    std::vector<SweepRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 13) throw ParseError(lineno, "expected 13 fields");
        SweepRow r;
        r.experiment = f[0];
        r.family = f[1];
        r.d = std::stoull(f[2]);
        r.param = f[3];
        r.value = f[4];
        r.seed = std::stoull(f[5]);
        r.rep = static_cast<std::uint32_t>(std::stoul(f[6]));
        r.rel_frob = std::stod(f[7]);
        r.rel_trace = std::stod(f[8]);
        r.accesses = std::stoull(f[9]);
        r.steps = std::stoull(f[10]);
        r.flagged = std::stoull(f[11]);
        r.ms = std::stod(f[12]);
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Mean and sample standard error over the rows of one configuration.
struct SummaryRow {
    std::string experiment;
    std::string family;
    std::size_t d = 0;
    std::string param;
    std::string value;
    std::size_t reps = 0;
    double mean_rel_frob = 0.0;
    double se_rel_frob = 0.0;
    double mean_rel_trace = 0.0;
    double se_rel_trace = 0.0;
    double mean_accesses = 0.0;
    double mean_steps = 0.0;
    std::size_t flagged_total = 0;
};

inline std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows) {
    std::vector<SummaryRow> out;
    std::map<std::string, std::size_t> index;
    for (const SweepRow& r : rows) {
        const std::string key =
            r.experiment + '|' + r.family + '|' + std::to_string(r.d) + '|' + r.param + '|' +
            r.value;
        auto [it, fresh] = index.emplace(key, out.size());
        if (fresh) {
            SummaryRow s;
            s.experiment = r.experiment;
            s.family = r.family;
            s.d = r.d;
            s.param = r.param;
            s.value = r.value;
            out.push_back(std::move(s));
        }
        SummaryRow& s = out[it->second];
        ++s.reps;
        s.mean_rel_frob += r.rel_frob;
        s.mean_rel_trace += r.rel_trace;
        s.mean_accesses += static_cast<double>(r.accesses);
        s.mean_steps += static_cast<double>(r.steps);
        s.flagged_total += r.flagged;
    }
    for (SummaryRow& s : out) {
        const double n = static_cast<double>(s.reps);
        s.mean_rel_frob /= n;
        s.mean_rel_trace /= n;
        s.mean_accesses /= n;
        s.mean_steps /= n;
    }
    // Second pass for the sample standard errors.
    for (SummaryRow& s : out) {
        if (s.reps < 2) continue;
        double var_f = 0.0, var_t = 0.0;
        for (const SweepRow& r : rows) {
            if (r.experiment != s.experiment || r.family != s.family || r.d != s.d ||
                r.param != s.param || r.value != s.value)
                continue;
            var_f += (r.rel_frob - s.mean_rel_frob) * (r.rel_frob - s.mean_rel_frob);
            var_t += (r.rel_trace - s.mean_rel_trace) * (r.rel_trace - s.mean_rel_trace);
        }
        const double n = static_cast<double>(s.reps);
        s.se_rel_frob = std::sqrt(var_f / (n - 1.0) / n);
        s.se_rel_trace = std::sqrt(var_t / (n - 1.0) / n);
    }
    return out;
}

inline std::string emit_summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "experiment,family,d,param,value,reps,mean_rel_frob,se_rel_frob,mean_rel_trace,"
           "se_rel_trace,mean_accesses,mean_K,flagged_total\n";
    for (const SummaryRow& s : rows) {
        out << s.experiment << ',' << s.family << ',' << s.d << ',' << s.param << ',' << s.value
            << ',' << s.reps << ',' << detail::format_double(s.mean_rel_frob) << ','
            << detail::format_double(s.se_rel_frob) << ','
            << detail::format_double(s.mean_rel_trace) << ','
            << detail::format_double(s.se_rel_trace) << ','
            << detail::format_double(s.mean_accesses) << ','
            << detail::format_double(s.mean_steps) << ',' << s.flagged_total << '\n';
    }
    return out.str();
}

namespace detail {

/// Index-sharded thread fan-out; each task writes only its own slots.
template <typename Fn>
void parallel_for_index(std::size_t count, Fn&& fn) {
    const std::size_t hw = std::thread::hardware_concurrency();
    const std::size_t workers = std::min<std::size_t>(count, hw ? hw : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace detail

/// One run of the regenerative estimator, measured against the exact inverse.
struct RegenCase {
    SweepRow row;
    EstimateReport report;
};

inline RegenCase run_regen_case(const std::string& experiment, const std::string& family,
                                const Testbed& tb, const Matrix& c_true,
                                const TransitionKernel& p, std::uint64_t n, std::uint64_t seed,
                                std::uint32_t rep, std::uint64_t stream,
                                std::uint64_t cap = kDefaultStepCap) {
    CountedMatrixOracle oracle(tb.a);
    const auto t0 = std::chrono::steady_clock::now();
    RegenState st = regen_run(oracle, p, n, cap, seed, stream);
    EstimateReport report = assemble_estimate(st);
    const auto t1 = std::chrono::steady_clock::now();

    SweepRow row;
    row.experiment = experiment;
    row.family = family;
    row.d = p.dim();
    row.param = "N";
    row.value = std::to_string(n);
    row.seed = seed;
    row.rep = rep;
    row.rel_frob = rel_frobenius_error(c_true, report.c_hat, report.flagged);
    row.rel_trace = std::abs(rel_trace_error(c_true, report.c_hat, report.flagged));
    row.accesses = report.accesses;
    row.steps = report.steps;
    row.flagged = report.flagged.count();
    row.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return {std::move(row), std::move(report)};
}

/// One run of the truncated baseline over all starting rows.
inline SweepRow run_classic_case(const std::string& experiment, const std::string& family,
                                 const Testbed& tb, const Matrix& c_true,
                                 const TransitionKernel& p, std::uint64_t replications,
                                 std::uint64_t truncation, std::uint64_t seed,
                                 std::uint32_t rep) {
    CountedMatrixOracle oracle(tb.a);
    ClassicConfig cfg{replications, truncation, seed};
    const auto t0 = std::chrono::steady_clock::now();
    ClassicReport report = classic_estimate_matrix(oracle, p, cfg);
    const auto t1 = std::chrono::steady_clock::now();

    SweepRow row;
    row.experiment = experiment;
    row.family = family;
    row.d = p.dim();
    row.param = "R:rk";
    row.value = std::to_string(replications) + "x" + std::to_string(truncation);
    row.seed = seed;
    row.rep = rep;
    row.rel_frob = rel_frobenius_error(c_true, report.c_hat, report.flagged);
    row.rel_trace = std::abs(rel_trace_error(c_true, report.c_hat, report.flagged));
    row.accesses = report.accesses;
    row.steps = report.accesses; // one transition per access in the baseline
    row.flagged = report.flagged.count();
    row.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return row;
}

/// Error-versus-accesses comparison: every classic (R, r_k) pair and every
/// regenerative N, `seeds` replications each. Streams are split per
/// (configuration, replication); classic replications re-key the base seed.
inline std::vector<SweepRow> error_vs_access_sweep(
    const std::string& family, const Testbed& tb, const TransitionKernel& p,
    const std::vector<std::uint64_t>& classic_replications,
    const std::vector<std::uint64_t>& classic_truncations,
    const std::vector<std::uint64_t>& regen_ns, std::uint32_t seeds, std::uint64_t base_seed,
    std::uint64_t cap = kDefaultStepCap) {
    const Matrix c_true = exact_inverse(tb.b);

    struct Task {
        bool classic;
        std::uint64_t a; // R or N
        std::uint64_t b; // r_k (classic only)
        std::uint32_t rep;
        std::uint64_t stream;
    };
    std::vector<Task> tasks;
    std::uint64_t config = 0;
    for (std::uint64_t r : classic_replications)
        for (std::uint64_t rk : classic_truncations) {
            for (std::uint32_t rep = 0; rep < seeds; ++rep)
                tasks.push_back({true, r, rk, rep, config * 1000003ULL + rep});
            ++config;
        }
    for (std::uint64_t n : regen_ns) {
        for (std::uint32_t rep = 0; rep < seeds; ++rep)
            tasks.push_back({false, n, 0, rep, config * 1000003ULL + rep});
        ++config;
    }

    std::vector<SweepRow> rows(tasks.size());
    detail::parallel_for_index(tasks.size(), [&](std::size_t t) {
        const Task& task = tasks[t];
        if (task.classic) {
            // The baseline has no stream parameter; fold the task stream into the seed.
            rows[t] = run_classic_case("fig13", family, tb, c_true, p, task.a, task.b,
                                       base_seed + task.stream, task.rep);
        } else {
            rows[t] = run_regen_case("fig13", family, tb, c_true, p, task.a, base_seed,
                                     task.rep, task.stream, cap)
                          .row;
        }
    });
    return rows;
}

/// Entrywise mean |C_true - C_hat| heat grids, one per N (the d=6 picture).
/// Flagged entries are left out of the mean; entries flagged in every run
/// come back as NaN.
struct ErrorGridSweep {
    std::vector<SweepRow> rows;
    std::vector<std::pair<std::uint64_t, Matrix>> grids; // (N, d x d mean abs error)
};

inline ErrorGridSweep error_grid_sweep(const std::string& experiment, const std::string& family,
                                       const Testbed& tb, const TransitionKernel& p,
                                       const std::vector<std::uint64_t>& regen_ns,
                                       std::uint32_t seeds, std::uint64_t base_seed,
                                       std::uint64_t cap = kDefaultStepCap) {
    const Matrix c_true = exact_inverse(tb.b);
    const std::size_t d = p.dim();

    struct Slot {
        SweepRow row;
        Matrix abs_err;
        FlagMask flagged;
    };
    std::vector<Slot> slots(regen_ns.size() * seeds);
    detail::parallel_for_index(slots.size(), [&](std::size_t t) {
        const std::size_t cfg = t / seeds;
        const std::uint32_t rep = static_cast<std::uint32_t>(t % seeds);
        RegenCase rc = run_regen_case(experiment, family, tb, c_true, p, regen_ns[cfg],
                                      base_seed, rep, cfg * 1000003ULL + rep, cap);
        Matrix abs_err(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                abs_err(i, j) = rc.report.flagged.test(i, j)
                                    ? 0.0
                                    : std::abs(c_true(i, j) - rc.report.c_hat(i, j));
        slots[t] = {std::move(rc.row), std::move(abs_err), rc.report.flagged};
    });

    ErrorGridSweep out;
    for (std::size_t cfg = 0; cfg < regen_ns.size(); ++cfg) {
        Matrix mean(d, d);
        Matrix kept(d, d);
        for (std::uint32_t rep = 0; rep < seeds; ++rep) {
            const Slot& slot = slots[cfg * seeds + rep];
            out.rows.push_back(slot.row);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    if (!slot.flagged.test(i, j)) {
                        mean(i, j) += slot.abs_err(i, j);
                        kept(i, j) += 1.0;
                    }
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                mean(i, j) = kept(i, j) > 0.0
                                 ? mean(i, j) / kept(i, j)
                                 : std::numeric_limits<double>::quiet_NaN();
        out.grids.emplace_back(regen_ns[cfg], std::move(mean));
    }
    return out;
}

/// Plain metric sweep over an N grid (relative Frobenius / trace errors, K).
inline std::vector<SweepRow> metric_sweep(const std::string& experiment,
                                          const std::string& family, const Testbed& tb,
                                          const TransitionKernel& p,
                                          const std::vector<std::uint64_t>& regen_ns,
                                          std::uint32_t seeds, std::uint64_t base_seed,
                                          std::uint64_t cap = kDefaultStepCap) {
    const Matrix c_true = exact_inverse(tb.b);
    std::vector<SweepRow> rows(regen_ns.size() * seeds);
    detail::parallel_for_index(rows.size(), [&](std::size_t t) {
        const std::size_t cfg = t / seeds;
        const std::uint32_t rep = static_cast<std::uint32_t>(t % seeds);
        rows[t] = run_regen_case(experiment, family, tb, c_true, p, regen_ns[cfg], base_seed,
                                 rep, cfg * 1000003ULL + rep, cap)
                      .row;
    });
    return rows;
}

/// One centrality run: matrix error in rel_frob, centrality-vector relative
/// error in rel_trace (documented in the README), plus the rank-agreement
/// count against the exact solution.
struct KatzCase {
    SweepRow row;
    std::vector<double> x_true;
    std::vector<double> x_est;
    std::size_t ranked_correct = 0;
};

inline KatzCase run_katz_case(const KatzSystem& sys, const TransitionKernel& p, std::uint64_t n,
                              std::uint64_t seed, std::uint32_t rep, std::uint64_t stream,
                              std::uint64_t cap = kDefaultStepCap) {
    const std::size_t d = sys.a.rows();
    const Matrix c_true = exact_inverse(sys.b);

    Testbed tb{sys.a, sys.b};
    RegenCase rc = run_regen_case("fig5", "katz", tb, c_true, p, n, seed, rep, stream, cap);

    KatzCase out;
    out.x_true.assign(d, 0.0);
    out.x_est.assign(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out.x_true[i] += c_true(i, j);
            if (!rc.report.flagged.test(i, j)) out.x_est[i] += rc.report.c_hat(i, j);
        }
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        num += (out.x_true[i] - out.x_est[i]) * (out.x_true[i] - out.x_est[i]);
        den += out.x_true[i] * out.x_true[i];
    }
    rc.row.rel_trace = std::sqrt(num) / std::sqrt(den);
    out.ranked_correct = ranking_agreement(out.x_true, out.x_est);
    out.row = std::move(rc.row);
    return out;
}

} // namespace ruvn
