#include "tailsum/cli/commands.hpp"

#include "tailsum/baselines.hpp"
#include "tailsum/errors.hpp"
#include "tailsum/levy.hpp"
#include "tailsum/montecarlo.hpp"
#include "tailsum/perturbative.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace tailsum::cli {

namespace {

ResultRow base_row(const RunConfig& cfg, double alpha) {
    ResultRow r;
    r.severity = cfg.severity.name();
    r.severity_params = cfg.severity.params();
    r.frequency = cfg.frequency.name();
    r.frequency_params = cfg.frequency.params();
    r.alpha = alpha;
    return r;
}

std::vector<double> sorted_alphas(const RunConfig& cfg) {
    std::vector<double> a = cfg.alphas;
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::set<MethodId> expand_methods(const RunConfig& cfg) {
    std::set<MethodId> ids;
    for (const auto& m : cfg.methods) {
        if (m.id.method == Method::pert && !m.explicit_order)
            for (int k : cfg.orders)
                ids.insert({Method::pert, k});
        else
            ids.insert(m.id);
    }
    return ids;
}

struct OracleValue {
    double value = 0.0;
    std::string kind;
    std::optional<double> ci_low, ci_high;
    std::optional<std::uint64_t> seed;
};

// One oracle per alpha. Errors (e.g. a too small MC budget) are kept as codes.
std::map<double, OracleValue> compute_oracles(const RunConfig& cfg, const std::vector<double>& alphas,
                                              unsigned mc_threads, std::string& oracle_error) {
    std::map<double, OracleValue> out;
    if (alphas.empty())
        return out;
    bool all_exact = true;
    for (double a : alphas) {
        if (const auto q = exact_oracle(cfg, a))
            out[a] = {*q, "exact", std::nullopt, std::nullopt, std::nullopt};
        else
            all_exact = false;
    }
    if (all_exact || !cfg.mc)
        return out;
    MonteCarloSettings s;
    s.n_samples = cfg.mc->n_samples;
    s.seed = cfg.mc->seed;
    s.chunks = cfg.mc->chunks;
    s.threads = mc_threads;
    try {
        const auto est = percentile_estimates(cfg.severity, cfg.frequency, alphas, s);
        for (const auto& e : est)
            out[e.alpha] = {e.point, "mc", e.ci_low, e.ci_high, e.seed};
    } catch (const tailsum::Error& e) {
        oracle_error = e.code();
    }
    return out;
}

// All PERT orders at one alpha come from a single evaluation at the highest
// order; the divergence guard is then applied per requested order.
struct PertCache {
    std::optional<PerturbativeSeries> series;
    std::string error;
};

PertCache pert_series(const RunConfig& cfg, double alpha, int order) {
    PertCache c;
    EngineOptions opts;
    opts.divergence_guard = false;
    try {
        if (cfg.frequency.kind() == FrequencyKind::deterministic)
            c.series = terms_deterministic(cfg.severity, static_cast<int>(cfg.frequency.param1()),
                                           alpha, order, opts);
        else
            c.series = terms_random(cfg.severity, cfg.frequency, alpha, order, opts);
    } catch (const tailsum::Error& e) {
        c.error = e.code();
    }
    return c;
}

std::vector<ResultRow> approx_rows(const RunConfig& cfg, unsigned mc_threads) {
    const auto alphas = sorted_alphas(cfg);
    const auto ids = expand_methods(cfg);
    std::vector<ResultRow> rows;
    if (ids.empty())
        return rows;

    std::string oracle_error;
    const auto oracles = compute_oracles(cfg, alphas, mc_threads, oracle_error);

    int max_pert = -1;
    for (const auto& id : ids)
        if (id.method == Method::pert)
            max_pert = std::max(max_pert, id.order);
    std::map<double, PertCache> pert;
    if (max_pert >= 0)
        for (double a : alphas)
            pert[a] = pert_series(cfg, a, max_pert);

    for (const auto& id : ids) {
        for (double a : alphas) {
            ResultRow r = base_row(cfg, a);
            r.method = method_name(id);
            if (id.method == Method::pert) {
                r.order = id.order;
                const auto& c = pert.at(a);
                if (!c.series) {
                    r.error = c.error;
                } else {
                    const auto& ratios = c.series->ratios;
                    const bool blown = std::any_of(ratios.begin(), ratios.begin() + id.order + 1,
                                                   [](double q) { return q > 10.0; });
                    if (blown)
                        r.error = InstabilityError("").code();
                    else
                        r.estimate = c.series->partials[id.order];
                }
            } else {
                try {
                    r.estimate = evaluate_method(id, cfg.severity, cfg.frequency, a).value;
                } catch (const tailsum::Error& e) {
                    r.error = e.code();
                }
            }
            if (const auto it = oracles.find(a); it != oracles.end()) {
                attach_oracle(r, it->second.value, it->second.kind);
                r.ci_low = it->second.ci_low;
                r.ci_high = it->second.ci_high;
                r.seed = it->second.seed;
            } else if (r.error.empty() && !oracle_error.empty()) {
                r.error = oracle_error;
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

} // namespace

std::optional<double> exact_oracle(const RunConfig& cfg, double alpha) {
    if (cfg.frequency.kind() != FrequencyKind::deterministic)
        return std::nullopt;
    const int n = static_cast<int>(cfg.frequency.param1());
    if (cfg.severity.kind() == SeverityKind::levy)
        return levy::exact_quantile({cfg.severity.parameter(), n}, alpha);
    if (n == 1)
        return cfg.severity.quantile(alpha);
    return std::nullopt;
}

std::vector<ResultRow> run_approx(const RunConfig& cfg) { return approx_rows(cfg, 0); }

std::vector<ResultRow> run_sweep(const RunConfig& cfg) {
    if (!cfg.sweep)
        throw ConfigError(0, "", "sweep requires a [sweep] section");
    const auto& sw = *cfg.sweep;
    if (sw.axis == SweepAxis::alpha) {
        RunConfig c = cfg;
        c.alphas = sw.values;
        return approx_rows(c, 0);
    }
    if (sw.axis == SweepAxis::order) {
        RunConfig c = cfg;
        c.orders.clear();
        for (double v : sw.values)
            c.orders.push_back(static_cast<int>(v));
        return approx_rows(c, 0);
    }

    const std::size_t points = sw.values.size();
    std::vector<std::vector<ResultRow>> parts(points);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(default_worker_count(), points));
    // With several grid points in flight, each Monte Carlo run stays single-threaded.
    const unsigned mc_threads = workers > 1 ? 1 : 0;
    auto run_point = [&](std::size_t i) {
        parts[i] = approx_rows(apply_sweep_value(cfg, sw.axis, sw.values[i]), mc_threads);
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < points; ++i)
            run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> failures(points);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < points; i = next++) {
                    try {
                        run_point(i);
                    } catch (...) {
                        failures[i] = std::current_exception();
                    }
                }
            });
        for (auto& t : pool)
            t.join();
        for (const auto& f : failures)
            if (f)
                std::rethrow_exception(f);
    }
    std::vector<ResultRow> rows;
    for (auto& p : parts)
        rows.insert(rows.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    return rows;
}

std::vector<ResultRow> run_mc(const RunConfig& cfg) {
    if (!cfg.mc)
        throw ConfigError(0, "", "mc requires an [mc] section");
    const auto alphas = sorted_alphas(cfg);
    MonteCarloSettings s;
    s.n_samples = cfg.mc->n_samples;
    s.seed = cfg.mc->seed;
    s.chunks = cfg.mc->chunks;
    std::vector<ResultRow> rows;
    std::vector<MonteCarloEstimate> est;
    std::string error;
    try {
        est = percentile_estimates(cfg.severity, cfg.frequency, alphas, s);
    } catch (const tailsum::Error& e) {
        error = e.code();
    }
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        ResultRow r = base_row(cfg, alphas[i]);
        r.method = "MC";
        r.seed = s.seed;
        if (!error.empty()) {
            r.error = error;
        } else {
            r.estimate = est[i].point;
            r.ci_low = est[i].ci_low;
            r.ci_high = est[i].ci_high;
        }
        if (const auto q = exact_oracle(cfg, alphas[i]))
            attach_oracle(r, *q, "exact");
        rows.push_back(std::move(r));
    }
    return rows;
}

int run_command(Command cmd, const CommandOptions& opts, std::ostream& err) {
    RunConfig cfg;
    std::vector<ResultRow> rows;
    try {
        cfg = load_config(opts.config_path);
        if (opts.seed && cfg.mc)
            cfg.mc->seed = *opts.seed;
        switch (cmd) {
        case Command::approx:
            rows = run_approx(cfg);
            break;
        case Command::sweep:
            rows = run_sweep(cfg);
            break;
        case Command::mc:
            rows = run_mc(cfg);
            break;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return 3;
    }

    for (const auto& r : rows)
        if (r.error == "insufficient_samples" && cfg.mc) {
            const double worst = *std::max_element(cfg.alphas.begin(), cfg.alphas.end());
            err << "warning: Monte Carlo budget too small; alpha = " << worst << " needs at least "
                << static_cast<std::uint64_t>(std::ceil(100.0 / (1.0 - worst))) << " samples\n";
            break;
        }

    std::ostringstream buf;
    write_csv(buf, rows);
    const std::string path = opts.out ? *opts.out : cfg.output;
    if (path.empty() || path == "-") {
        std::cout << buf.str() << std::flush;
        return std::cout ? 0 : 3;
    }
    std::ofstream out(path, std::ios::binary);
    out << buf.str();
    out.close();
    if (!out) {
        err << "i/o error: cannot write '" << path << "'\n";
        return 3;
    }
    return 0;
}

} // namespace tailsum::cli
