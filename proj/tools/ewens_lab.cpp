// ewens_lab: command-line front end for the experiments in libewens.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ewens/acceptance.hpp"
#include "ewens/esf.hpp"
#include "ewens/fourier.hpp"
#include "ewens/invgen.hpp"
#include "ewens/parallel.hpp"
#include "ewens/perm_stats.hpp"
#include "ewens/poisson.hpp"
#include "ewens/sumset.hpp"

#ifndef EWENS_GIT_DESCRIBE
#define EWENS_GIT_DESCRIBE "unknown"
#endif

using nlohmann::json;
using namespace ewens;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitAcceptance = 2;
constexpr std::uint64_t kDefaultSeed = 1;

struct Options {
    std::vector<double> alpha{1.0};
    std::size_t n = 0;
    unsigned m = 2;
    std::size_t window = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 0;
    std::string out;
    std::string format = "csv";
    // subcommand specific
    double beta = 0.5;
    std::size_t k = 0;
    std::string classes;
    std::string mode;
    std::vector<int> only;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;
};

std::string cell_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.header[i]] = row[i];
        rows.push_back(std::move(r));
    }
    return rows;
}

json h_json(const HValue& h) { return h.infinite ? json("inf") : json(h.value); }

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json manifest(const std::string& command, const Options& o, const json& params, double wall) {
    return {{"command", command},
            {"parameters", params},
            {"seed", o.seed},
            {"workers", parallel::workers()},
            {"git_describe", EWENS_GIT_DESCRIBE},
            {"wall_time_seconds", wall},
            {"timestamp", utc_timestamp()}};
}

void emit(const std::string& command, const Options& o, const json& params, const Table& table, double wall) {
    const json man = manifest(command, o, params, wall);
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw std::runtime_error("cannot open output file " + o.out);
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    if (o.format == "json") {
        os << json{{"manifest", man}, {"rows", table_json(table)}}.dump(2) << '\n';
        return;
    }
    write_csv(os, table);
    if (!o.out.empty()) {
        std::ofstream side(o.out + ".manifest.json");
        side << man.dump(2) << '\n';
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

double single_alpha(const Options& o) {
    require(o.alpha.size() == 1, "this subcommand takes a single --alpha");
    require(o.alpha[0] > 0.0, "--alpha must be positive");
    return o.alpha[0];
}

std::uint64_t trials_or(const Options& o, std::uint64_t fallback) { return o.trials ? o.trials : fallback; }

// ---------------------------------------------------------------------------

int cmd_sample(const Options& o) {
    const double alpha = single_alpha(o);
    require(o.n >= 1, "sample: --n must be at least 1");
    const std::uint64_t trials = trials_or(o, 1);
    const EwensParams params(alpha, o.n);
    const auto t0 = std::chrono::steady_clock::now();
    const Rng rng(o.seed);
    const bool dense = o.n <= 64;
    Table t;
    t.header = {"trial"};
    if (dense) {
        for (std::size_t l = 1; l <= o.n; ++l) t.header.push_back("C_" + std::to_string(l));
    } else {
        t.header.insert(t.header.end(), {"num_cycles", "odd", "cycle_type"});
    }
    for (std::uint64_t i = 0; i < trials; ++i) {
        Rng r = rng.split(i);
        const CycleType ct = sample_cycle_type(params, r);
        std::vector<json> row{i};
        if (dense) {
            const auto c = ct.dense();
            for (std::size_t l = 1; l <= o.n; ++l) row.emplace_back(c[l]);
        } else {
            row.emplace_back(ct.num_cycles());
            row.emplace_back(parity(ct) == Parity::odd ? 1 : 0);
            row.emplace_back(ct.to_string());
        }
        t.rows.push_back(std::move(row));
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit("sample", o, {{"alpha", alpha}, {"n", o.n}, {"trials", trials}}, t, wall);
    return 0;
}

std::vector<json> estimate_row(const std::string& name, double threshold, const Estimate& e) {
    return {name, threshold, e.p_hat, e.ci_low, e.ci_high, e.trials, e.seed};
}

int cmd_stats(const Options& o) {
    const double alpha = single_alpha(o);
    require(o.n >= 2, "stats: --n must be at least 2");
    require(o.beta > 0.0 && o.beta < 1.0, "stats: --beta must lie in (0, 1)");
    const std::uint64_t trials = trials_or(o, 10000);
    const EwensParams params(alpha, o.n);
    const auto t0 = std::chrono::steady_clock::now();
    const Rng rng(o.seed);
    const auto f = estimate_order_stats(params, o.beta, trials, rng.split(0));
    const auto odd = estimate_odd_probability(params, trials, rng.split(1));
    const auto del = estimate_mean_deletions(params, trials, rng.split(2));
    Table t;
    t.header = {"statistic", "threshold", "p_hat", "ci_low", "ci_high", "trials", "seed"};
    t.rows.push_back(estimate_row("minimal_degree_above", f.minimal_degree_threshold, f.minimal_degree_above));
    t.rows.push_back(estimate_row("common_divisor_above", f.gcd_threshold, f.gcd_above));
    t.rows.push_back(estimate_row("largest_prime_of_phi_above", f.largest_prime_threshold, f.largest_prime_above));
    t.rows.push_back(estimate_row("odd", 0.0, odd));
    const double half = kZ95 * del.standard_error;
    t.rows.push_back({"mean_deletions", 0.0, del.mean, del.mean - half, del.mean + half, del.samples, o.seed});
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit("stats", o, {{"alpha", alpha}, {"n", o.n}, {"beta", o.beta}, {"trials", trials}}, t, wall);
    return 0;
}

int cmd_sumset(const Options& o) {
    const double alpha = single_alpha(o);
    const std::size_t K = o.window ? o.window : 10000;
    require(K >= 2, "sumset: --window must be at least 2");
    require(o.m >= 1, "sumset: --m must be at least 1");
    const std::uint64_t trials = trials_or(o, 10000);
    const auto t0 = std::chrono::steady_clock::now();
    const Rng rng(o.seed);
    Table t;
    t.header = {"quantity", "m", "window", "p_hat", "ci_low", "ci_high", "trials", "seed"};
    const auto curve = sumset_trivial_curve(alpha, o.m, K, trials, rng.split(0));
    for (unsigned i = 0; i < curve.size(); ++i) {
        const auto& e = curve[i];
        t.rows.push_back({"trivial_intersection", i + 1, K, e.p_hat, e.ci_low, e.ci_high, e.trials, e.seed});
    }
    if (o.k) {
        require(o.k <= K, "sumset: --k must not exceed --window");
        const auto p = estimate_pk(alpha, o.k, K, trials, rng.split(1));
        const auto q = estimate_pk(alpha, o.k, K, trials, rng.split(1), true);
        t.rows.push_back({"p_k", 1, o.k, p.p_hat, p.ci_low, p.ci_high, p.trials, p.seed});
        t.rows.push_back({"p_k_quenched", 1, o.k, q.p_hat, q.ci_low, q.ci_high, q.trials, q.seed});
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit("sumset", o, {{"alpha", alpha}, {"m", o.m}, {"window", K}, {"k", o.k}, {"trials", trials}}, t, wall);
    return 0;
}

int cmd_scan(const Options& o) {
    for (double a : o.alpha) require(a > 0.0, "scan: every --alpha must be positive");
    require(o.m >= 1, "scan: --m must be at least 1");
    std::string mode = o.mode;
    if (mode.empty()) mode = o.n ? "permutation" : "sumset";
    const ScanMode sm = mode == "permutation" ? ScanMode::permutation : ScanMode::sumset;
    const std::size_t window = sm == ScanMode::permutation ? (o.n ? o.n : o.window) : (o.window ? o.window : 10000);
    require(window >= 2, "scan: window (--n or --window) must be at least 2");
    const std::uint64_t trials = trials_or(o, sm == ScanMode::sumset ? 100000 : 10000);
    std::vector<unsigned> ms;
    for (unsigned i = 1; i <= o.m; ++i) ms.push_back(i);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = scan_alpha(o.alpha, ms, sm, window, trials, Rng(o.seed));
    Table t;
    std::stringstream hs(kScanCsvHeader);
    for (std::string col; std::getline(hs, col, ',');) t.header.push_back(col);
    for (const auto& r : rows) {
        t.rows.push_back({r.alpha, r.m, r.window, r.estimate.p_hat, r.estimate.ci_low, r.estimate.ci_high,
                          r.estimate.trials, r.estimate.seed, o.format == "json" ? h_json(r.h_alpha) : json(r.h_alpha.to_string()),
                          r.near_discontinuity ? "near_discontinuity" : ""});
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit("scan", o, {{"alpha", o.alpha}, {"m", o.m}, {"mode", mode}, {"window", window}, {"trials", trials}}, t, wall);
    return 0;
}

int cmd_fourier(const Options& o) {
    const double alpha = single_alpha(o);
    require(o.m >= 2, "fourier: --m must be at least 2");
    DiffGrowthConfig cfg;
    cfg.alpha = alpha;
    cfg.m = o.m;
    cfg.k = o.k ? o.k : (o.window ? o.window : 128);
    cfg.trials = trials_or(o, 200);
    require(cfg.k >= 4 && cfg.k <= 256, "fourier: --k must lie in [4, 256]");
    const auto t0 = std::chrono::steady_clock::now();
    const Rng rng(o.seed);
    const auto rep = verify_diff_growth(cfg, rng.split(0));

    // Cauchy-Schwarz instances on the same interval
    const std::uint64_t cs_trials = std::min<std::uint64_t>(cfg.trials, 100);
    const PoissonVectorSampler sampler(alpha, rep.interval.hi);
    std::uint64_t cs_hold = 0;
    double min_ratio = INFINITY;
    for (std::uint64_t t = 0; t < cs_trials; ++t) {
        std::vector<PoissonCycleVector> v;
        for (unsigned i = 0; i < cfg.m; ++i) {
            Rng r = rng.split(1).split(t).split(i);
            v.push_back(sampler.sample(r));
        }
        const auto inst = cauchy_schwarz_instance(v, rep.interval);
        cs_hold += inst.holds(0.02) ? 1 : 0;
        min_ratio = std::min(min_ratio, static_cast<double>(inst.diff_set_size) / inst.lower_bound);
    }
    Table t;
    t.header = {"alpha", "m", "k", "beta", "interval_lo", "interval_hi", "c_cube", "large", "contained", "both",
                "median_size", "tail_event", "cs_instances", "cs_holds", "cs_min_ratio", "trials", "seed"};
    t.rows.push_back({alpha, cfg.m, cfg.k, rep.beta, rep.interval.lo, rep.interval.hi, rep.c_cube, rep.large.p_hat,
                      rep.contained.p_hat, rep.both.p_hat, rep.median_size, rep.tail_event.p_hat, cs_trials, cs_hold, min_ratio, cfg.trials,
                      o.seed});
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit("fourier", o, {{"alpha", alpha}, {"m", cfg.m}, {"k", cfg.k}, {"trials", cfg.trials}}, t, wall);
    return 0;
}

int cmd_oracle(const Options& o) {
    require(!o.classes.empty(), "oracle: --classes is required");
    std::vector<CycleType> classes;
    std::stringstream ss(o.classes);
    for (std::string item; std::getline(ss, item, ';');) {
        if (item.empty()) continue;
        classes.push_back(parse_partition(item));
        if (o.n) require(classes.back().n() == o.n, "oracle: class " + item + " is not a partition of --n");
    }
    const bool result = exact_invgen(classes);
    if (o.format == "json") {
        json j{{"n", classes.front().n()}, {"classes", o.classes}, {"invariably_generates", result}};
        std::cout << j.dump() << '\n';
    } else {
        std::cout << (result ? "true" : "false") << '\n';
    }
    return 0;
}

int cmd_selftest(const Options& o) {
    const auto results = run_acceptance(std::cout, o.seed == kDefaultSeed ? kAcceptanceSeed : o.seed, o.only);
    return all_passed(results) ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"ewens_lab: Ewens permutations, Poisson sumsets and invariable generation experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value file; flags on the command line take precedence");
    app.add_option("--alpha", o.alpha, "Ewens parameter (scan accepts a comma list)")->delimiter(',');
    app.add_option("--n", o.n, "permutation degree");
    app.add_option("--m", o.m, "number of permutations / sumsets");
    app.add_option("--window", o.window, "truncation K of the Poisson model");
    app.add_option("--trials", o.trials, "Monte Carlo trials");
    auto* seed_opt = app.add_option("--seed", o.seed, "RNG seed (fallback: EWENS_LAB_SEED)");
    app.add_option("--workers", o.workers, "worker threads (0 = hardware concurrency)");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));

    auto* sample = app.add_subcommand("sample", "ESF(alpha, n) cycle types as CSV rows of counts");
    auto* stats = app.add_subcommand("stats", "minimal degree, common divisor, largest prime, parity, deletions");
    stats->add_option("--beta", o.beta, "minimal degree threshold exponent");
    auto* sumset = app.add_subcommand("sumset", "trivial intersection of m Poisson sumsets; optional p_k");
    sumset->add_option("--k", o.k, "also estimate P[k in L(X)] (plain and quenched)");
    auto* scan = app.add_subcommand("scan", "threshold table over alpha and m = 1..M");
    scan->add_option("--mode", o.mode, "sumset or permutation (default: permutation when --n is given)")
        ->check(CLI::IsMember({"sumset", "permutation"}));
    auto* fourier = app.add_subcommand("fourier", "difference-set size, containment and Cauchy-Schwarz diagnostics");
    fourier->add_option("--k", o.k, "top of the interval (default 128)");
    auto* oracle = app.add_subcommand("oracle", "exact invariable generation for n <= 6");
    oracle->add_option("--classes", o.classes, "classes separated by ';', each written as len+len+...");
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--only", o.only, "restrict to these criterion ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    if (seed_opt->count() == 0) {
        if (const char* env = std::getenv("EWENS_LAB_SEED")) {
            try {
                o.seed = std::stoull(env);
            } catch (const std::exception&) {
                std::cerr << "EWENS_LAB_SEED is not an unsigned integer: " << env << '\n';
                return kExitValidation;
            }
        }
    }
    parallel::set_workers(o.workers);

    try {
        if (*sample) return cmd_sample(o);
        if (*stats) return cmd_stats(o);
        if (*sumset) return cmd_sumset(o);
        if (*scan) return cmd_scan(o);
        if (*fourier) return cmd_fourier(o);
        if (*oracle) return cmd_oracle(o);
        if (*selftest) return cmd_selftest(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}
