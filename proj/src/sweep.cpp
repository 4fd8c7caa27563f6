#include "rlsc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "rlsc/gen.hpp"
#include "rlsc/oracle.hpp"
#include "rlsc/pipeline.hpp"

namespace rlsc {

Params profile_params(const std::string& name) {
    if (name == "paper") return Params::paper();
    if (name == "desk") return Params::desk();
    throw InvalidInput("unknown profile: " + name);
}

LinearFloor parse_slope(const std::string& text, long long min) {
    LinearFloor f{0, 1, min};
    try {
        const auto slash = text.find('/');
        std::size_t used = 0;
        if (slash != std::string::npos) {
            f.num = std::stoll(text.substr(0, slash), &used);
            if (used != slash) throw InvalidInput("");
            const std::string den = text.substr(slash + 1);
            f.den = std::stoll(den, &used);
            if (used != den.size()) throw InvalidInput("");
        } else {
            const double x = std::stod(text, &used);
            if (used != text.size()) throw InvalidInput("");
            f.den = 1000000;
            f.num = std::llround(x * 1000000);
        }
    } catch (const std::exception&) {
        throw InvalidInput("bad slope '" + text + "'");
    }
    if (f.den <= 0 || f.num < 0) throw InvalidInput("bad slope '" + text + "'");
    return f;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point, std::uint64_t replicate) {
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return mix(mix(mix(base) ^ point) ^ replicate);
}

namespace {

struct Job {
    std::size_t row;
    std::uint64_t seed;
};

struct Result {
    SolveStatus status = SolveStatus::GaveUp;
    bool verified = false;
    bool oracle_checked = false;
    bool oracle_agree = false;
    long long q = 0;
    double ms = 0;
    double alpha = 0, beta = 0;
};

Result run_one(const SweepConfig& cfg, const SweepRow& pt, std::uint64_t seed) {
    PartialLatinSquare P;
    AvoidanceArray A;
    if (cfg.model == "frontier") {
        auto pr = infeasible_pair({pt.r, pt.t}, cfg.literal_c_block);
        P = std::move(pr.P);
        A = std::move(pr.A);
    } else {
        std::mt19937_64 rng(seed);
        P = random_pls({pt.n, pt.p}, rng);
        A = random_array({pt.n, pt.m}, rng, P);
    }
    const int n = P.order();
    Result res;
    const auto dp = density_profile(P);
    const auto ap = array_profile(A);
    res.alpha = double(std::max({dp.max_row, dp.max_col, dp.max_symbol})) / n;
    res.beta = double(std::max({ap.max_cell, ap.max_row_occurrence, ap.max_col_occurrence})) / n;

    Params prm = cfg.params;
    prm.rng_seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    SolveOutcome out;
    try {
        out = solve(P, A, prm);
    } catch (const Error&) {
        out.status = SolveStatus::GaveUp;
    }
    res.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.status = out.status;
    res.q = out.stats.q;
    res.verified = out.square && verify_solution(*out.square, P, A).clean();
    if (n <= cfg.oracle_check_max && n <= kOracleMaxOrder) {
        const auto ex = solve_exact(P, A);
        if (ex.status != ExactStatus::LimitHit) {
            res.oracle_checked = true;
            res.oracle_agree = (ex.status == ExactStatus::Solved) == (out.status == SolveStatus::Solved);
        }
    }
    return res;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    std::vector<SweepRow> rows;
    int reps = std::max(1, cfg.replicates);
    if (cfg.model == "random") {
        for (int n : cfg.n)
            for (double p : cfg.p)
                for (int m : cfg.m) {
                    if (n < 1 || p < 0 || p > 1 || m < 0 || m > n) throw InvalidInput("bad sweep point");
                    SweepRow row;
                    row.model = "random";
                    row.n = n;
                    row.p = p;
                    row.m = m;
                    rows.push_back(row);
                }
    } else if (cfg.model == "frontier") {
        reps = 1;  // the construction is deterministic
        for (int r : cfg.r)
            for (int t : cfg.t) {
                if (r < 1 || t < 1 || t > r + 1) continue;
                SweepRow row;
                row.model = "frontier";
                row.r = r;
                row.t = t;
                row.n = 3 * r + 2;
                rows.push_back(row);
            }
    } else {
        throw InvalidInput("unknown sweep model: " + cfg.model);
    }

    std::vector<Job> jobs;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int k = 0; k < reps; ++k) jobs.push_back({i, derive_seed(cfg.seed, i, static_cast<std::uint64_t>(k))});
    std::vector<Result> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();)
            results[j] = run_one(cfg, rows[jobs[j].row], jobs[j].seed);
    };
    const int nthreads = std::max(1, cfg.jobs);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t j = 0; j < jobs.size(); ++j) {
        auto& row = rows[jobs[j].row];
        const auto& r = results[j];
        ++row.instances;
        row.solved += r.status == SolveStatus::Solved;
        row.infeasible += r.status == SolveStatus::Infeasible;
        row.gave_up += r.status == SolveStatus::GaveUp;
        row.verified += r.verified;
        row.oracle_checked += r.oracle_checked;
        row.oracle_agree += r.oracle_agree;
        row.mean_q += double(r.q);
        row.mean_ms += r.ms;
        row.alpha += r.alpha;
        row.beta += r.beta;
    }
    for (auto& row : rows)
        if (row.instances) {
            row.mean_q /= row.instances;
            row.mean_ms /= row.instances;
            row.alpha /= row.instances;
            row.beta /= row.instances;
        }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool with_timings) {
    std::string s =
        "model,n,p,m,r,t,alpha,beta,instances,solved,infeasible,gave_up,success_rate,verified,oracle_checked,"
        "oracle_agree,mean_q,mean_ms\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%d,%g,%d,%d,%d,%.6f,%.6f,%d,%d,%d,%d,%.4f,%d,%d,%d,%.2f,%.2f\n",
                      r.model.c_str(), r.n, r.p, r.m, r.r, r.t, r.alpha, r.beta, r.instances, r.solved, r.infeasible,
                      r.gave_up, r.success_rate(), r.verified, r.oracle_checked, r.oracle_agree, r.mean_q,
                      with_timings ? r.mean_ms : 0.0);
        s += buf;
    }
    return s;
}

}  // namespace rlsc
