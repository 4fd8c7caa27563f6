#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "rlsc/gen.hpp"
#include "rlsc/io.hpp"
#include "rlsc/pipeline.hpp"
#include "rlsc/sweep.hpp"

using namespace rlsc;

namespace {

// Exit codes.
constexpr int kOk = 0, kVerifyFailed = 1, kUsage = 2, kInfeasible = 3, kGaveUp = 4;

struct ProfileFlags {
    std::string profile = "desk";
    std::string policy;
    std::optional<double> alpha, beta, eps, k, d;
    std::optional<std::string> c_slope, f_slope;
    std::optional<int> scramble_tries, max_restarts, oracle_threshold;
    std::uint64_t seed = 0;

    void add(CLI::App* app) {
        app->add_option("--profile", profile, "paper, desk or custom (desk plus overrides)")
            ->check(CLI::IsMember({"paper", "desk", "custom"}));
        app->add_option("--policy", policy, "strict, relaxed or best-effort (default from profile)")
            ->check(CLI::IsMember({"strict", "relaxed", "best-effort"}));
        app->add_option("--alpha", alpha);
        app->add_option("--beta", beta);
        app->add_option("--eps", eps);
        app->add_option("--k", k);
        app->add_option("--d", d);
        app->add_option("--c-slope", c_slope, "c(n) = max(1, floor(n * slope)), e.g. 1/20");
        app->add_option("--f-slope", f_slope, "f(n) = max(1, floor(n * slope))");
        app->add_option("--scramble-tries", scramble_tries);
        app->add_option("--max-restarts", max_restarts);
        app->add_option("--oracle-threshold", oracle_threshold);
        app->add_option("--seed", seed);
    }

    Params build() const {
        const bool overrides = alpha || beta || eps || k || d || c_slope || f_slope;
        if (overrides && profile != "custom") throw InvalidInput("parameter overrides need --profile custom");
        Params p = profile_params(profile == "custom" ? "desk" : profile);
        if (alpha) p.alpha = *alpha;
        if (beta) p.beta = *beta;
        if (eps) p.epsilon = *eps;
        if (k) p.k = *k;
        if (d) p.d = *d;
        if (c_slope) p.c_of_n = parse_slope(*c_slope, 1);
        if (f_slope) p.f_of_n = parse_slope(*f_slope, 1);
        if (!policy.empty()) p.fallback_policy = fallback_policy_from_string(policy);
        if (scramble_tries) p.max_scramble_tries = *scramble_tries;
        if (max_restarts) p.max_restarts = *max_restarts;
        if (oracle_threshold) p.oracle_threshold = *oracle_threshold;
        p.rng_seed = seed;
        p.validate();
        return p;
    }
};

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") std::cout << content;
    else write_file(path, content);
}

template <class T>
std::vector<T> split_list(const std::string& s) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        try {
            std::size_t used = 0;
            if constexpr (std::is_same_v<T, int>) out.push_back(std::stoi(part, &used));
            else out.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw InvalidInput("bad list entry '" + part + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latin square completion avoiding a forbidden-symbol array"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write random or constructed instances");
    std::string g_model, g_out, g_avoid, g_out_pls, g_out_array;
    int g_n = 0, g_m = 0, g_r = 1, g_t = 1;
    double g_p = 0;
    std::uint64_t g_seed = 0;
    bool g_literal = false;
    gen->add_option("--model", g_model)->required()->check(CLI::IsMember({"pls", "array", "frontier"}));
    gen->add_option("--n", g_n);
    gen->add_option("--p", g_p);
    gen->add_option("--m", g_m);
    gen->add_option("--seed", g_seed);
    gen->add_option("--avoid", g_avoid, "pls file whose entries are removed from the array");
    gen->add_option("--r", g_r);
    gen->add_option("--t", g_t);
    gen->add_flag("--literal-c-block", g_literal);
    gen->add_option("-o,--out", g_out, "output file (stdout when omitted; .txt selects the text grid)");
    gen->add_option("--out-pls", g_out_pls, "frontier: P file");
    gen->add_option("--out-array", g_out_array, "frontier: A file");

    // solve
    auto* sol = app.add_subcommand("solve", "complete P avoiding A; stats JSON on stdout");
    std::string s_pls, s_arr, s_out, s_log;
    bool s_no_timings = false;
    ProfileFlags s_prof;
    sol->add_option("pls", s_pls)->required();
    sol->add_option("array", s_arr)->required();
    sol->add_option("-o,--out", s_out, "solution file");
    sol->add_option("--trade-log", s_log, "trade log (JSON lines)");
    sol->add_flag("--no-timings", s_no_timings, "leave timings out of the stats");
    s_prof.add(sol);

    // verify
    auto* ver = app.add_subcommand("verify", "check that L completes P and avoids A");
    std::string v_l, v_p, v_a;
    ver->add_option("latin", v_l)->required();
    ver->add_option("pls", v_p)->required();
    ver->add_option("array", v_a)->required();

    // replay
    auto* rep = app.add_subcommand("replay", "rebuild a solution from its trade log");
    std::string r_log, r_out, r_p, r_a;
    rep->add_option("log", r_log)->required();
    rep->add_option("-o,--out", r_out);
    rep->add_option("--pls", r_p, "verify the result against this P");
    rep->add_option("--array", r_a, "verify the result against this A");

    // sweep
    auto* swp = app.add_subcommand("sweep", "success rates over a parameter grid as CSV");
    std::string w_model = "random", w_n, w_p = "0", w_m = "0", w_r = "1", w_t = "1", w_out;
    int w_reps = 10, w_jobs = 1, w_oracle = 8;
    bool w_literal = false, w_no_timings = false;
    ProfileFlags w_prof;
    swp->add_option("--model", w_model)->check(CLI::IsMember({"random", "frontier"}));
    swp->add_option("--n", w_n, "comma-separated orders");
    swp->add_option("--p", w_p, "comma-separated fill probabilities");
    swp->add_option("--m", w_m, "comma-separated array set sizes");
    swp->add_option("--r", w_r, "frontier: comma-separated r");
    swp->add_option("--t", w_t, "frontier: comma-separated t");
    swp->add_flag("--literal-c-block", w_literal);
    swp->add_option("--reps", w_reps, "replicates per grid point");
    swp->add_option("--jobs", w_jobs, "worker threads");
    swp->add_option("--oracle-check-max", w_oracle, "also solve exactly up to this order");
    swp->add_option("-o,--out", w_out, "CSV file (stdout when omitted)");
    swp->add_flag("--no-timings", w_no_timings);
    w_prof.add(swp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            if (g_model == "pls") {
                if (g_n < 1 || g_p < 0 || g_p > 1) throw InvalidInput("need --n >= 1 and 0 <= --p <= 1");
                std::mt19937_64 rng(g_seed);
                const auto P = random_pls({g_n, g_p}, rng);
                emit(g_out, render_for_path(g_out, P));
            } else if (g_model == "array") {
                if (g_n < 1 || g_m < 0 || g_m > g_n) throw InvalidInput("need --n >= 1 and 0 <= --m <= n");
                std::mt19937_64 rng(g_seed);
                std::optional<PartialLatinSquare> P;
                if (!g_avoid.empty()) {
                    P = load_pls(g_avoid);
                    if (P->order() != g_n) throw InvalidInput("--avoid order does not match --n");
                }
                const auto A = random_array({g_n, g_m}, rng, P);
                emit(g_out, render_for_path(g_out, A));
            } else {
                if (g_r < 1 || g_t < 1 || g_t > g_r + 1) throw InvalidInput("need r >= 1 and 1 <= t <= r+1");
                const auto pr = infeasible_pair({g_r, g_t}, g_literal);
                const std::string stem = "frontier_r" + std::to_string(g_r) + "_t" + std::to_string(g_t);
                const std::string pp = g_out_pls.empty() ? stem + "_P.json" : g_out_pls;
                const std::string ap = g_out_array.empty() ? stem + "_A.json" : g_out_array;
                write_file(pp, render_for_path(pp, pr.P));
                write_file(ap, render_for_path(ap, pr.A));
                std::cerr << "wrote " << pp << " and " << ap << "\n";
            }
            return kOk;
        }

        if (*sol) {
            const Params prm = s_prof.build();
            const auto P = load_pls(s_pls);
            const auto A = load_array(s_arr);
            if (P.order() != A.order()) throw InvalidInput("P and A have different orders");
            const auto out = solve(P, A, prm);
            if (out.square && !s_out.empty()) write_file(s_out, render_for_path(s_out, *out.square));
            if (out.log && !s_log.empty()) write_file(s_log, trade_log_jsonl(*out.log));
            auto j = stats_json(out, !s_no_timings);
            j["profile"] = s_prof.profile;
            j["policy"] = to_string(prm.fallback_policy);
            j["seed"] = prm.rng_seed;
            j["n"] = P.order();
            std::cout << j.dump(2) << "\n";
            if (!out.message.empty()) std::cerr << out.message << "\n";
            switch (out.status) {
                case SolveStatus::Solved: return kOk;
                case SolveStatus::Infeasible: return kInfeasible;
                case SolveStatus::GaveUp: return kGaveUp;
            }
        }

        if (*ver) {
            const auto L = load_grid(v_l);
            const auto P = load_pls(v_p);
            const auto A = load_array(v_a);
            if (L.order() != P.order() || P.order() != A.order()) throw InvalidInput("orders differ");
            const auto r = verify_solution(L, P, A);
            std::cout << report_json(r).dump(2) << "\n";
            return r.clean() ? kOk : kVerifyFailed;
        }

        if (*rep) {
            const auto log = parse_trade_log(read_file(r_log));
            const auto L = replay(log);
            emit(r_out, render_for_path(r_out, L));
            if (!r_p.empty() || !r_a.empty()) {
                const auto P = r_p.empty() ? PartialLatinSquare(L.order()) : load_pls(r_p);
                const auto A = r_a.empty() ? AvoidanceArray(L.order()) : load_array(r_a);
                if (P.order() != L.order() || A.order() != L.order()) throw InvalidInput("orders differ");
                const auto r = verify_solution(L, P, A);
                std::cerr << report_json(r).dump() << "\n";
                return r.clean() ? kOk : kVerifyFailed;
            }
            return kOk;
        }

        if (*swp) {
            SweepConfig cfg;
            cfg.model = w_model;
            cfg.n = split_list<int>(w_n);
            cfg.p = split_list<double>(w_p);
            cfg.m = split_list<int>(w_m);
            cfg.r = split_list<int>(w_r);
            cfg.t = split_list<int>(w_t);
            cfg.literal_c_block = w_literal;
            cfg.replicates = w_reps;
            cfg.jobs = w_jobs;
            cfg.oracle_check_max = w_oracle;
            cfg.seed = w_prof.seed;
            cfg.params = w_prof.build();
            if (cfg.model == "random" && cfg.n.empty()) throw InvalidInput("--n is required for the random model");
            emit(w_out, sweep_csv(run_sweep(cfg), !w_no_timings));
            return kOk;
        }
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InputClash& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGaveUp;
    }
    return kUsage;
}
