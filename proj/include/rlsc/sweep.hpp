#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlsc/core.hpp"

namespace rlsc {

// "paper", "desk"; anything else throws InvalidInput.
Params profile_params(const std::string& name);

// Parses "1/20", "0.05" or "3" into max(min, floor(n * slope)).
LinearFloor parse_slope(const std::string& text, long long min);

// splitmix-style hash of (base seed, grid point, replicate).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point, std::uint64_t replicate);

struct SweepConfig {
    std::string model = "random";  // "random": (n, p, m) grid; "frontier": (r, t) grid
    std::vector<int> n;
    std::vector<double> p;
    std::vector<int> m;
    std::vector<int> r;
    std::vector<int> t;
    bool literal_c_block = false;
    int replicates = 10;
    std::uint64_t seed = 0;
    Params params = Params::desk();
    int oracle_check_max = 8;  // instances up to this order are also solved exactly
    int jobs = 1;
};

struct SweepRow {
    std::string model;
    int n = 0;
    double p = 0;
    int m = 0;
    int r = 0;
    int t = 0;
    double alpha = 0;  // mean over instances of max density / n
    double beta = 0;   // mean over instances of max array occurrence / n
    int instances = 0;
    int solved = 0;
    int infeasible = 0;
    int gave_up = 0;
    int verified = 0;
    int oracle_checked = 0;
    int oracle_agree = 0;
    double mean_q = 0;
    double mean_ms = 0;
    double success_rate() const { return instances ? double(solved) / instances : 0.0; }
};

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

// Header: model,n,p,m,r,t,alpha,beta,instances,solved,infeasible,gave_up,
// success_rate,verified,oracle_checked,oracle_agree,mean_q,mean_ms
std::string sweep_csv(const std::vector<SweepRow>& rows, bool with_timings = true);

}  // namespace rlsc
