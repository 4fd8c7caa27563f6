#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "rlsc/gen.hpp"
#include "rlsc/io.hpp"
#include "rlsc/oracle.hpp"
#include "rlsc/pipeline.hpp"
#include "rlsc/starting.hpp"
#include "rlsc/sweep.hpp"

namespace py = pybind11;
using namespace rlsc;

// Grids cross the boundary as lists of rows (0 = empty); arrays as rows of
// symbol lists. Rows and columns are 0-based here, symbols 1..n.
namespace {

using Rows = std::vector<std::vector<int>>;
using SetRows = std::vector<std::vector<std::vector<int>>>;

AvoidanceArray array_from(const SetRows& rows) {
    const int n = static_cast<int>(rows.size());
    AvoidanceArray A(n);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[r].size()) != n) throw InvalidInput("array must be n x n");
        for (int c = 0; c < n; ++c)
            for (int s : rows[r][c]) {
                if (s < 1 || s > n) throw InvalidInput("symbol out of range");
                A.insert(r, c, s);
            }
    }
    return A;
}

SetRows array_to(const AvoidanceArray& A) {
    const int n = A.order();
    SetRows out(n, std::vector<std::vector<int>>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out[r][c] = A.symbols(r, c);
    return out;
}

PartialLatinSquare pls_from(const Rows& rows) {
    const int n = static_cast<int>(rows.size());
    for (const auto& row : rows)
        if (static_cast<int>(row.size()) != n) throw InvalidInput("grid must be n x n");
    for (const auto& row : rows)
        for (int s : row)
            if (s < 0 || s > n) throw InvalidInput("symbol out of range");
    return n == 0 ? PartialLatinSquare(0) : PartialLatinSquare::from_rows(rows);
}

py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::list violations(const Report& r) {
    py::list out;
    for (const auto& v : r.violations) {
        py::dict d;
        d["kind"] = v.kind;
        d["row"] = v.cell.row;
        d["col"] = v.cell.col;
        d["symbol"] = v.symbol;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_rlsc, m) {
    m.doc() = "Latin square completion avoiding a forbidden-symbol array";

    py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<InputClash>(m, "InputClash", PyExc_ValueError);

    py::enum_<FallbackPolicy>(m, "FallbackPolicy")
        .value("strict", FallbackPolicy::Strict)
        .value("relaxed", FallbackPolicy::Relaxed)
        .value("best_effort", FallbackPolicy::BestEffort);

    py::class_<Params>(m, "Params")
        .def(py::init<>())
        .def_static("paper", &Params::paper)
        .def_static("desk", &Params::desk)
        .def_readwrite("alpha", &Params::alpha)
        .def_readwrite("beta", &Params::beta)
        .def_readwrite("epsilon", &Params::epsilon)
        .def_readwrite("k", &Params::k)
        .def_readwrite("d", &Params::d)
        .def_readwrite("max_scramble_tries", &Params::max_scramble_tries)
        .def_readwrite("rng_seed", &Params::rng_seed)
        .def_readwrite("fallback_policy", &Params::fallback_policy)
        .def_readwrite("oracle_threshold", &Params::oracle_threshold)
        .def_readwrite("max_restarts", &Params::max_restarts)
        .def("c", &Params::c)
        .def("f", &Params::f)
        .def("set_c_slope", [](Params& p, const std::string& s) { p.c_of_n = parse_slope(s, 1); })
        .def("set_f_slope", [](Params& p, const std::string& s) { p.f_of_n = parse_slope(s, 1); });

    m.def(
        "solve",
        [](const Rows& P, const SetRows& A, const Params& params) {
            if (P.size() != A.size()) throw InvalidInput("P and A have different orders");
            const auto out = solve(pls_from(P), array_from(A), params);
            py::dict d;
            d["status"] = to_string(out.status);
            d["square"] = out.square ? py::cast(out.square->rows()) : py::none();
            d["message"] = out.message;
            d["stats"] = json_to_py(stats_json(out));
            d["trade_log"] = out.log ? py::cast(trade_log_jsonl(*out.log)) : py::none();
            return d;
        },
        py::arg("P"), py::arg("A"), py::arg("params") = Params::desk(),
        "Complete P avoiding A. Returns a dict with status, square, stats and trade_log.");

    m.def(
        "solve_exact",
        [](const Rows& P, const SetRows& A, long long max_nodes) {
            SearchLimits lim;
            lim.max_nodes = max_nodes;
            const auto res = solve_exact(pls_from(P), array_from(A), lim);
            const char* st = res.status == ExactStatus::Solved       ? "solved"
                             : res.status == ExactStatus::Infeasible ? "infeasible"
                                                                     : "limit";
            return py::make_tuple(st, res.square ? py::cast(res.square->rows()) : py::none());
        },
        py::arg("P"), py::arg("A"), py::arg("max_nodes") = 200'000'000LL);

    m.def(
        "verify",
        [](const Rows& L, const Rows& P, const SetRows& A) {
            return violations(verify_solution(pls_from(L), pls_from(P), array_from(A)));
        },
        py::arg("L"), py::arg("P"), py::arg("A"), "Violations of L as a completion of P avoiding A (empty if clean).");

    m.def(
        "replay", [](const std::string& jsonl) { return replay(parse_trade_log(jsonl)).rows(); }, py::arg("trade_log"));

    m.def(
        "starting_square",
        [](int n) {
            const auto S = build_starting_square(n);
            std::vector<std::pair<int, int>> exc;
            for (auto [r, c] : S.exceptional_cells) exc.emplace_back(r, c);
            return py::make_tuple(S.square.rows(), exc);
        },
        py::arg("n"), "Starting square and its exceptional cells.");

    m.def(
        "strong_census", [](const Rows& L) { return strong_intercalate_census(LatinSquare::from_rows(L)); },
        py::arg("L"), "Strong intercalates through each cell, row-major.");

    m.def(
        "random_pls",
        [](int n, double p, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            return random_pls({n, p}, rng).rows();
        },
        py::arg("n"), py::arg("p"), py::arg("seed") = 0);

    m.def(
        "random_array",
        [](int n, int mm, std::uint64_t seed, std::optional<Rows> P) {
            std::mt19937_64 rng(seed);
            std::optional<PartialLatinSquare> pp;
            if (P) pp = pls_from(*P);
            return array_to(random_array({n, mm}, rng, pp));
        },
        py::arg("n"), py::arg("m"), py::arg("seed") = 0, py::arg("P") = py::none());

    m.def(
        "infeasible_pair",
        [](int r, int t, bool literal) {
            const auto pr = infeasible_pair({r, t}, literal);
            return py::make_tuple(pr.P.rows(), array_to(pr.A));
        },
        py::arg("r"), py::arg("t"), py::arg("literal_c_block") = false);

    m.def(
        "preflight",
        [](const Params& p, int n) {
            py::list out;
            for (const auto& it : preflight(p, n).items) {
                py::dict d;
                d["name"] = it.name;
                d["lhs"] = it.lhs;
                d["rhs"] = it.rhs;
                d["holds"] = it.holds;
                out.append(d);
            }
            return out;
        },
        py::arg("params"), py::arg("n"));

    m.def(
        "pls_to_json", [](const Rows& P) { return to_json(pls_from(P)); }, py::arg("P"));
    m.def(
        "array_to_json", [](const SetRows& A) { return to_json(array_from(A)); }, py::arg("A"));
    m.def(
        "parse_instance",
        [](const std::string& content) {
            const auto f = parse_instance(content);
            py::dict d;
            d["kind"] = to_string(f.kind);
            d["n"] = f.n;
            if (f.kind == FileKind::Array) d["cells"] = array_to(f.array);
            else d["cells"] = f.grid.rows();
            return d;
        },
        py::arg("content"));

    m.def(
        "sweep_random",
        [](const std::vector<int>& n, const std::vector<double>& p, const std::vector<int>& mm, int reps,
           std::uint64_t seed, const Params& params) {
            SweepConfig cfg;
            cfg.n = n;
            cfg.p = p;
            cfg.m = mm;
            cfg.replicates = reps;
            cfg.seed = seed;
            cfg.params = params;
            return sweep_csv(run_sweep(cfg));
        },
        py::arg("n"), py::arg("p"), py::arg("m"), py::arg("reps") = 10, py::arg("seed") = 0,
        py::arg("params") = Params::desk(), "CSV of success rates over an (n, p, m) grid.");
}
