#include "rlsc/io.hpp"

#include <fstream>
#include <sstream>

namespace rlsc {

using nlohmann::json;

std::string to_string(FileKind k) {
    switch (k) {
        case FileKind::Pls: return "pls";
        case FileKind::Array: return "array";
        case FileKind::Latin: return "latin";
    }
    return "?";
}

namespace {

std::string dump(const json& j) { return j.dump() + "\n"; }

json grid_json(const PartialLatinSquare& P, const char* kind) {
    const int n = P.order();
    json cells = json::array();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (!P.is_empty(r, c)) cells.push_back({r + 1, c + 1, P.at(r, c)});
    return {{"kind", kind}, {"n", n}, {"cells", std::move(cells)}};
}

std::string grid_text(const PartialLatinSquare& P) {
    const int n = P.order();
    std::string s = std::to_string(n) + "\n";
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (c) s += ' ';
            s += P.is_empty(r, c) ? std::string(".") : std::to_string(P.at(r, c));
        }
        s += '\n';
    }
    return s;
}

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

int as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
    return j.get<int>();
}

int parse_order(int n) {
    if (n < 1 || n > 100000) fail("order out of range: " + std::to_string(n));
    return n;
}

void check_range(int v, int n, const char* what) {
    if (v < 1 || v > n) fail(std::string(what) + " out of range: " + std::to_string(v));
}

InstanceFile parse_json(const std::string& content) {
    json j;
    try {
        j = json::parse(content);
    } catch (const json::exception& e) {
        fail(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.contains("n") || !j.contains("cells"))
        fail("expected an object with kind, n and cells");
    InstanceFile f;
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    if (kind == "pls") f.kind = FileKind::Pls;
    else if (kind == "array") f.kind = FileKind::Array;
    else if (kind == "latin") f.kind = FileKind::Latin;
    else fail("unknown kind '" + kind + "'");
    f.n = parse_order(as_int(j["n"], "n"));
    const int n = f.n;
    if (!j["cells"].is_array()) fail("cells must be a list");
    std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
    if (f.kind == FileKind::Array) f.array = AvoidanceArray(n);
    else f.grid = PartialLatinSquare(n);
    for (const auto& e : j["cells"]) {
        if (!e.is_array() || e.size() != 3) fail("each cell is [row, col, value]");
        const int r = as_int(e[0], "row"), c = as_int(e[1], "col");
        check_range(r, n, "row");
        check_range(c, n, "col");
        auto& s = seen[static_cast<std::size_t>(r - 1) * n + (c - 1)];
        if (s) fail("cell (" + std::to_string(r) + "," + std::to_string(c) + ") listed twice");
        s = 1;
        if (f.kind == FileKind::Array) {
            if (!e[2].is_array()) fail("array cells carry a symbol list");
            for (const auto& x : e[2]) {
                const int v = as_int(x, "symbol");
                check_range(v, n, "symbol");
                f.array.insert(r - 1, c - 1, v);
            }
        } else {
            const int v = as_int(e[2], "symbol");
            check_range(v, n, "symbol");
            f.grid.set(r - 1, c - 1, v);
        }
    }
    if (f.kind == FileKind::Latin && f.grid.filled_count() != n * n) fail("latin file must fill every cell");
    return f;
}

InstanceFile parse_text(const std::string& content) {
    std::istringstream in(content);
    std::string header;
    if (!std::getline(in, header)) fail("empty file");
    std::istringstream hs(header);
    int n = 0;
    std::string word;
    if (!(hs >> n)) fail("first line must be the order");
    InstanceFile f;
    f.n = parse_order(n);
    if (hs >> word) {
        if (word != "array") fail("unknown header word '" + word + "'");
        f.kind = FileKind::Array;
        f.array = AvoidanceArray(n);
    } else {
        f.grid = PartialLatinSquare(n);
    }
    for (int r = 0; r < n; ++r) {
        std::string line;
        if (!std::getline(in, line)) fail("expected " + std::to_string(n) + " rows");
        std::istringstream ls(line);
        for (int c = 0; c < n; ++c) {
            std::string tok;
            if (!(ls >> tok)) fail("row " + std::to_string(r + 1) + " is short");
            if (tok == ".") continue;
            std::istringstream ts(tok);
            std::string part;
            int count = 0;
            while (std::getline(ts, part, ',')) {
                std::size_t used = 0;
                int v = 0;
                try {
                    v = std::stoi(part, &used);
                } catch (const std::exception&) {
                    fail("bad entry '" + tok + "'");
                }
                if (used != part.size()) fail("bad entry '" + tok + "'");
                check_range(v, n, "symbol");
                if (f.kind == FileKind::Array) f.array.insert(r, c, v);
                else if (count == 0) f.grid.set(r, c, v);
                ++count;
            }
            if (f.kind != FileKind::Array && count != 1) fail("bad entry '" + tok + "'");
        }
        std::string extra;
        if (ls >> extra) fail("row " + std::to_string(r + 1) + " is long");
    }
    std::string rest;
    while (in >> rest) fail("trailing content after the grid");
    if (f.kind != FileKind::Array && f.grid.filled_count() == n * n) f.kind = FileKind::Latin;
    return f;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string to_json(const PartialLatinSquare& P) { return dump(grid_json(P, "pls")); }
std::string to_json(const LatinSquare& L) { return dump(grid_json(L.to_partial(), "latin")); }

std::string to_json(const AvoidanceArray& A) {
    const int n = A.order();
    json cells = json::array();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (A.size(r, c) > 0) cells.push_back({r + 1, c + 1, A.symbols(r, c)});
    return dump({{"kind", "array"}, {"n", n}, {"cells", std::move(cells)}});
}

std::string to_text(const PartialLatinSquare& P) { return grid_text(P); }
std::string to_text(const LatinSquare& L) { return grid_text(L.to_partial()); }

std::string to_text(const AvoidanceArray& A) {
    const int n = A.order();
    std::string s = std::to_string(n) + " array\n";
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (c) s += ' ';
            const auto sym = A.symbols(r, c);
            if (sym.empty()) s += '.';
            for (std::size_t i = 0; i < sym.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(sym[i]);
            }
        }
        s += '\n';
    }
    return s;
}

InstanceFile parse_instance(const std::string& content) {
    const auto pos = content.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) fail("empty file");
    return content[pos] == '{' ? parse_json(content) : parse_text(content);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("write failed for " + path);
}

std::string render_for_path(const std::string& path, const PartialLatinSquare& P) {
    return ends_with(path, ".txt") ? to_text(P) : to_json(P);
}
std::string render_for_path(const std::string& path, const LatinSquare& L) {
    return ends_with(path, ".txt") ? to_text(L) : to_json(L);
}
std::string render_for_path(const std::string& path, const AvoidanceArray& A) {
    return ends_with(path, ".txt") ? to_text(A) : to_json(A);
}

PartialLatinSquare load_pls(const std::string& path) {
    auto f = parse_instance(read_file(path));
    if (f.kind == FileKind::Array) throw ParseError(path + ": expected a pls file, got an array");
    return f.grid;
}

AvoidanceArray load_array(const std::string& path) {
    auto f = parse_instance(read_file(path));
    if (f.kind != FileKind::Array) throw ParseError(path + ": expected an array file");
    return f.array;
}

PartialLatinSquare load_grid(const std::string& path) { return load_pls(path); }

nlohmann::json stats_json(const SolveOutcome& out, bool with_timings) {
    const auto& s = out.stats;
    json j = {
        {"status", to_string(out.status)},
        {"message", out.message},
        {"mode", s.mode},
        {"oracle_used", s.oracle_used},
        {"oracle_nodes", s.oracle_nodes},
        {"scramble_tries", s.scramble_tries},
        {"scramble_badness", s.scramble_badness},
        {"restarts", s.restarts},
        {"q", s.q},
        {"fix_calls", s.fix_calls},
        {"fix_failures", s.fix_failures},
        {"initial_conflicts", s.initial_conflicts},
        {"prescribed_cells", s.prescribed_cells},
        {"coloring_f", s.coloring_f},
        {"relaxations", s.relaxations},
        {"routes", s.routes},
        {"levels", s.levels},
    };
    if (with_timings) {
        j["timings_ms"] = s.timings_ms;
        auto it = s.timings_ms.find("total");
        j["wall_ms"] = it == s.timings_ms.end() ? 0.0 : it->second;
    }
    return j;
}

nlohmann::json report_json(const Report& r) {
    json v = json::array();
    for (const auto& x : r.violations) {
        json e = {{"kind", x.kind}, {"row", x.cell.row + 1}, {"col", x.cell.col + 1}};
        if (x.symbol) e["symbol"] = x.symbol;
        v.push_back(std::move(e));
    }
    return {{"clean", r.clean()}, {"violations", std::move(v)}};
}

std::string trade_log_jsonl(const TradeLog& log) {
    const int n = log.n;
    std::vector<int> sigma, tau;
    for (int x : log.scramble.sigma) sigma.push_back(x + 1);
    for (int x : log.scramble.tau) tau.push_back(x + 1);
    json start = json::array();
    for (int r = 0; r < n; ++r)
        start.push_back(std::vector<int>(log.start.begin() + static_cast<std::ptrdiff_t>(r) * n,
                                         log.start.begin() + static_cast<std::ptrdiff_t>(r + 1) * n));
    std::string s = json({{"n", n}, {"sigma", sigma}, {"tau", tau}, {"start", start}}).dump() + "\n";
    for (std::size_t q = 0; q < log.trades.size(); ++q) {
        json cells = json::array();
        for (const auto& e : log.trades[q].entries)
            cells.push_back({e.cell.row + 1, e.cell.col + 1, e.old_symbol, e.new_symbol});
        s += json({{"q", q + 1}, {"cells", std::move(cells)}}).dump() + "\n";
    }
    return s;
}

TradeLog parse_trade_log(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    TradeLog log;
    bool header = false;
    try {
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const json j = json::parse(line);
            if (!header) {
                log.n = parse_order(as_int(j.at("n"), "n"));
                const int n = log.n;
                for (const auto& x : j.at("sigma")) log.scramble.sigma.push_back(as_int(x, "sigma") - 1);
                for (const auto& x : j.at("tau")) log.scramble.tau.push_back(as_int(x, "tau") - 1);
                for (const auto& row : j.at("start"))
                    for (const auto& x : row) log.start.push_back(as_int(x, "start"));
                if (static_cast<int>(log.scramble.sigma.size()) != n || static_cast<int>(log.scramble.tau.size()) != n ||
                    log.start.size() != static_cast<std::size_t>(n) * n)
                    fail("trade log header has the wrong sizes");
                header = true;
                continue;
            }
            Trade T;
            for (const auto& e : j.at("cells")) {
                if (!e.is_array() || e.size() != 4) fail("trade cells are [row, col, old, new]");
                const int r = as_int(e[0], "row"), c = as_int(e[1], "col");
                check_range(r, log.n, "row");
                check_range(c, log.n, "col");
                T.entries.push_back({{r - 1, c - 1}, as_int(e[2], "old"), as_int(e[3], "new")});
            }
            log.trades.push_back(std::move(T));
        }
    } catch (const json::exception& e) {
        fail(std::string("bad trade log: ") + e.what());
    }
    if (!header) fail("trade log is empty");
    return log;
}

}  // namespace rlsc
