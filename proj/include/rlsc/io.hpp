#pragma once

#include <string>

#include "json.hpp"
#include "rlsc/core.hpp"
#include "rlsc/pipeline.hpp"

namespace rlsc {

class ParseError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

enum class FileKind { Pls, Array, Latin };
std::string to_string(FileKind k);

// A parsed instance file. Grids are not validated here so that verify can
// report broken squares; "latin" files land in grid as well.
struct InstanceFile {
    FileKind kind = FileKind::Pls;
    int n = 0;
    PartialLatinSquare grid;
    AvoidanceArray array;
};

// Canonical JSON: {"cells":[[row,col,symbol],...],"kind":...,"n":...} with
// 1-based rows/columns, cells in row-major order, one trailing newline.
// Array cells carry a sorted symbol list instead of a symbol.
std::string to_json(const PartialLatinSquare& P);
std::string to_json(const LatinSquare& L);
std::string to_json(const AvoidanceArray& A);

// Text grid: first line n (followed by "array" for arrays), then n lines of n
// space-separated entries; "." is empty, array entries are comma-separated.
std::string to_text(const PartialLatinSquare& P);
std::string to_text(const LatinSquare& L);
std::string to_text(const AvoidanceArray& A);

// Detects JSON by a leading '{', text otherwise.
InstanceFile parse_instance(const std::string& content);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Text for paths ending in .txt, canonical JSON otherwise.
std::string render_for_path(const std::string& path, const PartialLatinSquare& P);
std::string render_for_path(const std::string& path, const LatinSquare& L);
std::string render_for_path(const std::string& path, const AvoidanceArray& A);

// Loaders with kind checks. load_pls also accepts "latin" files.
PartialLatinSquare load_pls(const std::string& path);
AvoidanceArray load_array(const std::string& path);
PartialLatinSquare load_grid(const std::string& path);

// Stats JSON as printed by the CLI; timings can be left out for byte comparisons.
nlohmann::json stats_json(const SolveOutcome& out, bool with_timings = true);
nlohmann::json report_json(const Report& r);

// JSON lines: a header {"n","sigma","tau","start"} then one {"q","cells"} per
// trade, cells as [row,col,old,new]. Everything 1-based.
std::string trade_log_jsonl(const TradeLog& log);
TradeLog parse_trade_log(const std::string& content);

}  // namespace rlsc
