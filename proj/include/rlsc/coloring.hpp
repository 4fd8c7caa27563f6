#pragma once

#include <random>
#include <vector>

#include "rlsc/core.hpp"

namespace rlsc {

class ColoringFailed : public Error {
public:
    using Error::Error;
};
class MergeClash : public Error {
public:
    using Error::Error;
};

// Bipartite graph on row and column vertices; edge (r,c) is a conflict cell.
struct ConflictGraph {
    int n = 0;
    std::vector<Cell> edges;  // sorted, unique
    int max_degree() const;
};

struct ListAssignment {
    std::vector<std::vector<int>> lists;  // per edge, ascending
    std::size_t min_size() const;
};

// Edges are the cells with L0(i,j) in A(i,j) and P(i,j) empty.
ConflictGraph build_conflict_graph(const LatinSquare& L0, const AvoidanceArray& A, const PartialLatinSquare& P);

// c is in the list of (i,j) iff c is not in A(i,j) and not in row i or column j of P.
ListAssignment build_lists(const ConflictGraph& G, const AvoidanceArray& A, const PartialLatinSquare& P);

// Proper, in-list edge colouring using each colour at most f times.
// Throws ColoringFailed when greedy, recolouring and restarts all fail.
std::vector<int> list_edge_color_bounded(const ConflictGraph& G, const ListAssignment& lists, int f,
                                         std::mt19937_64& rng);

// Empty string when colors is proper, in-list and within multiplicity f.
std::string check_edge_coloring(const ConflictGraph& G, const ListAssignment& lists, const std::vector<int>& colors,
                                int f);

// P-hat = P together with R, where R(e) = colors[e].
PartialLatinSquare build_R_and_merge(const ConflictGraph& G, const std::vector<int>& colors,
                                     const PartialLatinSquare& P);

}  // namespace rlsc
