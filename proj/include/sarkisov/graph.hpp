#pragma once

#include "sarkisov/untwist.hpp"

namespace sarkisov {

/// Vertex of the untwisting graph: a Mori model together with the residual
/// map to the fixed destination. Vertices are merged when a square
/// isomorphism compatible with the residuals exists (the certificate is the
/// unique candidate matrix).
struct GraphVertex {
    ToricMoriFibreSpace model;
    Mat residual_matrix;
    DegreeLedgerEntry degree;
    bool is_destination = false;
    std::string key;
    int depth = 0;
};

struct GraphEdge {
    int from = 0;
    int to = 0;
    int choice = 0; // canonical choice index at the source vertex
    SarkisovLink link;
};

struct SarkisovGraph {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;
    int source = 0;
    int destination = -1;
    bool complete = true;
    std::string diagnostic;
};

struct GraphCaps {
    int max_depth = 16;
    int max_vertices = 512;
    int step_cap = 64;
    std::optional<InvariantDivisor> case2_base_divisor;
};

/// Breadth-first exhaustive enumeration of untwisting choices: all maximal
/// extractions in Case 1, all negative extremal rays in Case 2. Square
/// isomorphic states are merged; exploration stops at the destination.
SarkisovGraph build_graph(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target,
                          const GraphCaps& caps = {});

struct GraphReport {
    bool pass = true;
    std::vector<std::string> lines;
    long path_count = 0;
};

/// Verifies the graph-theorem properties: unique source and destination,
/// every path replays to a valid untwisting sequence, and every engine
/// sequence's steps appear among the edges.
GraphReport verify_graph(const SarkisovGraph& g, const ToricBirationalMap& phi,
                         const MonomialLinearSystem& h_target, const GraphCaps& caps = {});

std::string export_graph_dot(const SarkisovGraph& g);
std::string export_graph_structured(const SarkisovGraph& g);

/// Canonical state key used for vertex identity (exposed for tests).
std::string vertex_key(const ToricMoriFibreSpace& model, const Mat& residual);

} // namespace sarkisov
