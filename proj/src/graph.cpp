#include "sarkisov/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "sarkisov/errors.hpp"
#include "sarkisov/io.hpp"

namespace sarkisov {

std::string vertex_key(const ToricMoriFibreSpace& model, const Mat& residual) {
    Json j;
    j["model"] = mfs_to_json(model);
    j["residual"] = mat_to_json(residual);
    return j.dump();
}

namespace {

struct Choice {
    SarkisovLink link;
};

// All untwisting choices at a state, canonical order: extraction index in
// Case 1, negative-ray index in Case 2.
std::vector<Choice> enumerate_choices(const ToricBirationalMap& residual,
                                      const MonomialLinearSystem& h_target,
                                      const GraphCaps& caps) {
    DegreeData dd = analyze_map(residual, h_target);
    std::vector<Choice> out;
    if (dd.nfi == NfiCase::SquareIso) return out;
    if (dd.nfi == NfiCase::Case1) {
        MonomialLinearSystem h_at_c = dd.h_source;
        h_at_c.scale = dd.degree.c;
        std::vector<MaximalExtraction> exs =
            find_maximal_extractions(residual.source.total, h_at_c);
        for (const MaximalExtraction& ex : exs) {
            Choice c;
            c.link = two_ray_game_case1(residual.source, dd.h_source, dd.degree.c, ex, {},
                                        caps.step_cap);
            out.push_back(std::move(c));
        }
    } else {
        std::vector<Case2Candidate> cands =
            case2_candidates(residual.source, dd.h_source, dd.degree.mu, caps.case2_base_divisor);
        for (size_t i = 0; i < cands.size(); ++i) {
            Choice c;
            c.link = two_ray_game_case2(residual.source, dd.h_source, dd.degree.mu,
                                        caps.case2_base_divisor, static_cast<int>(i),
                                        caps.step_cap);
            out.push_back(std::move(c));
        }
    }
    return out;
}

} // namespace

SarkisovGraph build_graph(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target,
                          const GraphCaps& caps) {
    SarkisovGraph g;
    std::map<std::string, int> index;

    auto add_vertex = [&](const ToricMoriFibreSpace& model, const Mat& residual,
                          int depth) -> int {
        std::string key = vertex_key(model, residual);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        // Merge across square isomorphisms compatible with the residuals: the
        // only candidate identification is B = residual_u^{-1} * residual.
        for (size_t u = 0; u < g.vertices.size(); ++u) {
            const GraphVertex& gv = g.vertices[u];
            if (gv.model.total.fan.dim != model.total.fan.dim) continue;
            Mat b = mul(unimodular_inverse(gv.residual_matrix), residual);
            try {
                ToricBirationalMap ident = make_map(b, model, gv.model);
                if (is_square_isomorphism(ident)) return static_cast<int>(u);
            } catch (const EngineError&) {
                continue;
            }
        }
        ToricBirationalMap res = make_map(residual, model, phi.target);
        DegreeData dd = analyze_map(res, h_target);
        GraphVertex v;
        v.model = model;
        v.residual_matrix = residual;
        v.degree = ledger_entry(dd);
        v.is_destination = dd.nfi == NfiCase::SquareIso;
        v.key = key;
        v.depth = depth;
        g.vertices.push_back(std::move(v));
        index[key] = static_cast<int>(g.vertices.size()) - 1;
        return static_cast<int>(g.vertices.size()) - 1;
    };

    int source = add_vertex(phi.source, phi.matrix, 0);
    g.source = source;
    std::deque<int> frontier{source};
    std::vector<bool> expanded;

    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        if (v < static_cast<int>(expanded.size()) && expanded[v]) continue;
        if (static_cast<int>(expanded.size()) <= v) expanded.resize(v + 1, false);
        expanded[v] = true;
        if (g.vertices[v].is_destination) continue;
        if (g.vertices[v].depth >= caps.max_depth) {
            g.complete = false;
            g.diagnostic = "depth cap reached at vertex " + std::to_string(v);
            continue;
        }
        ToricBirationalMap residual =
            make_map(g.vertices[v].residual_matrix, g.vertices[v].model, phi.target);
        std::vector<Choice> choices = enumerate_choices(residual, h_target, caps);
        for (size_t i = 0; i < choices.size(); ++i) {
            if (static_cast<int>(g.vertices.size()) > caps.max_vertices) {
                g.complete = false;
                g.diagnostic = "vertex cap exceeded";
                return g;
            }
            int child = add_vertex(choices[i].link.target, g.vertices[v].residual_matrix,
                                   g.vertices[v].depth + 1);
            GraphEdge e;
            e.from = v;
            e.to = child;
            e.choice = static_cast<int>(i);
            e.link = choices[i].link;
            g.edges.push_back(std::move(e));
            if (child >= static_cast<int>(expanded.size()) || !expanded[child])
                frontier.push_back(child);
        }
    }
    g.destination = -1;
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.vertices[v].is_destination) continue;
        if (g.destination >= 0)
            fail(ErrorKind::InternalInvariantViolation, "two distinct destination vertices");
        g.destination = static_cast<int>(v);
    }
    if (g.destination < 0 && g.complete) {
        g.complete = false;
        g.diagnostic = "no destination vertex reached";
    }
    return g;
}

namespace {

bool links_match(const SarkisovLink& a, const SarkisovLink& b) {
    if (a.kind != b.kind || a.subtype != b.subtype) return false;
    if (a.extraction.has_value() != b.extraction.has_value()) return false;
    if (a.extraction && *a.extraction != *b.extraction) return false;
    return a.target.total.fan == b.target.total.fan && a.target.base.fan == b.target.base.fan &&
           a.target.projection == b.target.projection;
}

} // namespace

GraphReport verify_graph(const SarkisovGraph& g, const ToricBirationalMap& phi,
                         const MonomialLinearSystem& h_target, const GraphCaps& caps) {
    GraphReport rep;
    auto note = [&](bool ok, const std::string& line) {
        rep.lines.push_back(std::string(ok ? "[ok] " : "[FAIL] ") + line);
        if (!ok) rep.pass = false;
    };
    if (!g.complete) {
        note(false, "graph is partial: " + g.diagnostic);
        return rep;
    }

    std::vector<int> indeg(g.vertices.size(), 0), outdeg(g.vertices.size(), 0);
    for (const GraphEdge& e : g.edges) {
        indeg[e.to] += 1;
        outdeg[e.from] += 1;
    }
    bool src_ok = indeg[g.source] == 0;
    for (size_t v = 0; v < g.vertices.size(); ++v)
        if (static_cast<int>(v) != g.source && indeg[v] == 0) src_ok = false;
    note(src_ok, "unique source with in-degree 0");
    bool dst_ok = g.destination >= 0 && outdeg[g.destination] == 0 &&
                  g.vertices[g.destination].is_destination;
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (static_cast<int>(v) == g.destination) continue;
        if (outdeg[v] == 0 || g.vertices[v].is_destination) dst_ok = false;
    }
    note(dst_ok, "unique destination with out-degree 0");

    // Acyclicity: any cycle could only consist of IVb-tied edges.
    {
        std::vector<int> deg = indeg;
        std::deque<int> q;
        for (size_t v = 0; v < g.vertices.size(); ++v)
            if (deg[v] == 0) q.push_back(static_cast<int>(v));
        size_t seen = 0;
        std::vector<std::vector<int>> out_edges(g.vertices.size());
        for (size_t e = 0; e < g.edges.size(); ++e) out_edges[g.edges[e].from].push_back(static_cast<int>(e));
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            ++seen;
            for (int e : out_edges[v])
                if (--deg[g.edges[e].to] == 0) q.push_back(g.edges[e].to);
        }
        bool acyclic = seen == g.vertices.size();
        if (!acyclic) {
            bool only_ivb = true;
            for (size_t v = 0; v < g.vertices.size(); ++v) {
                if (deg[v] == 0) continue;
                for (int e : out_edges[v]) {
                    const SarkisovLink& l = g.edges[e].link;
                    if (!(l.kind == LinkKind::IV && l.subtype == 'b')) only_ivb = false;
                }
            }
            note(only_ivb, "cycles consist of Case 2-(IVb) ties only");
        } else {
            note(true, "strictly decreasing subgraph is acyclic");
        }
    }

    // Out-degree at every vertex equals the number of untwisting choices, and
    // the choice indices are exactly 0..k-1 (the edge injection).
    std::vector<std::vector<const GraphEdge*>> by_vertex(g.vertices.size());
    for (const GraphEdge& e : g.edges) by_vertex[e.from].push_back(&e);
    bool inj_ok = true;
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        ToricBirationalMap residual =
            make_map(g.vertices[v].residual_matrix, g.vertices[v].model, phi.target);
        DegreeData dd = analyze_map(residual, h_target);
        size_t expected = 0;
        if (dd.nfi == NfiCase::Case1) {
            MonomialLinearSystem h_at_c = dd.h_source;
            h_at_c.scale = dd.degree.c;
            expected = find_maximal_extractions(residual.source.total, h_at_c).size();
        } else if (dd.nfi == NfiCase::Case2) {
            expected =
                case2_candidates(residual.source, dd.h_source, dd.degree.mu, caps.case2_base_divisor)
                    .size();
        }
        if (by_vertex[v].size() != expected) inj_ok = false;
        std::vector<bool> used(expected, false);
        for (const GraphEdge* e : by_vertex[v]) {
            if (e->choice < 0 || e->choice >= static_cast<int>(expected) || used[e->choice])
                inj_ok = false;
            else
                used[e->choice] = true;
        }
    }
    note(inj_ok, "every untwisting step appears as an edge (choice injection)");

    // Path enumeration + replay through the engine.
    long paths = 0;
    bool replay_ok = true;
    std::vector<int> stack_edges;
    std::function<void(int)> dfs = [&](int v) {
        if (paths > 100000 || !replay_ok) return;
        if (static_cast<int>(v) == g.destination) {
            ++paths;
            // Replay this path.
            ToricBirationalMap cur = phi;
            for (int ei : stack_edges) {
                const GraphEdge& e = g.edges[ei];
                std::vector<Choice> choices = enumerate_choices(cur, h_target, caps);
                if (e.choice >= static_cast<int>(choices.size())) {
                    replay_ok = false;
                    return;
                }
                const SarkisovLink& produced = choices[e.choice].link;
                if (!links_match(produced, e.link)) {
                    replay_ok = false;
                    return;
                }
                cur = make_map(cur.matrix, produced.target, phi.target);
            }
            if (!is_square_isomorphism(cur)) replay_ok = false;
            return;
        }
        for (size_t ei = 0; ei < g.edges.size(); ++ei) {
            if (g.edges[ei].from != v) continue;
            stack_edges.push_back(static_cast<int>(ei));
            dfs(g.edges[ei].to);
            stack_edges.pop_back();
        }
    };
    if (g.destination >= 0) dfs(g.source);
    rep.path_count = paths;
    note(replay_ok, "every source-to-destination path replays to a valid untwisting sequence (" +
                        std::to_string(paths) + " paths)");
    return rep;
}

std::string export_graph_dot(const SarkisovGraph& g) {
    std::ostringstream os;
    os << "digraph sarkisov {\n";
    os << "  rankdir=LR;\n";
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        const GraphVertex& gv = g.vertices[v];
        os << "  v" << v << " [label=\"v" << v << "\\nrays=" << gv.model.total.fan.rays.size()
           << " base_dim=" << gv.model.base.fan.dim << "\\nmu=" << gv.degree.degree.mu.str()
           << " c=" << gv.degree.degree.c.str() << " e=" << gv.degree.degree.e.str() << "\"";
        if (static_cast<int>(v) == g.source) os << " shape=box";
        if (static_cast<int>(v) == g.destination) os << " shape=doublecircle";
        os << "];\n";
    }
    for (const GraphEdge& e : g.edges) {
        const DegreeLedgerEntry& a = g.vertices[e.from].degree;
        const DegreeLedgerEntry& b = g.vertices[e.to].degree;
        std::string kind = link_kind_name(e.link.kind);
        if (e.link.subtype) kind += e.link.subtype;
        os << "  v" << e.from << " -> v" << e.to << " [label=\"" << kind;
        if (e.link.extraction) os << " @" << vec_str(*e.link.extraction);
        os << "\\nmu " << a.degree.mu.str() << "->" << b.degree.mu.str() << ", c "
           << a.degree.c.str() << "->" << b.degree.c.str() << ", e " << a.degree.e.str() << "->"
           << b.degree.e.str() << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string export_graph_structured(const SarkisovGraph& g) {
    Json j;
    j["source"] = g.source;
    j["destination"] = g.destination;
    j["complete"] = g.complete;
    if (!g.diagnostic.empty()) j["diagnostic"] = g.diagnostic;
    Json vs = Json::array();
    for (const GraphVertex& v : g.vertices) {
        Json jv;
        jv["model"] = mfs_to_json(v.model);
        jv["residual_matrix"] = mat_to_json(v.residual_matrix);
        jv["degree"] = degree_to_json(v.degree.degree);
        jv["augmented"] = augmented_to_json(v.degree.augmented);
        jv["case"] = nfi_case_name(v.degree.nfi);
        jv["is_destination"] = v.is_destination;
        jv["depth"] = v.depth;
        vs.push_back(jv);
    }
    j["vertices"] = vs;
    Json es = Json::array();
    for (const GraphEdge& e : g.edges) {
        Json je;
        je["from"] = e.from;
        je["to"] = e.to;
        je["choice"] = e.choice;
        je["link"] = link_to_json(e.link);
        es.push_back(je);
    }
    j["edges"] = es;
    return j.dump(1);
}

} // namespace sarkisov
