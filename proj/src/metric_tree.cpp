#include "prox0/metric_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "prox0/errors.hpp"

namespace prox0 {

namespace {
constexpr double kEndSnap = 1e-12;
}

MetricTree::MetricTree(std::vector<std::string> vertex_names, std::vector<TreeEdge> edges)
    : names_(std::move(vertex_names)), edges_(std::move(edges)) {
    const int n = static_cast<int>(names_.size());
    if (n < 1) throw ValidationError("MetricTree: needs at least one vertex");
    if (static_cast<int>(edges_.size()) != n - 1)
        throw ValidationError("MetricTree: a tree on n vertices has exactly n-1 edges");

    {
        std::unordered_map<std::string, int> seen;
        for (int v = 0; v < n; ++v)
            if (!seen.emplace(names_[v], v).second)
                throw ValidationError("MetricTree: duplicate vertex name " + names_[v]);
    }

    adjacency_.assign(n, {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        const auto& ed = edges_[e];
        if (ed.u < 0 || ed.u >= n || ed.v < 0 || ed.v >= n || ed.u == ed.v)
            throw ValidationError("MetricTree: edge endpoints out of range");
        if (!(ed.length > 0.0))
            throw ValidationError("MetricTree: edge lengths must be strictly positive");
        adjacency_[ed.u].push_back({e, ed.v});
        adjacency_[ed.v].push_back({e, ed.u});
    }

    // connectivity (acyclicity follows from the edge count)
    std::vector<char> visited(n, 0);
    std::deque<int> queue{0};
    visited[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (const auto& inc : adjacency_[v])
            if (!visited[inc.other]) {
                visited[inc.other] = 1;
                ++reached;
                queue.push_back(inc.other);
            }
    }
    if (reached != n) throw ValidationError("MetricTree: graph is not connected");

    dist_.assign(n, std::vector<double>(n, 0.0));
    for (int root = 0; root < n; ++root) {
        std::deque<int> q{root};
        std::vector<char> seen(n, 0);
        seen[root] = 1;
        while (!q.empty()) {
            const int v = q.front();
            q.pop_front();
            for (const auto& inc : adjacency_[v])
                if (!seen[inc.other]) {
                    seen[inc.other] = 1;
                    dist_[root][inc.other] = dist_[root][v] + edges_[inc.edge].length;
                    q.push_back(inc.other);
                }
        }
    }

    smallest_incident_edge_.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        int best = adjacency_[v][0].edge;
        for (const auto& inc : adjacency_[v]) best = std::min(best, inc.edge);
        smallest_incident_edge_[v] = best;
    }
}

int MetricTree::vertex_index(const std::string& name) const {
    for (int v = 0; v < vertex_count(); ++v)
        if (names_[v] == name) return v;
    return -1;
}

void MetricTree::validate_locus(const TreeLocus& p) const {
    if (p.edge < 0 || p.edge >= edge_count())
        throw ValidationError("tree locus: edge id out of range");
    const double len = edges_[p.edge].length;
    if (!(p.offset >= 0.0) || !(p.offset <= len) || !std::isfinite(p.offset))
        throw ValidationError("tree locus: offset outside [0, edge length]");
}

TreeLocus MetricTree::vertex_locus(int v) const {
    const int e = smallest_incident_edge_[v];
    return edges_[e].u == v ? TreeLocus{e, 0.0} : TreeLocus{e, edges_[e].length};
}

int MetricTree::vertex_of(const TreeLocus& p) const {
    const auto& ed = edges_[p.edge];
    if (p.offset <= kEndSnap) return ed.u;
    if (ed.length - p.offset <= kEndSnap) return ed.v;
    return -1;
}

TreeLocus MetricTree::canonical(TreeLocus p) const {
    validate_locus(p);
    const int v = vertex_of(p);
    if (v >= 0) return vertex_locus(v);
    return p;
}

double MetricTree::locus_to_vertex(const TreeLocus& p, int v) const {
    const auto& ed = edges_[p.edge];
    return std::min(p.offset + dist_[ed.u][v], (ed.length - p.offset) + dist_[ed.v][v]);
}

double MetricTree::distance(const TreeLocus& a, const TreeLocus& b) const {
    if (a.edge == b.edge) return std::abs(a.offset - b.offset);
    const auto& eb = edges_[b.edge];
    return std::min(locus_to_vertex(a, eb.u) + b.offset,
                    locus_to_vertex(a, eb.v) + (eb.length - b.offset));
}

std::vector<int> MetricTree::path_vertices(const TreeLocus& a, const TreeLocus& b) const {
    if (a.edge == b.edge) return {};
    const auto& ea = edges_[a.edge];
    const auto& eb = edges_[b.edge];

    // entry/exit vertices of the path through the vertex skeleton
    int wa = ea.u;
    double best = a.offset + locus_to_vertex(b, ea.u);
    const double via_v = (ea.length - a.offset) + locus_to_vertex(b, ea.v);
    if (via_v < best) {
        best = via_v;
        wa = ea.v;
    }
    int wb = eb.u;
    if (locus_to_vertex(a, eb.v) + (eb.length - b.offset) <
        locus_to_vertex(a, eb.u) + b.offset)
        wb = eb.v;

    // vertex path wa .. wb by parent search
    std::vector<int> parent(vertex_count(), -1);
    std::vector<char> seen(vertex_count(), 0);
    std::deque<int> q{wa};
    seen[wa] = 1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        if (v == wb) break;
        for (const auto& inc : adjacency_[v])
            if (!seen[inc.other]) {
                seen[inc.other] = 1;
                parent[inc.other] = v;
                q.push_back(inc.other);
            }
    }
    std::vector<int> path;
    for (int v = wb; v != -1; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;  // starts at wa, ends at wb
}

TreeLocus MetricTree::walk(const TreeLocus& a, const TreeLocus& b, double s) const {
    const double total = distance(a, b);
    s = std::clamp(s, 0.0, total);

    if (a.edge == b.edge) {
        const double off = a.offset + (b.offset >= a.offset ? s : -s);
        return canonical({a.edge, off});
    }

    const auto path = path_vertices(a, b);  // wa .. wb
    const auto& ea = edges_[a.edge];
    const int wa = path.front();
    const double lead = (wa == ea.u) ? a.offset : ea.length - a.offset;

    if (s <= lead) {
        const double off = (wa == ea.u) ? a.offset - s : a.offset + s;
        return canonical({a.edge, off});
    }
    double rest = s - lead;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        const int u = path[i];
        const int v = path[i + 1];
        // locate the edge joining u and v
        int e = -1;
        for (const auto& inc : adjacency_[u])
            if (inc.other == v) {
                e = inc.edge;
                break;
            }
        const double len = edges_[e].length;
        if (rest <= len) {
            const double off = (edges_[e].u == u) ? rest : len - rest;
            return canonical({e, off});
        }
        rest -= len;
    }
    // remaining stretch lies on b's edge, entering through wb
    const auto& eb = edges_[b.edge];
    const int wb = path.back();
    const double off = (wb == eb.u) ? rest : eb.length - rest;
    return canonical({b.edge, off});
}

TreeLocus MetricTree::interpolate(const TreeLocus& a, const TreeLocus& b, double t) const {
    return walk(a, b, t * distance(a, b));
}

bool MetricTree::equal_within(const TreeLocus& a, const TreeLocus& b, double tol) const {
    return distance(a, b) <= tol;
}

}  // namespace prox0
