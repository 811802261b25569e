#pragma once

#include <string>
#include <vector>

namespace prox0 {

// A point on a metric tree: a position `offset` along edge `edge`, measured
// from the edge's u endpoint. offset in [0, edge length].
struct TreeLocus {
    int edge = 0;
    double offset = 0.0;

    bool operator==(const TreeLocus& o) const { return edge == o.edge && offset == o.offset; }
};

struct TreeEdge {
    int u = 0;
    int v = 0;
    double length = 0.0;
};

// Finite weighted tree (connected, acyclic, positive edge lengths). Vertex
// names are kept for I/O; all internal work is index-based. Vertex-to-vertex
// distances are precomputed at construction; the tree is immutable after.
class MetricTree {
  public:
    MetricTree(std::vector<std::string> vertex_names, std::vector<TreeEdge> edges);

    int vertex_count() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const TreeEdge& edge(int e) const { return edges_[e]; }
    const std::string& vertex_name(int v) const { return names_[v]; }
    int vertex_index(const std::string& name) const;  // -1 if absent
    bool is_leaf(int v) const { return adjacency_[v].size() == 1; }

    double vertex_distance(int a, int b) const { return dist_[a][b]; }

    // Loci whose offset lands on an endpoint are re-homed to the smallest
    // incident edge id so equal points have equal payloads.
    TreeLocus canonical(TreeLocus p) const;
    TreeLocus vertex_locus(int v) const;
    // Vertex index if the locus sits on an endpoint, -1 otherwise.
    int vertex_of(const TreeLocus& p) const;

    void validate_locus(const TreeLocus& p) const;

    double distance(const TreeLocus& a, const TreeLocus& b) const;
    TreeLocus interpolate(const TreeLocus& a, const TreeLocus& b, double t) const;
    // Point at arc length s from a on the segment [a, b], s in [0, d(a,b)].
    TreeLocus walk(const TreeLocus& a, const TreeLocus& b, double s) const;
    // Sequence of vertices strictly between a and b along their path.
    std::vector<int> path_vertices(const TreeLocus& a, const TreeLocus& b) const;

    bool equal_within(const TreeLocus& a, const TreeLocus& b, double tol) const;

  private:
    struct Incident {
        int edge;
        int other;
    };

    double locus_to_vertex(const TreeLocus& p, int v) const;

    std::vector<std::string> names_;
    std::vector<TreeEdge> edges_;
    std::vector<std::vector<Incident>> adjacency_;
    std::vector<std::vector<double>> dist_;
    std::vector<int> smallest_incident_edge_;
};

}  // namespace prox0
