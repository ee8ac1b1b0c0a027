#pragma once

#include <cstdint>
#include <vector>

namespace qraft {

/// Exact minimum-weight perfect matching on a dense graph with integer
/// weights (blossom algorithm, O(n^3)). Vertices are 0..n-1; n must be even
/// and the graph complete. Ties are resolved deterministically by vertex
/// order.
class DenseMatcher {
  public:
    /// weights[u*n + v] = cost of edge (u, v). Must be symmetric.
    /// Returns mate[u] for every vertex.
    const std::vector<int>& solve(int n, const std::vector<int64_t>& weights);

    /// Total weight of the last matching (sum over matched pairs).
    int64_t total_weight() const { return total_; }

  private:
    struct Edge {
        int u = 0, v = 0;
        int64_t w = 0;
    };

    int n_ = 0, n_x_ = 0;
    int cap_nx_ = 0, cap_n_ = 0;    // workspace capacity (grow-only)
    std::vector<Edge> g_;           // (cap_nx+1)^2, 1-based
    std::vector<int64_t> lab_;
    std::vector<int> match_, slack_, st_, pa_, S_, vis_;
    std::vector<std::vector<int>> flower_;
    std::vector<int> flower_from_;  // (cap_nx+1) * (cap_n+1)
    std::vector<int> queue_;
    size_t q_head_ = 0;
    std::vector<int> mate_;
    int64_t total_ = 0;

    Edge& edge(int u, int v) { return g_[size_t(u) * (cap_nx_ + 1) + v]; }
    int& from(int b, int x) { return flower_from_[size_t(b) * (cap_n_ + 1) + x]; }

    int64_t e_delta(const Edge& e) const;
    void update_slack(int u, int x);
    void set_slack(int x);
    void q_push(int x);
    void set_st(int x, int b);
    int get_pr(int b, int xr);
    void set_match(int u, int v);
    void augment(int u, int v);
    int get_lca(int u, int v);
    void add_blossom(int u, int lca, int v);
    void expand_blossom(int b);
    bool on_found_edge(const Edge& e);
    bool matching_pass();
};

}  // namespace qraft
