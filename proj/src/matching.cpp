#include "qraft/matching.hpp"

#include <algorithm>
#include <limits>

#include "qraft/util.hpp"

namespace qraft {

// Primal-dual blossom algorithm for maximum-weight matching on a dense
// graph, specialized here to minimum-weight perfect matching through the
// usual cost reversal. Vertices are 1..n, contracted blossoms n+1..n_x.

namespace {
constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
}

int64_t DenseMatcher::e_delta(const Edge& e) const {
    return lab_[e.u] + lab_[e.v] - g_[size_t(e.u) * (cap_nx_ + 1) + e.v].w * 2;
}

void DenseMatcher::update_slack(int u, int x) {
    if (!slack_[x] || e_delta(edge(u, x)) < e_delta(edge(slack_[x], x))) slack_[x] = u;
}

void DenseMatcher::set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
        if (edge(u, x).w > 0 && st_[u] != x && S_[st_[u]] == 0) update_slack(u, x);
}

void DenseMatcher::q_push(int x) {
    if (x <= n_) {
        queue_.push_back(x);
    } else {
        for (int i : flower_[x]) q_push(i);
    }
}

void DenseMatcher::set_st(int x, int b) {
    st_[x] = b;
    if (x > n_)
        for (int i : flower_[x]) set_st(i, b);
}

int DenseMatcher::get_pr(int b, int xr) {
    int pr = int(std::find(flower_[b].begin(), flower_[b].end(), xr) - flower_[b].begin());
    if (pr % 2 == 1) {
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        return int(flower_[b].size()) - pr;
    }
    return pr;
}

void DenseMatcher::set_match(int u, int v) {
    match_[u] = edge(u, v).v;
    if (u > n_) {
        Edge e = edge(u, v);
        int xr = from(u, e.u);
        int pr = get_pr(u, xr);
        for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
        set_match(xr, v);
        std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
    }
}

void DenseMatcher::augment(int u, int v) {
    for (;;) {
        int xnv = st_[match_[u]];
        set_match(u, v);
        if (!xnv) return;
        set_match(xnv, st_[pa_[xnv]]);
        u = st_[pa_[xnv]];
        v = xnv;
    }
}

int DenseMatcher::get_lca(int u, int v) {
    static thread_local int t = 0;
    for (++t; u || v; std::swap(u, v)) {
        if (u == 0) continue;
        if (vis_[u] == t) return u;
        vis_[u] = t;
        u = st_[match_[u]];
        if (u) u = st_[pa_[u]];
    }
    return 0;
}

void DenseMatcher::add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) ++b;
    if (b > n_x_) ++n_x_;
    lab_[b] = 0;
    S_[b] = 0;
    match_[b] = match_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
        flower_[b].push_back(x);
        flower_[b].push_back(y = st_[match_[x]]);
        q_push(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
        flower_[b].push_back(x);
        flower_[b].push_back(y = st_[match_[x]]);
        q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; ++x) edge(b, x).w = edge(x, b).w = 0;
    for (int x = 1; x <= n_; ++x) from(b, x) = 0;
    for (int xs : flower_[b]) {
        for (int x = 1; x <= n_x_; ++x)
            if (edge(b, x).w == 0 || e_delta(edge(xs, x)) < e_delta(edge(b, x))) {
                edge(b, x) = edge(xs, x);
                edge(x, b) = edge(x, xs);
            }
        for (int x = 1; x <= n_; ++x)
            if (from(xs, x)) from(b, x) = xs;
    }
    set_slack(b);
}

void DenseMatcher::expand_blossom(int b) {
    for (int i : flower_[b]) set_st(i, i);
    int xr = from(b, edge(b, pa_[b]).u);
    int pr = get_pr(b, xr);
    for (int i = pr; i >= 2; i -= 2) {
        int xs = flower_[b][i], xns = flower_[b][i - 1];
        pa_[xs] = edge(xns, xs).u;
        S_[xs] = 1;
        S_[xns] = 0;
        slack_[xs] = 0;
        set_slack(xns);
        q_push(xns);
    }
    S_[xr] = 1;
    pa_[xr] = pa_[b];
    for (size_t i = size_t(pr) + 1; i < flower_[b].size(); ++i) {
        int xs = flower_[b][i];
        S_[xs] = -1;
        set_slack(xs);
    }
    st_[b] = 0;
}

bool DenseMatcher::on_found_edge(const Edge& e) {
    int u = st_[e.u], v = st_[e.v];
    if (S_[v] == -1) {
        pa_[v] = e.u;
        S_[v] = 1;
        int nu = st_[match_[v]];
        slack_[v] = slack_[nu] = 0;
        S_[nu] = 0;
        q_push(nu);
    } else if (S_[v] == 0) {
        int lca = get_lca(u, v);
        if (!lca) {
            augment(u, v);
            augment(v, u);
            return true;
        }
        add_blossom(u, lca, v);
    }
    return false;
}

bool DenseMatcher::matching_pass() {
    std::fill(S_.begin(), S_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
    queue_.clear();
    q_head_ = 0;
    for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && !match_[x]) {
            pa_[x] = 0;
            S_[x] = 0;
            q_push(x);
        }
    if (q_head_ == queue_.size()) return false;
    for (;;) {
        while (q_head_ < queue_.size()) {
            int u = queue_[q_head_++];
            if (S_[st_[u]] == 1) continue;
            for (int v = 1; v <= n_; ++v)
                if (edge(u, v).w > 0 && st_[u] != st_[v]) {
                    if (e_delta(edge(u, v)) == 0) {
                        if (on_found_edge(edge(u, v))) return true;
                    } else {
                        update_slack(u, st_[v]);
                    }
                }
        }
        int64_t d = kInf;
        for (int b = n_ + 1; b <= n_x_; ++b)
            if (st_[b] == b && S_[b] == 1) d = std::min(d, lab_[b] / 2);
        for (int x = 1; x <= n_x_; ++x)
            if (st_[x] == x && slack_[x]) {
                if (S_[x] == -1)
                    d = std::min(d, e_delta(edge(slack_[x], x)));
                else if (S_[x] == 0)
                    d = std::min(d, e_delta(edge(slack_[x], x)) / 2);
            }
        for (int u = 1; u <= n_; ++u) {
            if (S_[st_[u]] == 0) {
                if (lab_[u] <= d) return false;
                lab_[u] -= d;
            } else if (S_[st_[u]] == 1) {
                lab_[u] += d;
            }
        }
        for (int b = n_ + 1; b <= n_x_; ++b)
            if (st_[b] == b) {
                if (S_[b] == 0)
                    lab_[b] += d * 2;
                else if (S_[b] == 1)
                    lab_[b] -= d * 2;
            }
        queue_.clear();
        q_head_ = 0;
        for (int x = 1; x <= n_x_; ++x)
            if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                e_delta(edge(slack_[x], x)) == 0)
                if (on_found_edge(edge(slack_[x], x))) return true;
        for (int b = n_ + 1; b <= n_x_; ++b)
            if (st_[b] == b && S_[b] == 1 && lab_[b] == 0) expand_blossom(b);
    }
}

const std::vector<int>& DenseMatcher::solve(int n, const std::vector<int64_t>& weights) {
    require(n > 0 && n % 2 == 0, "matching needs an even vertex count");
    require(weights.size() == size_t(n) * n, "weight matrix size mismatch");

    int nx_cap = 2 * n;  // vertices plus up to n/2 simultaneous blossoms
    if (nx_cap > cap_nx_) {
        cap_nx_ = nx_cap;
        cap_n_ = n;
        g_.assign(size_t(cap_nx_ + 1) * (cap_nx_ + 1), Edge{});
        for (int u = 0; u <= cap_nx_; ++u)
            for (int v = 0; v <= cap_nx_; ++v) g_[size_t(u) * (cap_nx_ + 1) + v] = Edge{u, v, 0};
        lab_.assign(cap_nx_ + 1, 0);
        match_.assign(cap_nx_ + 1, 0);
        slack_.assign(cap_nx_ + 1, 0);
        st_.assign(cap_nx_ + 1, 0);
        pa_.assign(cap_nx_ + 1, 0);
        S_.assign(cap_nx_ + 1, -1);
        vis_.assign(cap_nx_ + 1, 0);
        flower_.assign(cap_nx_ + 1, {});
        flower_from_.assign(size_t(cap_nx_ + 1) * (cap_n_ + 1), 0);
    }
    n_ = n;
    n_x_ = n;

    // Reverse costs so maximum-weight matching minimizes the original cost;
    // the offset is large enough that perfect matchings always win.
    int64_t w_max_orig = 0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) w_max_orig = std::max(w_max_orig, weights[size_t(u) * n + v]);
    int64_t big = w_max_orig + 1;

    int64_t w_max = 0;
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v) {
            from(u, v) = u == v ? u : 0;
            edge(u, v).w = u == v ? 0 : big - weights[size_t(u - 1) * n + (v - 1)];
            w_max = std::max(w_max, edge(u, v).w);
        }
    for (int x = 0; x <= nx_cap; ++x) {
        st_[x] = x <= n ? x : 0;
        match_[x] = 0;
        lab_[x] = x >= 1 && x <= n ? w_max : 0;
        flower_[x].clear();
    }
    st_[0] = 0;

    while (matching_pass()) {
    }

    mate_.assign(n, -1);
    total_ = 0;
    for (int u = 1; u <= n; ++u) {
        require(match_[u] != 0, "matching is not perfect");
        mate_[u - 1] = match_[u] - 1;
        if (u < match_[u]) total_ += weights[size_t(u - 1) * n + (match_[u] - 1)];
    }
    return mate_;
}

}  // namespace qraft
