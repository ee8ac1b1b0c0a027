#include "qraft/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <thread>

namespace qraft {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Splits a fault's Pauli action into its X part and Z part. Components are
// encoded as in sim.cpp: two bits per qubit, low bit X, high bit Z; pair
// components use (pa << 2) | pb.
uint8_t x_part(uint8_t comp, bool pair) {
    if (!pair) return comp & 1;
    return uint8_t(((comp >> 2) & 1) << 2 | (comp & 1));
}
uint8_t z_part(uint8_t comp, bool pair) {
    if (!pair) return comp & 2;
    return uint8_t(((comp >> 2) & 2) << 2 | (comp & 2));
}

}  // namespace

DetectorGraph DetectorGraph::from_catalog(const FaultCatalog& catalog) {
    DetectorGraph g;
    g.n_detectors_ = catalog.n_detectors;
    g.n_observables_ = catalog.n_observables;
    require(catalog.n_observables <= 64, "at most 64 observables supported");

    // (channel, component) -> catalog index, for hyperedge decomposition.
    std::map<std::pair<uint32_t, uint8_t>, size_t> sibling;
    for (size_t i = 0; i < catalog.faults.size(); ++i)
        sibling[{catalog.faults[i].channel_index, catalog.faults[i].component}] = i;

    uint32_t boundary = g.boundary_node();
    // (u, v, mask) -> merged probability
    std::map<std::tuple<uint32_t, uint32_t, uint64_t>, double> merged;

    auto mask_of = [](const Fault& f) {
        uint64_t m = 0;
        for (uint32_t o : f.observables) m |= uint64_t(1) << o;
        return m;
    };
    auto add_edge = [&](uint32_t a, uint32_t b, uint64_t mask, double p) {
        if (a > b) std::swap(a, b);
        double& acc = merged[{a, b, mask}];
        acc = acc * (1.0 - p) + p * (1.0 - acc);
    };
    auto add_simple = [&](const Fault& f, double p) -> bool {
        if (f.detectors.size() > 2) return false;
        uint64_t mask = mask_of(f);
        if (f.detectors.empty()) {
            if (mask != 0)
                throw std::invalid_argument(
                    "fault flips an observable without flipping any detector; "
                    "not decodable by matching");
            return true;  // trivial fault, ignore
        }
        if (f.detectors.size() == 1)
            add_edge(f.detectors[0], boundary, mask, p);
        else
            add_edge(f.detectors[0], f.detectors[1], mask, p);
        return true;
    };

    for (const auto& f : catalog.faults) {
        if (add_simple(f, f.probability)) continue;
        // Hyperedge: decompose into the X-part and Z-part sibling components,
        // each inheriting the full component probability.
        bool pair = f.component > 3;
        uint8_t xs = x_part(f.component, pair);
        uint8_t zs = z_part(f.component, pair);
        if (xs == 0 || zs == 0 || xs == f.component || zs == f.component)
            throw std::invalid_argument(
                "fault flips >2 detectors and has no X/Z decomposition (channel " +
                std::to_string(f.channel_index) + ")");
        for (uint8_t part : {xs, zs}) {
            auto it = sibling.find({f.channel_index, part});
            require(it != sibling.end(), "missing sibling component in catalog");
            const Fault& sub = catalog.faults[it->second];
            if (!add_simple(sub, f.probability))
                throw std::invalid_argument(
                    "fault component flips >2 detectors even after X/Z decomposition "
                    "(channel " +
                    std::to_string(f.channel_index) + ")");
        }
    }

    for (const auto& [key, p] : merged) {
        auto [u, v, mask] = key;
        require(p < 0.5, "merged edge probability >= 0.5; matching weights would not be positive");
        GraphEdge e;
        e.u = u;
        e.v = v;
        e.probability = p;
        e.weight = std::log((1.0 - p) / p);
        e.observable_mask = mask;
        g.edges_.push_back(e);
    }
    return g;
}

void DetectorGraph::prepare() {
    size_t n = n_detectors_ + 1;
    dist_.assign(n, {});
    mask_.assign(n, {});

    struct Adj {
        uint32_t to;
        double w;
        uint64_t mask;
    };
    std::vector<std::vector<Adj>> adj(n);
    for (const auto& e : edges_) {
        adj[e.u].push_back({e.v, e.weight, e.observable_mask});
        adj[e.v].push_back({e.u, e.weight, e.observable_mask});
    }

    using Item = std::pair<double, uint32_t>;
    std::vector<double> d(n);
    std::vector<uint64_t> m(n);
    std::vector<uint8_t> done(n);
    for (uint32_t src = 0; src < n; ++src) {
        std::fill(d.begin(), d.end(), kInf);
        std::fill(m.begin(), m.end(), 0);
        std::fill(done.begin(), done.end(), 0);
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        d[src] = 0;
        pq.push({0, src});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (done[u]) continue;
            done[u] = 1;
            for (const auto& a : adj[u]) {
                double nd = du + a.w;
                if (nd < d[a.to]) {
                    d[a.to] = nd;
                    m[a.to] = m[u] ^ a.mask;
                    pq.push({nd, a.to});
                }
            }
        }
        dist_[src] = d;
        mask_[src].assign(m.begin(), m.end());
    }
}

std::string DetectorGraph::to_json() const {
    std::ostringstream os;
    os << "{\n  \"n_detectors\": " << n_detectors_
       << ",\n  \"n_observables\": " << n_observables_ << ",\n  \"edges\": [\n";
    for (size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        os << "    {\"u\": " << e.u << ", \"v\": ";
        if (e.v == boundary_node())
            os << "\"boundary\"";
        else
            os << e.v;
        os << ", \"p\": " << format12(e.probability) << ", \"weight\": " << format12(e.weight)
           << ", \"observables\": [";
        bool first = true;
        for (int b = 0; b < 64; ++b)
            if ((e.observable_mask >> b) & 1) {
                if (!first) os << ", ";
                os << b;
                first = false;
            }
        os << "]}" << (i + 1 < edges_.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

Decoder::Decoder(DetectorGraph& graph) : graph_(graph) {
    if (!graph_.prepared()) graph_.prepare();
    comp_of_.assign(graph_.n_detectors(), -1);
}

int64_t Decoder::scale_weight(double w) {
    // Fixed-point scaling keeps the blossom duals integral and termination
    // exact. 2^20 per unit weight leaves ample headroom in int64.
    return int64_t(std::llround(w * 1048576.0));
}

uint64_t Decoder::decode(const std::vector<uint8_t>& syndrome) {
    require(syndrome.size() == graph_.n_detectors(), "syndrome length mismatch");
    flagged_.clear();
    for (uint32_t i = 0; i < syndrome.size(); ++i)
        if (syndrome[i]) flagged_.push_back(i);
    last_weight_ = 0;
    if (flagged_.empty()) return 0;

    uint32_t bnd = graph_.boundary_node();
    size_t k = flagged_.size();

    // Split defects into independent groups: pairing two defects is only
    // ever preferable to sending both to the boundary when the direct path
    // is strictly shorter, so components of that relation decode separately.
    for (uint32_t i : flagged_) comp_of_[i] = -1;
    std::vector<std::vector<uint32_t>> groups;
    for (size_t s = 0; s < k; ++s) {
        if (comp_of_[flagged_[s]] != -1) continue;
        int comp = int(groups.size());
        groups.emplace_back();
        comp_stack_.assign(1, flagged_[s]);
        comp_of_[flagged_[s]] = comp;
        while (!comp_stack_.empty()) {
            uint32_t u = comp_stack_.back();
            comp_stack_.pop_back();
            groups[comp].push_back(u);
            double ub = graph_.distance(u, bnd);
            for (uint32_t v : flagged_) {
                if (comp_of_[v] != -1) continue;
                if (graph_.distance(u, v) < ub + graph_.distance(v, bnd)) {
                    comp_of_[v] = comp;
                    comp_stack_.push_back(v);
                }
            }
        }
        std::sort(groups[comp].begin(), groups[comp].end());
    }

    uint64_t prediction = 0;
    std::vector<int64_t> w;
    for (const auto& group : groups) {
        size_t gk = group.size();
        if (gk == 1) {
            uint32_t u = group[0];
            require(std::isfinite(graph_.distance(u, bnd)),
                    "flagged detector cannot reach the boundary");
            prediction ^= graph_.path_mask(u, bnd);
            last_weight_ += scale_weight(graph_.distance(u, bnd));
            continue;
        }
        // Nodes 0..gk-1 are defects, gk..2gk-1 boundary slots.
        size_t nn = 2 * gk;
        w.assign(nn * nn, 0);
        auto W = [&](size_t a, size_t b) -> int64_t& { return w[a * nn + b]; };
        for (size_t a = 0; a < gk; ++a) {
            double da_b = graph_.distance(group[a], bnd);
            for (size_t b = a + 1; b < gk; ++b) {
                double direct = graph_.distance(group[a], group[b]);
                double via = da_b + graph_.distance(group[b], bnd);
                int64_t cap = scale_weight(std::min(direct, via));
                W(a, b) = W(b, a) = cap;
            }
            int64_t wb = scale_weight(da_b);
            for (size_t b = gk; b < nn; ++b) W(a, b) = W(b, a) = wb;
        }
        // boundary slots pair up for free
        const auto& mate = matcher_.solve(int(nn), w);
        last_weight_ += matcher_.total_weight();
        for (size_t a = 0; a < gk; ++a) {
            size_t b = size_t(mate[a]);
            if (b >= gk) {
                prediction ^= graph_.path_mask(group[a], bnd);
            } else if (a < b) {
                double direct = graph_.distance(group[a], group[b]);
                double via = graph_.distance(group[a], bnd) + graph_.distance(group[b], bnd);
                if (direct <= via)
                    prediction ^= graph_.path_mask(group[a], group[b]);
                else
                    prediction ^=
                        graph_.path_mask(group[a], bnd) ^ graph_.path_mask(group[b], bnd);
            }
        }
    }
    return prediction;
}

ErrorRateEstimate logical_error_rate(const DetectionData& data, DetectorGraph& graph) {
    Decoder dec(graph);
    ErrorRateEstimate est;
    est.shots = data.shots;
    std::vector<uint8_t> syndrome(graph.n_detectors());
    for (uint64_t s = 0; s < data.shots; ++s) {
        for (size_t i = 0; i < syndrome.size(); ++i) syndrome[i] = data.detector_bits.get(s, i);
        uint64_t predicted = dec.decode(syndrome);
        uint64_t actual = 0;
        for (size_t o = 0; o < data.observable_bits.cols; ++o)
            if (data.observable_bits.get(s, o)) actual |= uint64_t(1) << o;
        if (predicted != actual) ++est.failures;
    }
    est.estimate = est.shots ? double(est.failures) / double(est.shots) : 0.0;
    est.std_err =
        est.shots ? std::sqrt(est.estimate * (1.0 - est.estimate) / double(est.shots)) : 0.0;
    return est;
}

ErrorRateEstimate run_logical_error_rate(const StabCircuit& circuit, DetectorGraph& graph,
                                         uint64_t shots, uint64_t seed, int threads) {
    require(shots >= 1, "shots must be >= 1");
    if (!graph.prepared()) graph.prepare();
    int nw = std::max(1, threads);
    nw = int(std::min<uint64_t>(nw, shots));

    // Shots are partitioned into contiguous ranges; per-shot RNG streams make
    // the failure count independent of the partitioning.
    std::vector<uint64_t> failures(nw, 0);
    auto worker = [&](int wi) {
        uint64_t begin = shots * uint64_t(wi) / uint64_t(nw);
        uint64_t end = shots * uint64_t(wi + 1) / uint64_t(nw);
        if (begin == end) return;
        Decoder dec(graph);
        sample_range(circuit, begin, end, seed,
                     [&](uint64_t, const std::vector<uint8_t>& det,
                         const std::vector<uint8_t>& obs) {
                         uint64_t predicted = dec.decode(det);
                         uint64_t actual = 0;
                         for (size_t o = 0; o < obs.size(); ++o)
                             if (obs[o]) actual |= uint64_t(1) << o;
                         if (predicted != actual) ++failures[wi];
                     });
    };
    if (nw == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int wi = 0; wi < nw; ++wi) pool.emplace_back(worker, wi);
        for (auto& t : pool) t.join();
    }

    ErrorRateEstimate est;
    est.shots = shots;
    for (uint64_t f : failures) est.failures += f;
    est.estimate = double(est.failures) / double(shots);
    est.std_err = std::sqrt(est.estimate * (1.0 - est.estimate) / double(shots));
    return est;
}

}  // namespace qraft
