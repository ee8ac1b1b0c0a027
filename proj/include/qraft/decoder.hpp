#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qraft/matching.hpp"
#include "qraft/sim.hpp"

namespace qraft {

struct GraphEdge {
    uint32_t u = 0, v = 0;  // v == boundary_node() marks a boundary edge
    double probability = 0;
    double weight = 0;  // ln((1-p)/p)
    uint64_t observable_mask = 0;
};

/// Weighted matching graph over detectors plus one boundary node. Parallel
/// faults with the same endpoints and observable action are merged with
/// p = p1(1-p2) + p2(1-p1).
class DetectorGraph {
  public:
    static DetectorGraph from_catalog(const FaultCatalog& catalog);

    size_t n_detectors() const { return n_detectors_; }
    size_t n_observables() const { return n_observables_; }
    uint32_t boundary_node() const { return uint32_t(n_detectors_); }
    const std::vector<GraphEdge>& edges() const { return edges_; }

    /// Shortest-path distances and path observable masks from every node
    /// (including the boundary) to every node. Called automatically by
    /// decode; exposed for inspection.
    void prepare();
    bool prepared() const { return !dist_.empty(); }
    double distance(uint32_t a, uint32_t b) const { return dist_[a][b]; }
    uint64_t path_mask(uint32_t a, uint32_t b) const { return mask_[a][b]; }

    std::string to_json() const;

  private:
    size_t n_detectors_ = 0;
    size_t n_observables_ = 0;
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<double>> dist_;     // (n+1) x (n+1)
    std::vector<std::vector<uint64_t>> mask_;

    friend class Decoder;
};

/// Exact minimum-weight perfect matching decoder. Flagged detectors are
/// matched pairwise or to the boundary; pair weights are shortest-path
/// distances capped at the two-boundary route. Deterministic.
class Decoder {
  public:
    explicit Decoder(DetectorGraph& graph);

    /// Returns the predicted observable flip mask for one syndrome.
    uint64_t decode(const std::vector<uint8_t>& syndrome);

    /// Matching weight of the last decode (in the integer-scaled domain used
    /// internally; exposed for exactness tests together with scale()).
    int64_t last_weight() const { return last_weight_; }
    static int64_t scale_weight(double w);

  private:
    DetectorGraph& graph_;
    DenseMatcher matcher_;
    std::vector<uint32_t> flagged_;
    std::vector<int> comp_of_;
    std::vector<uint32_t> comp_stack_;
    int64_t last_weight_ = 0;
};

struct ErrorRateEstimate {
    double estimate = 0;
    double std_err = 0;
    uint64_t failures = 0;
    uint64_t shots = 0;
};

/// Fraction of shots where the decoder's predicted observable flips differ
/// from the actual flips, with binomial standard error.
ErrorRateEstimate logical_error_rate(const DetectionData& data, DetectorGraph& graph);

/// Streams shots through sampling and decoding without materializing the
/// detection data. Deterministic for fixed (circuit, shots, seed) and any
/// thread count.
ErrorRateEstimate run_logical_error_rate(const StabCircuit& circuit, DetectorGraph& graph,
                                         uint64_t shots, uint64_t seed, int threads = 1);

}  // namespace qraft
