#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qraft/circuit.hpp"

namespace qraft {

/// GF(2) affine expression over "gauge" variables, the random outcomes of a
/// noiseless stabilizer circuit. constant + XOR of the flagged variables.
struct GaugeExpr {
    uint8_t constant = 0;
    std::vector<uint64_t> vars;  // bitset over gauge variable indices

    void resize_vars(size_t nvars) { vars.resize((nvars + 63) / 64, 0); }
    void toggle(size_t v) {
        if (v / 64 >= vars.size()) vars.resize(v / 64 + 1, 0);
        vars[v / 64] ^= uint64_t(1) << (v % 64);
    }
    void xor_with(const GaugeExpr& o) {
        constant ^= o.constant;
        if (o.vars.size() > vars.size()) vars.resize(o.vars.size(), 0);
        for (size_t i = 0; i < o.vars.size(); ++i) vars[i] ^= o.vars[i];
    }
    bool is_deterministic() const {
        for (uint64_t w : vars)
            if (w) return false;
        return true;
    }
    bool operator==(const GaugeExpr& o) const {
        size_t n = std::max(vars.size(), o.vars.size());
        for (size_t i = 0; i < n; ++i) {
            uint64_t a = i < vars.size() ? vars[i] : 0;
            uint64_t b = i < o.vars.size() ? o.vars[i] : 0;
            if (a != b) return false;
        }
        return constant == o.constant;
    }
};

/// Stabilizer tableau simulator that executes the noiseless part of a
/// circuit symbolically: every random measurement outcome becomes a fresh
/// gauge variable, and every recorded outcome is an affine GF(2) expression
/// in those variables. Supports determinism checks of detectors/observables
/// and solving for measurement subsets that cancel the gauge dependence of a
/// logical readout.
class GaugeTableau {
  public:
    explicit GaugeTableau(uint32_t n_qubits);

    void apply_h(uint32_t q);
    void apply_cx(uint32_t c, uint32_t t);
    GaugeExpr measure(uint32_t q);  // records nothing; returns outcome expr
    void reset(uint32_t q);

    /// Runs all non-noise instructions, recording measurement outcome
    /// expressions in order.
    void run(const StabCircuit& circuit);

    const std::vector<GaugeExpr>& outcomes() const { return outcomes_; }
    size_t num_gauge_vars() const { return n_gauge_; }

    GaugeExpr parity_of(const std::vector<uint32_t>& measurement_indices) const;

  private:
    struct Row {
        std::vector<uint64_t> x, z;
        GaugeExpr sign;
    };

    uint32_t n_;
    size_t words_;
    std::vector<Row> rows_;  // 2n rows: destabilizers then stabilizers
    size_t n_gauge_ = 0;
    std::vector<GaugeExpr> outcomes_;

    bool get_x(const Row& r, uint32_t q) const { return (r.x[q / 64] >> (q % 64)) & 1; }
    bool get_z(const Row& r, uint32_t q) const { return (r.z[q / 64] >> (q % 64)) & 1; }
    void rowmult(Row& h, const Row& i) const;  // h <- h * i
};

/// Result of checking every detector and observable of a circuit against a
/// noiseless symbolic execution.
struct DeterminismReport {
    bool all_deterministic = true;
    bool all_zero = true;
    std::vector<size_t> nondeterministic_detectors;
    std::vector<size_t> nonzero_detectors;
    std::vector<size_t> nondeterministic_observables;
    std::vector<size_t> nonzero_observables;
};

DeterminismReport verify_deterministic(const StabCircuit& circuit);

/// Finds a subset of `pool` (indices into it) whose summed outcome
/// expressions equal `target`. Returns nullopt when no combination exists.
/// Deterministic: performs Gaussian elimination in pool order.
std::optional<std::vector<size_t>> solve_gauge_subset(const std::vector<GaugeExpr>& pool,
                                                      const GaugeExpr& target);

}  // namespace qraft
