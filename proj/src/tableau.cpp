#include "qraft/tableau.hpp"

namespace qraft {

GaugeTableau::GaugeTableau(uint32_t n_qubits) : n_(n_qubits), words_((n_qubits + 63) / 64) {
    rows_.resize(2 * size_t(n_));
    for (size_t i = 0; i < rows_.size(); ++i) {
        rows_[i].x.assign(words_, 0);
        rows_[i].z.assign(words_, 0);
    }
    for (uint32_t q = 0; q < n_; ++q) {
        rows_[q].x[q / 64] |= uint64_t(1) << (q % 64);           // destabilizer X_q
        rows_[n_ + q].z[q / 64] |= uint64_t(1) << (q % 64);      // stabilizer Z_q
    }
}

void GaugeTableau::apply_h(uint32_t q) {
    size_t w = q / 64;
    uint64_t m = uint64_t(1) << (q % 64);
    for (auto& r : rows_) {
        uint64_t xb = r.x[w] & m, zb = r.z[w] & m;
        if (xb && zb) r.sign.constant ^= 1;
        r.x[w] = (r.x[w] & ~m) | zb;
        r.z[w] = (r.z[w] & ~m) | xb;
    }
}

void GaugeTableau::apply_cx(uint32_t c, uint32_t t) {
    size_t wc = c / 64, wt = t / 64;
    uint64_t mc = uint64_t(1) << (c % 64), mt = uint64_t(1) << (t % 64);
    for (auto& r : rows_) {
        bool xc = r.x[wc] & mc, zc = r.z[wc] & mc;
        bool xt = r.x[wt] & mt, zt = r.z[wt] & mt;
        if (xc && zt && (xt == zc)) r.sign.constant ^= 1;
        if (xc) r.x[wt] ^= mt;
        if (zt) r.z[wc] ^= mc;
    }
}

void GaugeTableau::rowmult(Row& h, const Row& i) const {
    // Phase exponent of i^k when multiplying Pauli products, accumulated per
    // qubit with the usual CHP g-function.
    int phase = 0;
    for (size_t w = 0; w < words_; ++w) {
        uint64_t x1 = i.x[w], z1 = i.z[w], x2 = h.x[w], z2 = h.z[w];
        uint64_t active = (x1 | z1) & (x2 | z2);
        while (active) {
            int b = __builtin_ctzll(active);
            active &= active - 1;
            uint64_t m = uint64_t(1) << b;
            int a1 = ((x1 & m) ? 1 : 0) | ((z1 & m) ? 2 : 0);  // 1=X, 2=Z, 3=Y
            int a2 = ((x2 & m) ? 1 : 0) | ((z2 & m) ? 2 : 0);
            if (a1 == a2) continue;
            // g(P1, P2): exponent of i in P1*P2 for single-qubit Paulis.
            static const int g[4][4] = {
                {0, 0, 0, 0}, {0, 0, 1, -1}, {0, -1, 0, 1}, {0, 1, -1, 0}};
            phase += g[a1][a2];
        }
    }
    phase += 2 * h.sign.constant + 2 * i.sign.constant;
    phase &= 3;
    // Products of commuting Hermitian Paulis stay Hermitian.
    h.sign.constant = uint8_t(phase >> 1);
    for (size_t w = 0; w < words_; ++w) {
        h.x[w] ^= i.x[w];
        h.z[w] ^= i.z[w];
    }
    // Gauge parts add linearly (powers of -1).
    uint8_t keep = h.sign.constant;
    GaugeExpr tmp;
    tmp.vars = i.sign.vars;
    h.sign.xor_with(tmp);
    h.sign.constant = keep;
}

GaugeExpr GaugeTableau::measure(uint32_t q) {
    size_t p = SIZE_MAX;
    for (size_t i = n_; i < 2 * size_t(n_); ++i)
        if (get_x(rows_[i], q)) {
            p = i;
            break;
        }
    if (p != SIZE_MAX) {
        // Random outcome: new gauge variable.
        for (size_t i = 0; i < 2 * size_t(n_); ++i)
            if (i != p && get_x(rows_[i], q)) rowmult(rows_[i], rows_[p]);
        rows_[p - n_] = rows_[p];
        Row& r = rows_[p];
        r.x.assign(words_, 0);
        r.z.assign(words_, 0);
        r.z[q / 64] |= uint64_t(1) << (q % 64);
        r.sign = GaugeExpr{};
        size_t var = n_gauge_++;
        r.sign.toggle(var);
        GaugeExpr out;
        out.toggle(var);
        return out;
    }
    // Deterministic outcome: combine stabilizers indicated by destabilizers.
    Row scratch;
    scratch.x.assign(words_, 0);
    scratch.z.assign(words_, 0);
    for (size_t i = 0; i < n_; ++i)
        if (get_x(rows_[i], q)) rowmult(scratch, rows_[i + n_]);
    return scratch.sign;
}

void GaugeTableau::reset(uint32_t q) {
    GaugeExpr outcome = measure(q);
    // Conditional X on the measured value returns the qubit to |0>.
    for (auto& r : rows_)
        if (get_z(r, q)) r.sign.xor_with(outcome);
}

void GaugeTableau::run(const StabCircuit& circuit) {
    for (const auto& ins : circuit.instructions) {
        switch (ins.op) {
            case Op::Prep:
                for (uint32_t q : ins.targets) reset(q);
                break;
            case Op::Meas:
                for (uint32_t q : ins.targets) outcomes_.push_back(measure(q));
                break;
            case Op::Hadamard:
                for (uint32_t q : ins.targets) apply_h(q);
                break;
            case Op::Cnot:
                for (size_t i = 0; i + 1 < ins.targets.size(); i += 2)
                    apply_cx(ins.targets[i], ins.targets[i + 1]);
                break;
            default:
                break;  // noise ops are ignored in symbolic execution
        }
    }
}

GaugeExpr GaugeTableau::parity_of(const std::vector<uint32_t>& measurement_indices) const {
    GaugeExpr e;
    for (uint32_t m : measurement_indices) {
        require(m < outcomes_.size(), "measurement index out of range");
        e.xor_with(outcomes_[m]);
    }
    return e;
}

DeterminismReport verify_deterministic(const StabCircuit& circuit) {
    GaugeTableau t(circuit.n_qubits);
    t.run(circuit);
    DeterminismReport rep;
    for (size_t i = 0; i < circuit.detectors.size(); ++i) {
        GaugeExpr e = t.parity_of(circuit.detectors[i]);
        if (!e.is_deterministic()) {
            rep.all_deterministic = false;
            rep.nondeterministic_detectors.push_back(i);
        } else if (e.constant) {
            rep.all_zero = false;
            rep.nonzero_detectors.push_back(i);
        }
    }
    for (size_t i = 0; i < circuit.observables.size(); ++i) {
        GaugeExpr e = t.parity_of(circuit.observables[i]);
        if (!e.is_deterministic()) {
            rep.all_deterministic = false;
            rep.nondeterministic_observables.push_back(i);
        } else if (e.constant) {
            rep.all_zero = false;
            rep.nonzero_observables.push_back(i);
        }
    }
    return rep;
}

std::optional<std::vector<size_t>> solve_gauge_subset(const std::vector<GaugeExpr>& pool,
                                                      const GaugeExpr& target) {
    // Gaussian elimination over GF(2). Columns are pool entries plus the
    // target; rows are gauge variables plus the constant bit.
    size_t max_words = target.vars.size();
    for (const auto& e : pool) max_words = std::max(max_words, e.vars.size());
    size_t n_vars = max_words * 64 + 1;  // +1 for the constant row

    auto bit_at = [&](const GaugeExpr& e, size_t row) -> int {
        if (row == n_vars - 1) return e.constant;
        size_t w = row / 64;
        if (w >= e.vars.size()) return 0;
        return int((e.vars[w] >> (row % 64)) & 1);
    };

    size_t ncols = pool.size();
    // selection[c] tracks which pool entries are folded into column c.
    std::vector<std::vector<uint64_t>> col_bits(ncols);
    std::vector<std::vector<uint64_t>> col_sel(ncols);
    size_t sel_words = (ncols + 63) / 64;
    size_t row_words = (n_vars + 63) / 64;
    for (size_t c = 0; c < ncols; ++c) {
        col_bits[c].assign(row_words, 0);
        for (size_t r = 0; r < n_vars; ++r)
            if (bit_at(pool[c], r)) col_bits[c][r / 64] |= uint64_t(1) << (r % 64);
        col_sel[c].assign(sel_words, 0);
        col_sel[c][c / 64] |= uint64_t(1) << (c % 64);
    }
    std::vector<uint64_t> rhs(row_words, 0);
    for (size_t r = 0; r < n_vars; ++r)
        if (bit_at(target, r)) rhs[r / 64] |= uint64_t(1) << (r % 64);
    std::vector<uint64_t> rhs_sel(sel_words, 0);

    size_t used = 0;
    for (size_t r = 0; r < n_vars && used < ncols; ++r) {
        size_t w = r / 64;
        uint64_t m = uint64_t(1) << (r % 64);
        size_t pivot = SIZE_MAX;
        for (size_t c = used; c < ncols; ++c)
            if (col_bits[c][w] & m) {
                pivot = c;
                break;
            }
        if (pivot == SIZE_MAX) continue;
        std::swap(col_bits[pivot], col_bits[used]);
        std::swap(col_sel[pivot], col_sel[used]);
        for (size_t c = 0; c < ncols; ++c) {
            if (c != used && (col_bits[c][w] & m)) {
                for (size_t k = 0; k < row_words; ++k) col_bits[c][k] ^= col_bits[used][k];
                for (size_t k = 0; k < sel_words; ++k) col_sel[c][k] ^= col_sel[used][k];
            }
        }
        if (rhs[w] & m) {
            for (size_t k = 0; k < row_words; ++k) rhs[k] ^= col_bits[used][k];
            for (size_t k = 0; k < sel_words; ++k) rhs_sel[k] ^= col_sel[used][k];
        }
        ++used;
    }
    for (uint64_t w : rhs)
        if (w) return std::nullopt;  // target not in span
    std::vector<size_t> subset;
    for (size_t c = 0; c < ncols; ++c)
        if ((rhs_sel[c / 64] >> (c % 64)) & 1) subset.push_back(c);
    return subset;
}

}  // namespace qraft
