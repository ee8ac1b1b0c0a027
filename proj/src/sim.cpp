#include "qraft/sim.hpp"

#include <cstring>

namespace qraft {

namespace {

// Applies Pauli component c of a two-qubit depolarizing channel.
// c in 1..15; low two bits select the Pauli on `b`, high bits on `a`
// (0=I, 1=X, 2=Z, 3=Y).
inline void apply_pair_component(uint8_t c, uint32_t a, uint32_t b, uint8_t* fx, uint8_t* fz) {
    int pa = c >> 2, pb = c & 3;
    if (pa & 1) fx[a] ^= 1;
    if (pa & 2) fz[a] ^= 1;
    if (pb & 1) fx[b] ^= 1;
    if (pb & 2) fz[b] ^= 1;
}

inline void apply_single_component(uint8_t c, uint32_t q, uint8_t* fx, uint8_t* fz) {
    if (c & 1) fx[q] ^= 1;
    if (c & 2) fz[q] ^= 1;
}

struct ShotWorkspace {
    std::vector<uint8_t> fx, fz, record;

    explicit ShotWorkspace(const StabCircuit& c)
        : fx(c.n_qubits, 0), fz(c.n_qubits, 0) {
        record.reserve(c.num_measurements());
    }

    void run(const StabCircuit& c, Rng& rng) {
        std::memset(fx.data(), 0, fx.size());
        std::memset(fz.data(), 0, fz.size());
        record.clear();
        for (const auto& ins : c.instructions) {
            switch (ins.op) {
                case Op::Prep:
                    for (uint32_t q : ins.targets) fx[q] = fz[q] = 0;
                    break;
                case Op::Meas:
                    for (uint32_t q : ins.targets) {
                        uint8_t flip = rng.uniform() < ins.param ? 1 : 0;
                        record.push_back(uint8_t(fx[q] ^ flip));
                        fz[q] = 0;
                    }
                    break;
                case Op::Hadamard:
                    for (uint32_t q : ins.targets) std::swap(fx[q], fz[q]);
                    break;
                case Op::Cnot:
                    for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) {
                        uint32_t c0 = ins.targets[i], t0 = ins.targets[i + 1];
                        fx[t0] ^= fx[c0];
                        fz[c0] ^= fz[t0];
                    }
                    break;
                case Op::XError:
                    for (uint32_t q : ins.targets)
                        if (rng.uniform() < ins.param) fx[q] ^= 1;
                    break;
                case Op::Depolarize1:
                    for (uint32_t q : ins.targets) {
                        double u = rng.uniform();
                        if (u < ins.param) {
                            uint8_t comp = uint8_t(u / ins.param * 3.0) + 1;
                            if (comp > 3) comp = 3;
                            apply_single_component(comp, q, fx.data(), fz.data());
                        }
                    }
                    break;
                case Op::Depolarize2:
                    for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) {
                        double u = rng.uniform();
                        if (u < ins.param) {
                            uint8_t comp = uint8_t(u / ins.param * 15.0) + 1;
                            if (comp > 15) comp = 15;
                            apply_pair_component(comp, ins.targets[i], ins.targets[i + 1],
                                                 fx.data(), fz.data());
                        }
                    }
                    break;
            }
        }
    }
};

}  // namespace

void sample_range(const StabCircuit& circuit, uint64_t begin, uint64_t end, uint64_t seed,
                  const std::function<void(uint64_t, const std::vector<uint8_t>&,
                                           const std::vector<uint8_t>&)>& sink) {
    circuit.validate();
    ShotWorkspace ws(circuit);
    std::vector<uint8_t> det(circuit.detectors.size());
    std::vector<uint8_t> obs(circuit.observables.size());
    for (uint64_t s = begin; s < end; ++s) {
        Rng rng = Rng::for_shot(seed, s);
        ws.run(circuit, rng);
        for (size_t i = 0; i < circuit.detectors.size(); ++i) {
            uint8_t b = 0;
            for (uint32_t m : circuit.detectors[i]) b ^= ws.record[m];
            det[i] = b;
        }
        for (size_t i = 0; i < circuit.observables.size(); ++i) {
            uint8_t b = 0;
            for (uint32_t m : circuit.observables[i]) b ^= ws.record[m];
            obs[i] = b;
        }
        sink(s, det, obs);
    }
}

void sample_stream(const StabCircuit& circuit, uint64_t shots, uint64_t seed,
                   const std::function<void(uint64_t, const std::vector<uint8_t>&,
                                            const std::vector<uint8_t>&)>& sink) {
    sample_range(circuit, 0, shots, seed, sink);
}

DetectionData sample(const StabCircuit& circuit, uint64_t shots, uint64_t seed) {
    require(shots >= 1, "sample: shots must be >= 1");
    DetectionData data;
    data.shots = shots;
    data.seed = seed;
    data.detector_bits = BitMatrix(shots, circuit.detectors.size());
    data.observable_bits = BitMatrix(shots, circuit.observables.size());
    sample_stream(circuit, shots, seed,
                  [&](uint64_t s, const std::vector<uint8_t>& det, const std::vector<uint8_t>& obs) {
                      for (size_t i = 0; i < det.size(); ++i)
                          if (det[i]) data.detector_bits.flip(s, i);
                      for (size_t i = 0; i < obs.size(); ++i)
                          if (obs[i]) data.observable_bits.flip(s, i);
                  });
    return data;
}

FaultCatalog enumerate_faults(const StabCircuit& circuit) {
    circuit.validate();
    FaultCatalog cat;
    cat.n_detectors = circuit.detectors.size();
    cat.n_observables = circuit.observables.size();

    // measurement index -> detectors / observables that contain it
    size_t n_meas = circuit.num_measurements();
    std::vector<std::vector<uint32_t>> det_of_meas(n_meas), obs_of_meas(n_meas);
    for (size_t d = 0; d < circuit.detectors.size(); ++d)
        for (uint32_t m : circuit.detectors[d]) det_of_meas[m].push_back(uint32_t(d));
    for (size_t o = 0; o < circuit.observables.size(); ++o)
        for (uint32_t m : circuit.observables[o]) obs_of_meas[m].push_back(uint32_t(o));

    std::vector<uint8_t> fx(circuit.n_qubits), fz(circuit.n_qubits);
    std::vector<uint8_t> det_acc(circuit.detectors.size());
    std::vector<uint8_t> obs_acc(circuit.observables.size());

    // Measurement index reached when execution stands at instruction k.
    std::vector<uint32_t> meas_before(circuit.instructions.size() + 1, 0);
    for (size_t k = 0; k < circuit.instructions.size(); ++k) {
        uint32_t add = circuit.instructions[k].op == Op::Meas
                           ? uint32_t(circuit.instructions[k].targets.size())
                           : 0;
        meas_before[k + 1] = meas_before[k] + add;
    }

    // Propagates a single injected fault from just after instruction `start`
    // (or just after target t within it, for measurement flips).
    auto propagate = [&](size_t start_instr, uint32_t meas_idx) {
        std::memset(det_acc.data(), 0, det_acc.size());
        std::memset(obs_acc.data(), 0, obs_acc.size());
        auto record_dev = [&](uint32_t m) {
            for (uint32_t d : det_of_meas[m]) det_acc[d] ^= 1;
            for (uint32_t o : obs_of_meas[m]) obs_acc[o] ^= 1;
        };
        if (meas_idx != UINT32_MAX) record_dev(meas_idx);
        uint32_t m_next = meas_before[start_instr + 1];
        for (size_t k = start_instr + 1; k < circuit.instructions.size(); ++k) {
            const auto& ins = circuit.instructions[k];
            switch (ins.op) {
                case Op::Prep:
                    for (uint32_t q : ins.targets) fx[q] = fz[q] = 0;
                    break;
                case Op::Meas:
                    for (uint32_t q : ins.targets) {
                        if (fx[q]) record_dev(m_next);
                        fz[q] = 0;
                        ++m_next;
                    }
                    break;
                case Op::Hadamard:
                    for (uint32_t q : ins.targets) std::swap(fx[q], fz[q]);
                    break;
                case Op::Cnot:
                    for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) {
                        fx[ins.targets[i + 1]] ^= fx[ins.targets[i]];
                        fz[ins.targets[i]] ^= fz[ins.targets[i + 1]];
                    }
                    break;
                default:
                    break;
            }
        }
    };

    auto emit = [&](uint32_t channel, uint8_t comp, double prob) {
        Fault f;
        f.channel_index = channel;
        f.component = comp;
        f.probability = prob;
        for (size_t d = 0; d < det_acc.size(); ++d)
            if (det_acc[d]) f.detectors.push_back(uint32_t(d));
        for (size_t o = 0; o < obs_acc.size(); ++o)
            if (obs_acc[o]) f.observables.push_back(uint32_t(o));
        cat.faults.push_back(std::move(f));
    };

    uint32_t channel = 0;
    for (size_t k = 0; k < circuit.instructions.size(); ++k) {
        const auto& ins = circuit.instructions[k];
        if (ins.op == Op::Meas) {
            for (size_t t = 0; t < ins.targets.size(); ++t) {
                if (ins.param > 0) {
                    // Record flip: deviates this outcome only, no frame change.
                    std::memset(fx.data(), 0, fx.size());
                    std::memset(fz.data(), 0, fz.size());
                    propagate(k, meas_before[k] + uint32_t(t));
                    // The flip must not also count the frame at measurement
                    // time; the frame is zero here, so only the record flips.
                    emit(channel, 1, ins.param);
                }
                if (ins.param > 0) ++channel;
            }
            continue;
        }
        if (!op_is_noise(ins.op) || ins.param <= 0) continue;
        if (ins.op == Op::XError || ins.op == Op::Depolarize1) {
            int ncomp = ins.op == Op::XError ? 1 : 3;
            for (uint32_t q : ins.targets) {
                for (int c = 1; c <= ncomp; ++c) {
                    std::memset(fx.data(), 0, fx.size());
                    std::memset(fz.data(), 0, fz.size());
                    apply_single_component(uint8_t(c), q, fx.data(), fz.data());
                    propagate(k, UINT32_MAX);
                    emit(channel, uint8_t(c), ins.param / ncomp);
                }
                ++channel;
            }
        } else {  // Depolarize2
            for (size_t i = 0; i + 1 < ins.targets.size(); i += 2) {
                for (int c = 1; c <= 15; ++c) {
                    std::memset(fx.data(), 0, fx.size());
                    std::memset(fz.data(), 0, fz.size());
                    apply_pair_component(uint8_t(c), ins.targets[i], ins.targets[i + 1], fx.data(),
                                         fz.data());
                    propagate(k, UINT32_MAX);
                    emit(channel, uint8_t(c), ins.param / 15.0);
                }
                ++channel;
            }
        }
    }
    for (const auto& f : cat.faults)
        require(f.probability > 0 && f.probability < 1, "fault probability out of (0,1)");
    return cat;
}

std::vector<std::pair<double, int>> channel_rates(const StabCircuit& circuit) {
    std::vector<std::pair<double, int>> rates;
    for (const auto& ins : circuit.instructions) {
        if (ins.op == Op::Meas && ins.param > 0) {
            for (size_t t = 0; t < ins.targets.size(); ++t) rates.emplace_back(ins.param, 1);
        } else if (ins.op == Op::XError && ins.param > 0) {
            for (size_t t = 0; t < ins.targets.size(); ++t) rates.emplace_back(ins.param, 1);
        } else if (ins.op == Op::Depolarize1 && ins.param > 0) {
            for (size_t t = 0; t < ins.targets.size(); ++t) rates.emplace_back(ins.param, 3);
        } else if (ins.op == Op::Depolarize2 && ins.param > 0) {
            for (size_t t = 0; t + 1 < ins.targets.size(); t += 2)
                rates.emplace_back(ins.param, 15);
        }
    }
    return rates;
}

void refresh_probabilities(FaultCatalog& catalog, const StabCircuit& circuit) {
    auto rates = channel_rates(circuit);
    for (auto& f : catalog.faults) {
        require(f.channel_index < rates.size(),
                "refresh_probabilities: circuit structure does not match catalog");
        f.probability = rates[f.channel_index].first / rates[f.channel_index].second;
    }
}

}  // namespace qraft
