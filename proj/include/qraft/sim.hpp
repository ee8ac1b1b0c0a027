#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qraft/circuit.hpp"

namespace qraft {

/// One elementary fault: a Pauli component of one noise channel, its
/// probability, and the detectors/observables it flips when injected alone
/// into an otherwise noiseless execution.
struct Fault {
    uint32_t channel_index = 0;  // index into the circuit's noise channels
    uint8_t component = 0;       // 1..3 for 1q (X,Z,Y), 1..15 for 2q
    double probability = 0;
    std::vector<uint32_t> detectors;
    std::vector<uint32_t> observables;
};

struct FaultCatalog {
    std::vector<Fault> faults;
    size_t n_detectors = 0;
    size_t n_observables = 0;
};

/// Samples the circuit with Pauli-frame Monte Carlo. Identical
/// (circuit, shots, seed) produce identical output, independent of how shots
/// are batched by callers.
DetectionData sample(const StabCircuit& circuit, uint64_t shots, uint64_t seed);

/// Streaming variant: invokes sink(shot_index, detector_bits, observable_bits)
/// for each shot without materializing the full matrices. Buffers are reused
/// between calls.
void sample_stream(const StabCircuit& circuit, uint64_t shots, uint64_t seed,
                   const std::function<void(uint64_t, const std::vector<uint8_t>&,
                                            const std::vector<uint8_t>&)>& sink);

/// Streams the shot index range [begin, end). Shot s produces identical bits
/// regardless of the range it is sampled through.
void sample_range(const StabCircuit& circuit, uint64_t begin, uint64_t end, uint64_t seed,
                  const std::function<void(uint64_t, const std::vector<uint8_t>&,
                                           const std::vector<uint8_t>&)>& sink);

/// Enumerates every nontrivial Pauli component of every noise channel and
/// computes its detector/observable signature by noiseless propagation.
FaultCatalog enumerate_faults(const StabCircuit& circuit);

/// Base rate and component count of each noise channel instance, in the same
/// order as the channel_index values assigned by enumerate_faults.
std::vector<std::pair<double, int>> channel_rates(const StabCircuit& circuit);

/// Rewrites fault probabilities from a circuit with identical structure but
/// different noise rates. Signatures are structural and stay valid.
void refresh_probabilities(FaultCatalog& catalog, const StabCircuit& circuit);

}  // namespace qraft
