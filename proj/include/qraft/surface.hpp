#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qraft/circuit.hpp"
#include "qraft/hw.hpp"

namespace qraft {

/// Rotated surface code patch layout. Data qubits sit at odd lattice
/// coordinates, stabilizer ancillas at even ones. d^2 data qubits, d^2-1
/// ancillas, bulk stabilizers weight 4, boundary stabilizers weight 2.
/// Z logicals run vertically (fixed x), X logicals horizontally (fixed y).
struct SurfaceCodePatch {
    int distance = 0;
    std::vector<std::pair<int, int>> data_qubit_coords;
    std::vector<std::pair<int, int>> z_ancilla_coords;
    std::vector<std::pair<int, int>> x_ancilla_coords;
};

SurfaceCodePatch make_patch(int distance);

enum class SourceState { zero, plus };

/// Lattice-surgery teleportation experiment: a d x d source patch and d x d
/// target patch joined by a b x d bus through a rough (XX) merge.
struct TeleportSpec {
    int d = 3;
    int b = 1;
    int r_pm = 1;  // pre-merge stabilization rounds
    int r_m = 3;   // merge rounds (temporal code distance)
    int r_s = 0;   // post-split rounds
    SourceState source_state = SourceState::zero;
    int n_cuts = 0;
    double p_link = 0;  // weak-link CNOT infidelity across cuts

    void validate() const;
};

/// Per-qubit noise overrides for heterogeneous-noise studies. Rates are
/// raw hardware error rates (not channel strengths); conversion follows the
/// same formulas as derive_noise_channels.
struct QubitNoiseProfile {
    std::vector<double> t1;           // per qubit id
    std::vector<double> err_1q;       // per qubit id
    std::vector<double> err_readout;  // per qubit id; used for prep/meas/reset
    std::map<std::pair<uint32_t, uint32_t>, double> err_2q;  // by (min,max) id
};

/// Quantum memory experiment: logical |0> held for `rounds` parity-check
/// rounds, then read out transversally. One Z-logical observable.
StabCircuit build_memory_circuit(int d, int rounds, const NoiseChannelSet& noise);

/// Teleportation experiment per the 5-step protocol (prepare, merge, split,
/// project, recover-by-readout). One observable encoding teleportation
/// success including the frame corrections.
StabCircuit build_teleport_circuit(const TeleportSpec& spec, const NoiseChannelSet& noise);

/// Replaces the two-qubit depolarizing rate of every CNOT whose qubits lie
/// on opposite sides of any cut line x=c with the rate derived from
/// infidelity p_link.
StabCircuit apply_cuts(const StabCircuit& circuit, const std::vector<double>& cut_columns,
                       double p_link);

/// Cut line positions for n_cuts evenly spaced cuts along the bus of a
/// teleport layout.
std::vector<double> cut_positions(const TeleportSpec& spec);

/// Rewrites every noise rate in `circuit` (built by one of the builders
/// above) from per-qubit hardware rates. Structure is unchanged, so fault
/// catalogs built from the original circuit can be refreshed cheaply.
void rewrite_hetero_noise(StabCircuit& circuit, const QubitNoiseProfile& profile);

}  // namespace qraft
