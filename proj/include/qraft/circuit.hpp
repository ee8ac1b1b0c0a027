#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qraft/util.hpp"

namespace qraft {

enum class Op : uint8_t {
    Prep,        // reset targets to |0>
    Meas,        // measure targets in Z; param = record-flip probability
    Hadamard,
    Cnot,        // targets hold (control, target) pairs
    XError,      // param = X flip probability
    Depolarize1, // param = single-qubit depolarizing rate
    Depolarize2, // param = two-qubit depolarizing rate; targets hold pairs
};

bool op_is_noise(Op op);
bool op_takes_pairs(Op op);
const char* op_name(Op op);

/// Role of a noise instruction within the circuit that emitted it. Internal
/// metadata (not serialized); lets per-qubit noise rewriters recompute rates.
enum class NoiseTag : uint8_t { None, PrepFlip, ResetFlip, Gate1, Gate2, Idle, MeasFlip };

struct Instruction {
    Op op;
    double param = 0;  // noise rate or measurement flip probability
    std::vector<uint32_t> targets;
    NoiseTag tag = NoiseTag::None;
    float aux = 0;  // idle duration in seconds, for NoiseTag::Idle
};

/// A noisy stabilizer circuit with detector and logical-observable
/// annotations. Detectors and observables are parities of recorded
/// measurement outcomes, referenced by absolute measurement index; on a
/// noiseless execution every detector parity is 0 and every observable
/// matches its ideal value.
struct StabCircuit {
    uint32_t n_qubits = 0;
    std::vector<Instruction> instructions;
    std::vector<std::vector<uint32_t>> detectors;
    std::vector<std::vector<uint32_t>> observables;
    // Lattice coordinates per qubit; used by cut placement and diagnostics.
    std::vector<std::pair<double, double>> coords;

    size_t num_measurements() const;
    size_t num_noise_channels() const;

    void append(Op op, std::vector<uint32_t> targets, double param = 0);

    /// Copy with every noise rate set to zero (annotations removed).
    StabCircuit noiseless() const;

    /// Line-oriented text format, stable across versions; see docs/formats.md.
    std::string to_text() const;
    static StabCircuit from_text(const std::string& text);

    /// Validates target ranges, pair alignment, and measurement references.
    void validate() const;
};

std::ostream& operator<<(std::ostream& os, const StabCircuit& c);

/// Bit matrix with rows packed into 64-bit words.
struct BitMatrix {
    size_t rows = 0, cols = 0;
    size_t words_per_row = 0;
    std::vector<uint64_t> bits;

    BitMatrix() = default;
    BitMatrix(size_t r, size_t c)
        : rows(r), cols(c), words_per_row((c + 63) / 64), bits(r * words_per_row, 0) {}

    bool get(size_t r, size_t c) const {
        return (bits[r * words_per_row + c / 64] >> (c % 64)) & 1;
    }
    void set(size_t r, size_t c, bool v) {
        uint64_t& w = bits[r * words_per_row + c / 64];
        uint64_t m = uint64_t(1) << (c % 64);
        w = v ? (w | m) : (w & ~m);
    }
    void flip(size_t r, size_t c) { bits[r * words_per_row + c / 64] ^= uint64_t(1) << (c % 64); }
};

/// Monte Carlo sampling output: per-shot detector and observable bits.
struct DetectionData {
    uint64_t shots = 0;
    uint64_t seed = 0;
    BitMatrix detector_bits;    // shots x detectors
    BitMatrix observable_bits;  // shots x observables

    void save_binary(const std::string& path) const;
    static DetectionData load_binary(const std::string& path);
    void save_csv(const std::string& path) const;
};

}  // namespace qraft
