#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qraft/util.hpp"

namespace qraft {

/// n-qubit Pauli operator in symplectic (x|z) form. The represented operator
/// is i^phase_exponent * prod_k X_k^x[k] Z_k^z[k], with the X part applied
/// after the Z part on each qubit (so x=z=1 encodes Y up to the tracked phase).
struct PauliWord {
    std::vector<uint8_t> x, z;
    uint8_t phase_exponent = 0;  // power of i, mod 4

    PauliWord() = default;
    explicit PauliWord(size_t n) : x(n, 0), z(n, 0) {}

    /// Parses a string over {I,X,Y,Z}. Y gets phase i so the operator is the
    /// Hermitian Pauli Y = i*X*Z.
    static PauliWord from_string(const std::string& word);

    size_t size() const { return x.size(); }
    bool is_identity() const;
    size_t weight() const;

    bool commutes_with(const PauliWord& other) const;

    /// In-place multiplication: *this <- *this * other, with phase tracking.
    void mul(const PauliWord& other);

    std::string to_string() const;  // drops the phase

    bool operator==(const PauliWord& o) const { return x == o.x && z == o.z; }
};

/// One term of a Hamiltonian in Pauli-product form.
struct PauliTerm {
    double coeff = 0;  // hartree
    PauliWord word;
};

/// 1 iff [P, Q] != 0.
inline int commutator_indicator(const PauliWord& p, const PauliWord& q) {
    return p.commutes_with(q) ? 0 : 1;
}

/// 1 iff [P3, [P2, P1]] != 0.
int nested_commutator_indicator(const PauliWord& p1, const PauliWord& p2, const PauliWord& p3);

}  // namespace qraft
