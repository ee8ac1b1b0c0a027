#include "qraft/pauli.hpp"

namespace qraft {

PauliWord PauliWord::from_string(const std::string& word) {
    PauliWord p(word.size());
    for (size_t i = 0; i < word.size(); ++i) {
        switch (word[i]) {
            case 'I':
            case 'i':
                break;
            case 'X':
            case 'x':
                p.x[i] = 1;
                break;
            case 'Z':
            case 'z':
                p.z[i] = 1;
                break;
            case 'Y':
            case 'y':
                p.x[i] = 1;
                p.z[i] = 1;
                p.phase_exponent = uint8_t((p.phase_exponent + 1) & 3);
                break;
            default:
                throw parse_error(std::string("invalid Pauli character '") + word[i] + "' in \"" +
                                  word + "\"");
        }
    }
    return p;
}

bool PauliWord::is_identity() const {
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] || z[i]) return false;
    return true;
}

size_t PauliWord::weight() const {
    size_t w = 0;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] || z[i]) ++w;
    return w;
}

bool PauliWord::commutes_with(const PauliWord& other) const {
    require(size() == other.size(), "Pauli words must have equal length");
    int sym = 0;
    for (size_t i = 0; i < x.size(); ++i) sym ^= (x[i] & other.z[i]) ^ (z[i] & other.x[i]);
    return sym == 0;
}

void PauliWord::mul(const PauliWord& other) {
    require(size() == other.size(), "Pauli words must have equal length");
    int phase = phase_exponent + other.phase_exponent;
    for (size_t i = 0; i < x.size(); ++i) {
        // (X^a Z^b)(X^c Z^d) = (-1)^{bc} X^{a+c} Z^{b+d}; track powers of i as 2*bc.
        phase += 2 * (z[i] & other.x[i]);
        x[i] ^= other.x[i];
        z[i] ^= other.z[i];
    }
    phase_exponent = uint8_t(phase & 3);
}

std::string PauliWord::to_string() const {
    std::string s(size(), 'I');
    for (size_t i = 0; i < size(); ++i) {
        if (x[i] && z[i])
            s[i] = 'Y';
        else if (x[i])
            s[i] = 'X';
        else if (z[i])
            s[i] = 'Z';
    }
    return s;
}

int nested_commutator_indicator(const PauliWord& p1, const PauliWord& p2, const PauliWord& p3) {
    if (p1.commutes_with(p2)) return 0;
    // [P2, P1] is proportional to P2*P1; the nested commutator vanishes iff P3
    // commutes with that product.
    PauliWord prod = p2;
    prod.mul(p1);
    return p3.commutes_with(prod) ? 0 : 1;
}

}  // namespace qraft
