#include "qraft/circuit.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace qraft {

bool op_is_noise(Op op) {
    return op == Op::XError || op == Op::Depolarize1 || op == Op::Depolarize2;
}

bool op_takes_pairs(Op op) { return op == Op::Cnot || op == Op::Depolarize2; }

const char* op_name(Op op) {
    switch (op) {
        case Op::Prep: return "PREP";
        case Op::Meas: return "MEAS";
        case Op::Hadamard: return "H";
        case Op::Cnot: return "CX";
        case Op::XError: return "X_ERROR";
        case Op::Depolarize1: return "DEPOLARIZE1";
        case Op::Depolarize2: return "DEPOLARIZE2";
    }
    return "?";
}

size_t StabCircuit::num_measurements() const {
    size_t n = 0;
    for (const auto& ins : instructions)
        if (ins.op == Op::Meas) n += ins.targets.size();
    return n;
}

size_t StabCircuit::num_noise_channels() const {
    size_t n = 0;
    for (const auto& ins : instructions) {
        if (op_is_noise(ins.op) && ins.param > 0)
            n += ins.op == Op::Depolarize2 ? ins.targets.size() / 2 : ins.targets.size();
        if (ins.op == Op::Meas && ins.param > 0) n += ins.targets.size();
    }
    return n;
}

void StabCircuit::append(Op op, std::vector<uint32_t> targets, double param) {
    Instruction ins{op, param, std::move(targets)};
    instructions.push_back(std::move(ins));
}

StabCircuit StabCircuit::noiseless() const {
    StabCircuit c;
    c.n_qubits = n_qubits;
    c.detectors = detectors;
    c.observables = observables;
    c.coords = coords;
    for (const auto& ins : instructions) {
        if (op_is_noise(ins.op)) continue;
        Instruction copy = ins;
        if (copy.op == Op::Meas) copy.param = 0;
        c.instructions.push_back(std::move(copy));
    }
    return c;
}

void StabCircuit::validate() const {
    size_t meas = 0;
    for (const auto& ins : instructions) {
        if (op_takes_pairs(ins.op))
            require(ins.targets.size() % 2 == 0,
                    std::string(op_name(ins.op)) + " takes an even number of targets");
        require(!ins.targets.empty(), std::string(op_name(ins.op)) + " with no targets");
        std::unordered_set<uint32_t> seen;
        for (uint32_t q : ins.targets) {
            require(q < n_qubits, "qubit index out of range");
            require(seen.insert(q).second,
                    std::string(op_name(ins.op)) + " touches a qubit twice");
        }
        if (op_is_noise(ins.op) || ins.op == Op::Meas)
            require(is_probability(ins.param) && ins.param < 1.0,
                    "noise rate must be in [0,1)");
        if (ins.op == Op::Meas) meas += ins.targets.size();
    }
    for (const auto& d : detectors)
        for (uint32_t m : d) require(m < meas, "detector references unknown measurement");
    for (const auto& o : observables)
        for (uint32_t m : o) require(m < meas, "observable references unknown measurement");
}

std::string StabCircuit::to_text() const {
    std::ostringstream os;
    os << "# qraft circuit v1\n";
    os << "QUBITS " << n_qubits << "\n";
    for (size_t q = 0; q < coords.size(); ++q)
        os << "COORD " << q << " " << format12(coords[q].first) << " "
           << format12(coords[q].second) << "\n";
    for (const auto& ins : instructions) {
        os << op_name(ins.op);
        if (op_is_noise(ins.op) || (ins.op == Op::Meas && ins.param != 0))
            os << "(" << format12(ins.param) << ")";
        for (uint32_t t : ins.targets) os << " " << t;
        os << "\n";
    }
    for (const auto& d : detectors) {
        os << "DETECTOR";
        for (uint32_t m : d) os << " " << m;
        os << "\n";
    }
    for (size_t k = 0; k < observables.size(); ++k) {
        os << "OBSERVABLE " << k;
        for (uint32_t m : observables[k]) os << " " << m;
        os << "\n";
    }
    return os.str();
}

StabCircuit StabCircuit::from_text(const std::string& text) {
    StabCircuit c;
    std::istringstream is(text);
    std::string line;
    size_t lineno = 0;
    bool qubits_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;

        auto fail = [&](const std::string& msg) {
            throw parse_error("line " + std::to_string(lineno) + ": " + msg);
        };
        auto read_indices = [&](std::vector<uint32_t>& out) {
            long long v;
            while (ls >> v) {
                if (v < 0) fail("negative index");
                out.push_back(uint32_t(v));
            }
            if (!ls.eof()) fail("malformed index list");
        };

        if (head == "QUBITS") {
            long long n;
            if (!(ls >> n) || n <= 0) fail("bad qubit count");
            c.n_qubits = uint32_t(n);
            c.coords.assign(c.n_qubits, {0.0, 0.0});
            qubits_seen = true;
            continue;
        }
        if (!qubits_seen) fail("QUBITS must come first");
        if (head == "COORD") {
            long long q;
            double x, y;
            if (!(ls >> q >> x >> y) || q < 0 || q >= c.n_qubits) fail("bad COORD");
            c.coords[size_t(q)] = {x, y};
            continue;
        }
        if (head == "DETECTOR") {
            std::vector<uint32_t> d;
            read_indices(d);
            c.detectors.push_back(std::move(d));
            continue;
        }
        if (head == "OBSERVABLE") {
            long long k;
            if (!(ls >> k) || k < 0) fail("bad OBSERVABLE index");
            std::vector<uint32_t> o;
            read_indices(o);
            if (size_t(k) >= c.observables.size()) c.observables.resize(size_t(k) + 1);
            c.observables[size_t(k)] = std::move(o);
            continue;
        }

        // Gate or noise op, optionally with a "(rate)" suffix.
        double param = 0;
        std::string name = head;
        auto open = head.find('(');
        if (open != std::string::npos) {
            if (head.back() != ')') fail("unbalanced parentheses");
            name = head.substr(0, open);
            try {
                param = std::stod(head.substr(open + 1, head.size() - open - 2));
            } catch (const std::exception&) {
                fail("bad rate");
            }
        }
        Op op;
        if (name == "PREP") op = Op::Prep;
        else if (name == "MEAS") op = Op::Meas;
        else if (name == "H") op = Op::Hadamard;
        else if (name == "CX") op = Op::Cnot;
        else if (name == "X_ERROR") op = Op::XError;
        else if (name == "DEPOLARIZE1") op = Op::Depolarize1;
        else if (name == "DEPOLARIZE2") op = Op::Depolarize2;
        else fail("unknown opcode '" + name + "'");
        Instruction ins{op, param, {}};
        read_indices(ins.targets);
        c.instructions.push_back(std::move(ins));
    }
    require(qubits_seen, "circuit text has no QUBITS line");
    c.validate();
    return c;
}

std::ostream& operator<<(std::ostream& os, const StabCircuit& c) { return os << c.to_text(); }

void DetectionData::save_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    require(bool(out), "cannot open '" + path + "' for writing");
    const char magic[8] = {'Q', 'R', 'D', 'D', '1', 0, 0, 0};
    out.write(magic, 8);
    uint64_t dims[4] = {shots, seed, detector_bits.cols, observable_bits.cols};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    out.write(reinterpret_cast<const char*>(detector_bits.bits.data()),
              std::streamsize(detector_bits.bits.size() * 8));
    out.write(reinterpret_cast<const char*>(observable_bits.bits.data()),
              std::streamsize(observable_bits.bits.size() * 8));
}

DetectionData DetectionData::load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "QRDD1\0\0\0", 8) != 0)
        throw parse_error("'" + path + "' is not a detection data file");
    uint64_t dims[4];
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    if (!in) throw parse_error("truncated detection data header");
    DetectionData d;
    d.shots = dims[0];
    d.seed = dims[1];
    d.detector_bits = BitMatrix(dims[0], dims[2]);
    d.observable_bits = BitMatrix(dims[0], dims[3]);
    in.read(reinterpret_cast<char*>(d.detector_bits.bits.data()),
            std::streamsize(d.detector_bits.bits.size() * 8));
    in.read(reinterpret_cast<char*>(d.observable_bits.bits.data()),
            std::streamsize(d.observable_bits.bits.size() * 8));
    if (!in) throw parse_error("truncated detection data payload");
    return d;
}

void DetectionData::save_csv(const std::string& path) const {
    std::ofstream out(path);
    require(bool(out), "cannot open '" + path + "' for writing");
    out << "shot";
    for (size_t c = 0; c < detector_bits.cols; ++c) out << ",d" << c;
    for (size_t c = 0; c < observable_bits.cols; ++c) out << ",obs" << c;
    out << "\n";
    for (size_t r = 0; r < shots; ++r) {
        out << r;
        for (size_t c = 0; c < detector_bits.cols; ++c) out << "," << detector_bits.get(r, c);
        for (size_t c = 0; c < observable_bits.cols; ++c) out << "," << observable_bits.get(r, c);
        out << "\n";
    }
}

}  // namespace qraft
