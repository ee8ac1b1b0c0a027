#include "qraft/hw.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qraft {

std::string format12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double mean_of(const std::vector<double>& xs) {
    require(!xs.empty(), "mean_of: empty sample");
    double s = 0;
    for (double x : xs) s += x;
    return s / double(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
    double m = mean_of(xs);
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / double(xs.size()));
}

void HardwareParams::validate() const {
    auto prob = [](double v, const char* name) {
        if (!(v >= 0.0 && v < 1.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("hardware parameter ") + name +
                                        " must be a probability in [0,1)");
    };
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("hardware parameter ") + name +
                                        " must be positive");
    };
    pos(t1, "t1");
    pos(t2, "t2");
    prob(err_1q, "err_1q");
    prob(err_2q, "err_2q");
    prob(err_prep, "err_prep");
    prob(err_meas, "err_meas");
    prob(err_reset, "err_reset");
    pos(time_1q, "time_1q");
    pos(time_2q, "time_2q");
    pos(time_prep, "time_prep");
    pos(time_meas, "time_meas");
    pos(time_reset, "time_reset");
    if (!(t1_tailedness >= 0.0) || !std::isfinite(t1_tailedness))
        throw std::invalid_argument("hardware parameter t1_tailedness must be non-negative");
}

double depolarizing_rate(double fidelity, int n_qubits) {
    require(n_qubits == 1 || n_qubits == 2, "depolarizing_rate: n_qubits must be 1 or 2");
    require(fidelity >= 0.0 && fidelity <= 1.0, "depolarizing_rate: fidelity must be in [0,1]");
    // F = 1 - c*p with c = (2^n-1)2^n/(2^{2n}-1), i.e. 2/3 (n=1), 4/5 (n=2).
    double c = n_qubits == 1 ? 2.0 / 3.0 : 4.0 / 5.0;
    return (1.0 - fidelity) / c;
}

double idle_error_rate(double duration, double t1) {
    require(duration >= 0.0, "idle_error_rate: duration must be non-negative");
    require(t1 > 0.0, "idle_error_rate: t1 must be positive");
    return 0.75 * (1.0 - std::exp(-duration / t1));
}

double NoiseChannelSet::idle_rate(double duration) const {
    return idle_error_rate(duration, t1);
}

NoiseChannelSet derive_noise_channels(const HardwareParams& params) {
    params.validate();
    NoiseChannelSet n;
    n.p_dep_1q = depolarizing_rate(1.0 - params.err_1q, 1);
    n.p_dep_2q = depolarizing_rate(1.0 - params.err_2q, 2);
    n.p_prep_flip = params.err_prep;
    n.p_meas_flip = params.err_meas;
    n.p_reset_flip = params.err_reset;
    n.t1 = params.t1;
    n.time_1q = params.time_1q;
    n.time_2q = params.time_2q;
    n.time_prep = params.time_prep;
    n.time_meas = params.time_meas;
    n.time_reset = params.time_reset;
    return n;
}

NoiseChannelSet NoiseChannelSet::noiseless() {
    NoiseChannelSet n;
    n.t1 = std::numeric_limits<double>::infinity();
    n.time_1q = 25e-9;
    n.time_2q = 25e-9;
    n.time_prep = 1e-6;
    n.time_meas = 200e-9;
    n.time_reset = 200e-9;
    return n;
}

double logical_cycle_time(const HardwareParams& params, long long d, bool single_meas) {
    require(d >= 1 && is_odd(d), "logical_cycle_time: d must be odd and >= 1");
    double meas = single_meas ? params.time_meas : 2.0 * params.time_meas;
    double check = meas + 4.0 * params.time_2q + 2.0 * params.time_1q + params.time_reset;
    return double(d) * check;
}

double parse_duration(const std::string& text) {
    std::string s = text;
    // strip whitespace
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw parse_error("empty duration");
    size_t pos = 0;
    double value;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw parse_error("cannot parse duration '" + text + "'");
    }
    std::string unit = s.substr(pos);
    double scale;
    if (unit.empty() || unit == "s")
        scale = 1.0;
    else if (unit == "ms")
        scale = 1e-3;
    else if (unit == "us" || unit == "µs" || unit == "μs")
        scale = 1e-6;
    else if (unit == "ns")
        scale = 1e-9;
    else
        throw parse_error("unknown duration unit '" + unit + "' in '" + text + "'");
    return value * scale;
}

namespace {

double read_field(const nlohmann::json& j, const std::string& key, bool is_time) {
    if (!j.contains(key)) throw parse_error("hardware parameter file is missing field \"" + key + "\"");
    const auto& v = j.at(key);
    if (v.is_string()) {
        if (!is_time) throw parse_error("field \"" + key + "\" must be a number");
        return parse_duration(v.get<std::string>());
    }
    if (!v.is_number()) throw parse_error("field \"" + key + "\" must be a number or duration string");
    return v.get<double>();
}

HardwareParams params_from_json(const nlohmann::json& j) {
    HardwareParams p;
    p.t1 = read_field(j, "t1", true);
    p.t2 = read_field(j, "t2", true);
    p.err_1q = read_field(j, "err_1q", false);
    p.err_2q = read_field(j, "err_2q", false);
    p.err_prep = read_field(j, "err_prep", false);
    p.err_meas = read_field(j, "err_meas", false);
    p.err_reset = read_field(j, "err_reset", false);
    p.time_1q = read_field(j, "time_1q", true);
    p.time_2q = read_field(j, "time_2q", true);
    p.time_prep = read_field(j, "time_prep", true);
    p.time_meas = read_field(j, "time_meas", true);
    p.time_reset = read_field(j, "time_reset", true);
    p.t1_tailedness = read_field(j, "t1_tailedness", true);
    p.validate();
    return p;
}

}  // namespace

HardwareParams load_hardware_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open hardware parameter file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("cannot parse '" + path + "': " + e.what());
    }
    return params_from_json(j);
}

const HardwareParams& hardware_preset(const std::string& name) {
    auto make = [](double t1_us, double tail_us, double e1, double e2, double eprep, double emeas,
                   double ereset, double t1q_ns, double t2q_ns, double tprep_ns, double tmeas_ns,
                   double treset_ns) {
        HardwareParams p;
        p.t1 = t1_us * 1e-6;
        p.t2 = t1_us * 1e-6;
        p.t1_tailedness = tail_us * 1e-6;
        p.err_1q = e1;
        p.err_2q = e2;
        p.err_prep = eprep;
        p.err_meas = emeas;
        p.err_reset = ereset;
        p.time_1q = t1q_ns * 1e-9;
        p.time_2q = t2q_ns * 1e-9;
        p.time_prep = tprep_ns * 1e-9;
        p.time_meas = tmeas_ns * 1e-9;
        p.time_reset = treset_ns * 1e-9;
        return p;
    };
    static const std::map<std::string, HardwareParams> presets = {
        {"baseline", make(100, 71, 4e-4, 3e-3, 0.02, 0.01, 0.01, 25, 25, 1000, 200, 200)},
        {"target", make(200, 23, 2e-4, 5e-4, 0.01, 0.005, 0.005, 25, 25, 1000, 100, 100)},
        {"desired", make(340, 23, 1.2e-4, 2.9e-4, 0.00588, 0.00294, 0.00294, 25, 25, 1000, 100, 100)},
        // Representative superconducting QPU gate times used by the tailedness
        // study; coherence/errors are placeholders overridden per qubit.
        {"ibm_torino", make(180, 71, 2.7e-4, 4.5e-3, 0.02, 0.02, 0.02, 32, 68, 780, 780, 780)},
    };
    auto it = presets.find(name);
    if (it == presets.end())
        throw std::invalid_argument("unknown hardware preset '" + name +
                                    "' (known: baseline, target, desired, ibm_torino)");
    return it->second;
}

}  // namespace qraft
