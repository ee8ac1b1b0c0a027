#pragma once

#include <functional>
#include <map>
#include <string>

#include "qraft/util.hpp"

namespace qraft {

/// Physical hardware parameter set: coherence, gate/SPAM error rates, and
/// operation times, plus the standard deviation of the T1 distribution.
/// All times are in seconds, all error rates are probabilities.
struct HardwareParams {
    double t1 = 0;
    double t2 = 0;
    double err_1q = 0;
    double err_2q = 0;
    double err_prep = 0;
    double err_meas = 0;
    double err_reset = 0;
    double time_1q = 0;
    double time_2q = 0;
    double time_prep = 0;
    double time_meas = 0;
    double time_reset = 0;
    double t1_tailedness = 0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Circuit-level noise channel strengths and operation timings derived from
/// hardware parameters. Timings drive the idle-channel durations.
struct NoiseChannelSet {
    double p_dep_1q = 0;
    double p_dep_2q = 0;
    double p_prep_flip = 0;
    double p_meas_flip = 0;
    double p_reset_flip = 0;
    double t1 = 0;  // drives the idle channel
    double time_1q = 0;
    double time_2q = 0;
    double time_prep = 0;
    double time_meas = 0;
    double time_reset = 0;

    /// Idle depolarizing rate for a qubit idling for `duration` seconds.
    double idle_rate(double duration) const;

    /// All channel strengths zero (timings kept); useful for noiseless builds.
    static NoiseChannelSet noiseless();
};

/// Inverts the depolarizing channel's average gate fidelity
/// F = 1 - (2^n-1)2^n/(2^{2n}-1) * p for n in {1,2}.
double depolarizing_rate(double fidelity, int n_qubits);

/// Idle channel rate p = (3/4)(1 - exp(-t/T1)).
double idle_error_rate(double duration, double t1);

/// Populates all channel strengths from a validated parameter set.
NoiseChannelSet derive_noise_channels(const HardwareParams& params);

/// Duration of one logical cycle: d parity checks, each taking
/// 2*T_meas + 4*T_2q + 2*T_1q + T_reset. Set single_meas to count the
/// measurement interval once instead of twice.
double logical_cycle_time(const HardwareParams& params, long long d, bool single_meas = false);

/// Parses a duration like "25ns", "1us", "100µs", "1.5ms", or plain seconds.
double parse_duration(const std::string& text);

/// Loads and validates a hardware parameter JSON file (see data/hw/*.json).
/// Missing fields, parse failures, and invariant violations are reported
/// distinctly.
HardwareParams load_hardware_params(const std::string& path);

/// Built-in parameter sets: "baseline", "target", "desired", "ibm_torino".
const HardwareParams& hardware_preset(const std::string& name);

}  // namespace qraft
