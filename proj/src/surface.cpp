#include "qraft/surface.hpp"

#include <algorithm>
#include <set>

#include "qraft/tableau.hpp"

namespace qraft {

namespace {

using Coord = std::pair<int, int>;

bool plaquette_is_x(int x, int y) { return ((x + y) / 2) % 2 == 0; }

// CNOT data-visit orders per stabilizer type. The interleaved dance keeps
// hook errors aligned with boundaries they can already reach.
constexpr int kXOrder[4][2] = {{1, -1}, {-1, -1}, {1, 1}, {-1, 1}};
constexpr int kZOrder[4][2] = {{1, -1}, {1, 1}, {-1, -1}, {-1, 1}};

struct CheckDef {
    Coord at;
    bool is_x = false;
    std::vector<Coord> support;
};

// Stabilizer inclusion rule for a plaquette against an active data set:
// interior plaquettes measure unconditionally; weight-2 checks are valid
// only as vertical X pairs (left/right boundaries) or horizontal Z pairs
// (top/bottom boundaries).
std::optional<CheckDef> make_check(int x, int y, const std::set<Coord>& active) {
    CheckDef c;
    c.at = {x, y};
    c.is_x = plaquette_is_x(x, y);
    for (int dy : {-1, 1})
        for (int dx : {-1, 1})
            if (active.count({x + dx, y + dy})) c.support.push_back({x + dx, y + dy});
    if (c.support.size() < 2) return std::nullopt;
    if (c.support.size() == 2) {
        bool vertical = c.support[0].first == c.support[1].first;
        bool horizontal = c.support[0].second == c.support[1].second;
        if (c.is_x && !vertical) return std::nullopt;
        if (!c.is_x && !horizontal) return std::nullopt;
    }
    std::sort(c.support.begin(), c.support.end());
    return c;
}

enum class Basis { Z, X };

class SurgeryEngine {
  public:
    SurgeryEngine(int max_x, int max_y, const NoiseChannelSet& noise)
        : noise_(noise), max_x_(max_x), max_y_(max_y) {}

    // Registers the data sets of every phase up front so qubit ids can be
    // assigned in one deterministic scan.
    void plan_phases(const std::vector<std::set<Coord>>& phase_data) {
        phase_data_ = phase_data;
        std::set<Coord> used;
        for (const auto& data : phase_data_) {
            for (const auto& dq : data) used.insert(dq);
            for (int y = 0; y <= max_y_; y += 2)
                for (int x = 0; x <= max_x_; x += 2)
                    if (make_check(x, y, data)) used.insert({x, y});
        }
        for (int y = 0; y <= max_y_; ++y)
            for (int x = 0; x <= max_x_; ++x)
                if (used.count({x, y})) {
                    id_[{x, y}] = uint32_t(circuit_.coords.size());
                    circuit_.coords.push_back({double(x), double(y)});
                }
        circuit_.n_qubits = uint32_t(circuit_.coords.size());
    }

    uint32_t id_at(Coord c) const { return id_.at(c); }

    // Runs `rounds` parity-check rounds over the data set of the phase.
    // prep_data are prepared in the first round's preparation layer; extra_h
    // are Hadamard-ed right after (plus-state preparation).
    void run_phase(size_t phase_index, int rounds, const std::vector<Coord>& prep_data,
                   const std::vector<Coord>& extra_h) {
        const auto& data = phase_data_[phase_index];
        std::vector<CheckDef> checks;
        for (int y = 0; y <= max_y_; y += 2)
            for (int x = 0; x <= max_x_; x += 2)
                if (auto c = make_check(x, y, data)) checks.push_back(*c);

        std::vector<uint32_t> active;
        for (const auto& dq : data) active.push_back(id_at(dq));
        for (const auto& ck : checks) active.push_back(id_at(ck.at));
        std::sort(active.begin(), active.end());

        for (int r = 0; r < rounds; ++r) {
            ++round_;
            if (r == 0) phase_first_round_[phase_index] = round_;

            // preparation / reset layer
            std::vector<uint32_t> to_prep, to_reset;
            if (r == 0)
                for (const auto& dq : prep_data) to_prep.push_back(id_at(dq));
            for (const auto& ck : checks) {
                uint32_t a = id_at(ck.at);
                (live_ancillas_.count(a) ? to_reset : to_prep).push_back(a);
            }
            std::sort(to_prep.begin(), to_prep.end());
            std::sort(to_reset.begin(), to_reset.end());
            double dur = 0;
            if (!to_prep.empty()) dur = std::max(dur, noise_.time_prep);
            if (!to_reset.empty()) dur = std::max(dur, noise_.time_reset);
            std::vector<uint32_t> participants;
            if (!to_prep.empty()) {
                circuit_.append(Op::Prep, to_prep);
                for (uint32_t q : to_prep)
                    noise1(Op::XError, q, noise_.p_prep_flip, NoiseTag::PrepFlip);
                participants.insert(participants.end(), to_prep.begin(), to_prep.end());
            }
            if (!to_reset.empty()) {
                circuit_.append(Op::Prep, to_reset);
                for (uint32_t q : to_reset)
                    noise1(Op::XError, q, noise_.p_reset_flip, NoiseTag::ResetFlip);
                participants.insert(participants.end(), to_reset.begin(), to_reset.end());
            }
            idle_layer(active, participants, dur);

            // first Hadamard layer
            std::vector<uint32_t> hs;
            for (const auto& ck : checks)
                if (ck.is_x) hs.push_back(id_at(ck.at));
            if (r == 0)
                for (const auto& dq : extra_h) hs.push_back(id_at(dq));
            h_layer_of(active, std::move(hs));

            // four CNOT sub-layers
            for (int step = 0; step < 4; ++step) {
                std::vector<std::pair<uint32_t, uint32_t>> pairs;  // (control, target)
                for (const auto& ck : checks) {
                    const auto& off = ck.is_x ? kXOrder[step] : kZOrder[step];
                    Coord dq{ck.at.first + off[0], ck.at.second + off[1]};
                    if (!std::binary_search(ck.support.begin(), ck.support.end(), dq)) continue;
                    uint32_t a = id_at(ck.at), q = id_at(dq);
                    pairs.push_back(ck.is_x ? std::pair{a, q} : std::pair{q, a});
                }
                std::sort(pairs.begin(), pairs.end());
                std::vector<uint32_t> flat;
                for (auto [c0, t0] : pairs) {
                    flat.push_back(c0);
                    flat.push_back(t0);
                }
                if (!flat.empty()) circuit_.append(Op::Cnot, flat);
                for (auto [c0, t0] : pairs)
                    if (noise_.p_dep_2q > 0) {
                        circuit_.append(Op::Depolarize2, {c0, t0}, noise_.p_dep_2q);
                        circuit_.instructions.back().tag = NoiseTag::Gate2;
                    }
                idle_layer(active, flat, noise_.time_2q);
            }

            // second Hadamard layer
            std::vector<uint32_t> hs2;
            for (const auto& ck : checks)
                if (ck.is_x) hs2.push_back(id_at(ck.at));
            h_layer_of(active, std::move(hs2));

            // measurement layer
            std::vector<std::pair<uint32_t, const CheckDef*>> order;
            for (const auto& ck : checks) order.push_back({id_at(ck.at), &ck});
            std::sort(order.begin(), order.end());
            std::vector<uint32_t> measured;
            for (auto [a, ck] : order) {
                circuit_.append(Op::Meas, {a}, noise_.p_meas_flip);
                circuit_.instructions.back().tag = NoiseTag::MeasFlip;
                Instance inst;
                inst.round = round_;
                inst.m = m_count_++;
                for (const auto& dq : ck->support) inst.supp.push_back(id_at(dq));
                std::sort(inst.supp.begin(), inst.supp.end());
                instances_[a].push_back(std::move(inst));
                measured.push_back(a);
            }
            idle_layer(active, measured, noise_.time_meas);

            live_ancillas_.clear();
            for (auto [a, ck] : order) live_ancillas_.insert(a);
        }
        current_active_data_ = data;
    }

    // Measures data qubits and removes them from the active set. X-basis
    // groups get a Hadamard layer first; all groups share one measurement
    // layer, in ascending qubit-id order.
    void measure_data(const std::vector<std::pair<std::vector<Coord>, Basis>>& groups) {
        std::vector<uint32_t> still_active;
        for (const auto& dq : current_active_data_) still_active.push_back(id_at(dq));
        std::sort(still_active.begin(), still_active.end());

        std::vector<uint32_t> to_h;
        std::vector<std::pair<uint32_t, Basis>> to_meas;
        for (const auto& [coords, basis] : groups)
            for (const auto& dq : coords) {
                uint32_t q = id_at(dq);
                to_meas.push_back({q, basis});
                if (basis == Basis::X) to_h.push_back(q);
            }
        if (!to_h.empty()) h_layer_of(still_active, std::move(to_h));
        std::sort(to_meas.begin(), to_meas.end());
        std::vector<uint32_t> measured;
        for (auto [q, basis] : to_meas) {
            circuit_.append(Op::Meas, {q}, noise_.p_meas_flip);
            circuit_.instructions.back().tag = NoiseTag::MeasFlip;
            data_meas_[q] = {m_count_++, basis};
            measured.push_back(q);
        }
        idle_layer(still_active, measured, noise_.time_meas);
        for (const auto& [coords, basis] : groups)
            for (const auto& dq : coords) current_active_data_.erase(dq);
    }

    uint32_t data_meas_index(Coord c) const { return data_meas_.at(id_.at(c)).first; }

    // Builds detector candidates, validates them against a symbolic noiseless
    // execution, and attaches the survivors.
    void attach_detectors() {
        tableau_.emplace(circuit_.n_qubits);
        tableau_->run(circuit_);

        struct Candidate {
            int round;
            uint32_t anc;
            std::vector<uint32_t> meas;
            bool secondary = false;  // only used when the primary fails
        };
        std::vector<Candidate> candidates;

        std::vector<uint32_t> anc_ids;
        for (const auto& [a, _] : instances_) anc_ids.push_back(a);
        std::sort(anc_ids.begin(), anc_ids.end());

        for (uint32_t a : anc_ids) {
            const auto& insts = instances_.at(a);
            for (size_t i = 0; i < insts.size(); ++i) {
                if (i == 0) {
                    candidates.push_back({insts[0].round, a, {insts[0].m}, false});
                    continue;
                }
                const auto& prev = insts[i - 1];
                const auto& cur = insts[i];
                std::vector<uint32_t> meas = {prev.m, cur.m};
                bool complete = true;
                for (uint32_t q : prev.supp) {
                    if (std::binary_search(cur.supp.begin(), cur.supp.end(), q)) continue;
                    auto it = data_meas_.find(q);
                    if (it == data_meas_.end() || it->second.first > cur.m) {
                        complete = false;
                        break;
                    }
                    meas.push_back(it->second.first);
                }
                if (complete) {
                    std::sort(meas.begin(), meas.end());
                    candidates.push_back({cur.round, a, std::move(meas), false});
                }
                if (prev.supp != cur.supp)
                    candidates.push_back({cur.round, a, {cur.m}, true});
            }
            // Final reconstruction from transversal data measurements.
            const auto& last = insts.back();
            std::vector<uint32_t> meas = {last.m};
            bool complete = true;
            for (uint32_t q : last.supp) {
                auto it = data_meas_.find(q);
                if (it == data_meas_.end() || it->second.first < last.m) {
                    complete = false;
                    break;
                }
                meas.push_back(it->second.first);
            }
            if (complete) {
                std::sort(meas.begin(), meas.end());
                candidates.push_back({round_ + 1, a, std::move(meas), false});
            }
        }

        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Candidate& l, const Candidate& r) {
                             if (l.round != r.round) return l.round < r.round;
                             return l.anc < r.anc;
                         });
        std::set<std::pair<int, uint32_t>> satisfied;
        for (auto& cand : candidates) {
            if (cand.secondary && satisfied.count({cand.round, cand.anc})) continue;
            GaugeExpr e = tableau_->parity_of(cand.meas);
            if (!e.is_deterministic()) continue;
            require(e.constant == 0, "internal: deterministic detector with odd parity");
            satisfied.insert({cand.round, cand.anc});
            circuit_.detectors.push_back(std::move(cand.meas));
        }
    }

    // Attaches an observable: the readout parity plus, when the readout
    // alone is gauge-dependent, a correcting subset of earlier outcomes
    // solved over GF(2). Pools are tried cumulatively in order.
    void attach_observable(const std::vector<uint32_t>& readout,
                           const std::vector<std::vector<uint32_t>>& pools) {
        GaugeExpr target = tableau_->parity_of(readout);
        std::vector<uint32_t> obs = readout;
        if (!target.is_deterministic()) {
            bool solved = false;
            std::vector<uint32_t> pool_meas;
            for (const auto& pool : pools) {
                pool_meas.insert(pool_meas.end(), pool.begin(), pool.end());
                std::vector<GaugeExpr> exprs;
                exprs.reserve(pool_meas.size());
                for (uint32_t m : pool_meas) exprs.push_back(tableau_->outcomes()[m]);
                if (auto subset = solve_gauge_subset(exprs, target)) {
                    for (size_t i : *subset) obs.push_back(pool_meas[i]);
                    solved = true;
                    break;
                }
            }
            require(solved, "internal: observable gauge dependence has no correction set");
        }
        std::sort(obs.begin(), obs.end());
        GaugeExpr final_expr = tableau_->parity_of(obs);
        require(final_expr.is_deterministic() && final_expr.constant == 0,
                "internal: observable is not deterministically zero");
        circuit_.observables.push_back(std::move(obs));
    }

    // Measurement indices of all parity checks recorded in a given round.
    std::vector<uint32_t> round_meas(int round) const {
        std::vector<uint32_t> out;
        for (const auto& [a, insts] : instances_)
            for (const auto& inst : insts)
                if (inst.round == round) out.push_back(inst.m);
        std::sort(out.begin(), out.end());
        return out;
    }

    int first_round_of_phase(size_t phase) const { return phase_first_round_.at(phase); }
    uint32_t num_meas() const { return m_count_; }

    StabCircuit take() { return std::move(circuit_); }

  private:
    struct Instance {
        int round = 0;
        uint32_t m = 0;
        std::vector<uint32_t> supp;
    };

    const NoiseChannelSet& noise_;
    int max_x_, max_y_;
    StabCircuit circuit_;
    std::map<Coord, uint32_t> id_;
    std::vector<std::set<Coord>> phase_data_;
    std::set<Coord> current_active_data_;
    std::map<uint32_t, std::vector<Instance>> instances_;
    std::map<uint32_t, std::pair<uint32_t, Basis>> data_meas_;
    std::set<uint32_t> live_ancillas_;
    std::map<size_t, int> phase_first_round_;
    int round_ = 0;
    uint32_t m_count_ = 0;
    std::optional<GaugeTableau> tableau_;

    void noise1(Op op, uint32_t q, double p, NoiseTag tag) {
        if (p <= 0) return;
        circuit_.append(op, {q}, p);
        circuit_.instructions.back().tag = tag;
    }

    void idle_layer(const std::vector<uint32_t>& active, std::vector<uint32_t> participants,
                    double duration) {
        if (duration <= 0) return;
        double p = noise_.idle_rate(duration);
        if (p <= 0) return;
        std::sort(participants.begin(), participants.end());
        for (uint32_t q : active) {
            if (std::binary_search(participants.begin(), participants.end(), q)) continue;
            circuit_.append(Op::Depolarize1, {q}, p);
            circuit_.instructions.back().tag = NoiseTag::Idle;
            circuit_.instructions.back().aux = float(duration);
        }
    }

    void h_layer_of(const std::vector<uint32_t>& active, std::vector<uint32_t> hs) {
        std::sort(hs.begin(), hs.end());
        if (!hs.empty()) {
            circuit_.append(Op::Hadamard, hs);
            for (uint32_t q : hs) noise1(Op::Depolarize1, q, noise_.p_dep_1q, NoiseTag::Gate1);
        }
        idle_layer(active, std::move(hs), noise_.time_1q);
    }
};

std::set<Coord> rect_data(int cols, int rows, int x_offset) {
    std::set<Coord> out;
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < rows; ++j) out.insert({x_offset + 2 * i + 1, 2 * j + 1});
    return out;
}

}  // namespace

SurfaceCodePatch make_patch(int distance) {
    require(distance >= 3 && is_odd(distance), "distance must be odd and >= 3");
    SurfaceCodePatch p;
    p.distance = distance;
    auto data = rect_data(distance, distance, 0);
    p.data_qubit_coords.assign(data.begin(), data.end());
    for (int y = 0; y <= 2 * distance; y += 2)
        for (int x = 0; x <= 2 * distance; x += 2)
            if (auto c = make_check(x, y, data)) {
                (c->is_x ? p.x_ancilla_coords : p.z_ancilla_coords).push_back({x, y});
            }
    return p;
}

StabCircuit build_memory_circuit(int d, int rounds, const NoiseChannelSet& noise) {
    require(d >= 3 && is_odd(d), "build_memory_circuit: d must be odd and >= 3");
    require(rounds >= 1, "build_memory_circuit: rounds must be >= 1");

    SurgeryEngine eng(2 * d, 2 * d, noise);
    auto data = rect_data(d, d, 0);
    eng.plan_phases({data});
    std::vector<Coord> data_list(data.begin(), data.end());
    eng.run_phase(0, rounds, data_list, {});
    eng.measure_data({{data_list, Basis::Z}});
    eng.attach_detectors();

    // Z logical: leftmost data column.
    std::vector<uint32_t> readout;
    for (int j = 0; j < d; ++j) readout.push_back(eng.data_meas_index({1, 2 * j + 1}));
    eng.attach_observable(readout, {});

    StabCircuit c = eng.take();
    c.validate();
    return c;
}

std::vector<double> cut_positions(const TeleportSpec& spec) {
    std::vector<double> lines;
    for (int k = 0; k < spec.n_cuts; ++k) {
        int j = (k + 1) * spec.b / (spec.n_cuts + 1);
        lines.push_back(double(2 * spec.d + 2 * j));
    }
    return lines;
}

void TeleportSpec::validate() const {
    require(d >= 3 && is_odd(d), "teleport: d must be odd and >= 3");
    require(b >= 1, "teleport: bus width must be >= 1");
    require(r_pm >= 1, "teleport: r_pm must be >= 1");
    require(r_m >= 1, "teleport: r_m must be >= 1");
    require(r_s >= 0, "teleport: r_s must be >= 0");
    require(n_cuts >= 0, "teleport: n_cuts must be >= 0");
    require(n_cuts < b, "teleport: cuts would collide (need n_cuts < b)");
    if (n_cuts > 0) require(is_probability(p_link) && p_link < 1.0, "teleport: p_link in [0,1)");
}

StabCircuit build_teleport_circuit(const TeleportSpec& spec, const NoiseChannelSet& noise) {
    spec.validate();
    const int d = spec.d, b = spec.b;

    auto source = rect_data(d, d, 0);
    auto target = rect_data(d, d, 2 * d + 2 * b);
    auto bus = rect_data(b, d, 2 * d);
    std::set<Coord> patches = source;
    patches.insert(target.begin(), target.end());
    std::set<Coord> merged = patches;
    merged.insert(bus.begin(), bus.end());

    SurgeryEngine eng(4 * d + 2 * b, 2 * d, noise);
    // Phases: pre-merge, merged, post-split.
    eng.plan_phases({patches, merged, patches});

    std::vector<Coord> prep0(patches.begin(), patches.end());
    std::vector<Coord> h0;
    if (spec.source_state == SourceState::plus) h0.assign(source.begin(), source.end());
    eng.run_phase(0, spec.r_pm, prep0, h0);

    std::vector<Coord> bus_list(bus.begin(), bus.end());
    eng.run_phase(1, spec.r_m, bus_list, {});

    // Split: bus data out in Z.
    eng.measure_data({{bus_list, Basis::Z}});

    if (spec.r_s > 0) eng.run_phase(2, spec.r_s, {}, {});

    // Projection of the source in Z; target read out in the source basis.
    std::vector<Coord> source_list(source.begin(), source.end());
    std::vector<Coord> target_list(target.begin(), target.end());
    Basis target_basis = spec.source_state == SourceState::plus ? Basis::X : Basis::Z;
    eng.measure_data({{source_list, Basis::Z}, {target_list, target_basis}});

    eng.attach_detectors();

    // Readout: a Z column (|0> teleport) or X row (|+> teleport) of the
    // target patch, plus solved frame corrections.
    std::vector<uint32_t> readout;
    if (spec.source_state == SourceState::zero) {
        for (int j = 0; j < d; ++j)
            readout.push_back(eng.data_meas_index({2 * d + 2 * b + 1, 2 * j + 1}));
    } else {
        for (int i = 0; i < d; ++i)
            readout.push_back(eng.data_meas_index({2 * d + 2 * b + 2 * i + 1, 1}));
    }
    // Frame corrections live in the early rounds (merge outcome m1), the bus
    // split, and the source projection (m2).
    std::vector<uint32_t> tier1 = eng.round_meas(eng.first_round_of_phase(0));
    for (uint32_t m : eng.round_meas(eng.first_round_of_phase(1))) tier1.push_back(m);
    for (const auto& dq : bus_list) tier1.push_back(eng.data_meas_index(dq));
    for (const auto& dq : source_list) tier1.push_back(eng.data_meas_index(dq));
    std::sort(tier1.begin(), tier1.end());

    std::vector<uint32_t> tier2;
    std::set<uint32_t> final_target;
    for (const auto& dq : target_list) final_target.insert(eng.data_meas_index(dq));
    std::set<uint32_t> tier1_set(tier1.begin(), tier1.end());
    for (uint32_t m = 0; m < eng.num_meas(); ++m)
        if (!tier1_set.count(m) && !final_target.count(m)) tier2.push_back(m);

    eng.attach_observable(readout, {tier1, tier2});

    StabCircuit c = eng.take();
    if (spec.n_cuts > 0) c = apply_cuts(c, cut_positions(spec), spec.p_link);
    c.validate();
    return c;
}

StabCircuit apply_cuts(const StabCircuit& circuit, const std::vector<double>& cut_columns,
                       double p_link) {
    require(is_probability(p_link) && p_link < 1.0, "apply_cuts: p_link must be in [0,1)");
    StabCircuit out = circuit;
    double rate = depolarizing_rate(1.0 - p_link, 2);
    for (auto& ins : out.instructions) {
        if (ins.op != Op::Depolarize2) continue;
        double x0 = out.coords[ins.targets[0]].first;
        double x1 = out.coords[ins.targets[1]].first;
        for (double c : cut_columns) {
            if ((x0 < c && x1 > c) || (x1 < c && x0 > c)) {
                ins.param = rate;
                break;
            }
        }
    }
    return out;
}

void rewrite_hetero_noise(StabCircuit& circuit, const QubitNoiseProfile& profile) {
    require(profile.t1.size() >= circuit.n_qubits && profile.err_1q.size() >= circuit.n_qubits &&
                profile.err_readout.size() >= circuit.n_qubits,
            "noise profile must cover every qubit");
    for (auto& ins : circuit.instructions) {
        switch (ins.tag) {
            case NoiseTag::PrepFlip:
            case NoiseTag::ResetFlip:
            case NoiseTag::MeasFlip:
                ins.param = profile.err_readout[ins.targets[0]];
                break;
            case NoiseTag::Gate1:
                ins.param = depolarizing_rate(1.0 - profile.err_1q[ins.targets[0]], 1);
                break;
            case NoiseTag::Gate2: {
                uint32_t a = std::min(ins.targets[0], ins.targets[1]);
                uint32_t b = std::max(ins.targets[0], ins.targets[1]);
                auto it = profile.err_2q.find({a, b});
                require(it != profile.err_2q.end(), "missing pair error rate in noise profile");
                ins.param = depolarizing_rate(1.0 - it->second, 2);
                break;
            }
            case NoiseTag::Idle:
                ins.param = idle_error_rate(double(ins.aux), profile.t1[ins.targets[0]]);
                break;
            case NoiseTag::None:
                break;
        }
    }
}

}  // namespace qraft
