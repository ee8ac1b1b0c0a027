#include <functional>

#include "doctest.h"
#include "qraft/decoder.hpp"
#include "qraft/hw.hpp"
#include "qraft/surface.hpp"

using namespace qraft;

namespace {

NoiseChannelSet baseline_noise() { return derive_noise_channels(hardware_preset("baseline")); }

// Minimum-weight pairing by exhaustive recursion.
int64_t brute_force_matching(int n, const std::vector<int64_t>& w) {
    std::vector<int> used(n, 0);
    std::function<int64_t()> rec = [&]() -> int64_t {
        int first = -1;
        for (int i = 0; i < n; ++i)
            if (!used[i]) {
                first = i;
                break;
            }
        if (first < 0) return 0;
        used[first] = 1;
        int64_t best = INT64_MAX;
        for (int j = first + 1; j < n; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            int64_t rest = rec();
            if (rest != INT64_MAX) best = std::min(best, w[size_t(first) * n + j] + rest);
            used[j] = 0;
        }
        used[first] = 0;
        return best;
    };
    return rec();
}

}  // namespace

TEST_CASE("dense matcher agrees with brute force on random graphs") {
    DenseMatcher matcher;
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 * (1 + int(rng.below(5)));  // 2..10
        std::vector<int64_t> w(size_t(n) * n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                int64_t v = int64_t(rng.below(1000));
                w[size_t(i) * n + j] = w[size_t(j) * n + i] = v;
            }
        const auto& mate = matcher.solve(n, w);
        // validate it is a perfect matching
        for (int i = 0; i < n; ++i) {
            CHECK(mate[i] >= 0);
            CHECK(mate[size_t(mate[i])] == i);
            CHECK(mate[i] != i);
        }
        CHECK(matcher.total_weight() == brute_force_matching(n, w));
    }
}

TEST_CASE("graph construction merges parallel faults") {
    FaultCatalog cat;
    cat.n_detectors = 2;
    cat.n_observables = 1;
    Fault f;
    f.channel_index = 0;
    f.component = 1;
    f.probability = 0.1;
    f.detectors = {0, 1};
    cat.faults.push_back(f);
    f.channel_index = 1;
    cat.faults.push_back(f);
    auto g = DetectorGraph::from_catalog(cat);
    REQUIRE(g.edges().size() == 1);
    CHECK(g.edges()[0].probability == doctest::Approx(0.18));  // 2*0.1*0.9
    CHECK(g.edges()[0].weight == doctest::Approx(std::log(0.82 / 0.18)));
}

TEST_CASE("graph construction routes single-detector faults to the boundary") {
    FaultCatalog cat;
    cat.n_detectors = 3;
    cat.n_observables = 1;
    Fault f;
    f.probability = 0.05;
    f.component = 1;
    f.channel_index = 0;
    f.detectors = {1};
    f.observables = {0};
    cat.faults.push_back(f);
    auto g = DetectorGraph::from_catalog(cat);
    REQUIRE(g.edges().size() == 1);
    CHECK(g.edges()[0].u == 1);
    CHECK(g.edges()[0].v == g.boundary_node());
    CHECK(g.edges()[0].observable_mask == 1);

    // empty catalog: boundary only, no edges
    FaultCatalog empty;
    empty.n_detectors = 0;
    auto ge = DetectorGraph::from_catalog(empty);
    CHECK(ge.edges().empty());
}

TEST_CASE("decoding the d=3 memory circuit") {
    auto c = build_memory_circuit(3, 3, baseline_noise());
    auto cat = enumerate_faults(c);
    auto g = DetectorGraph::from_catalog(cat);
    Decoder dec(g);

    SUBCASE("all-zero syndrome predicts no flip") {
        std::vector<uint8_t> syndrome(g.n_detectors(), 0);
        CHECK(dec.decode(syndrome) == 0);
    }

    SUBCASE("every single fault is corrected") {
        std::vector<uint8_t> syndrome(g.n_detectors());
        for (const auto& f : cat.faults) {
            std::fill(syndrome.begin(), syndrome.end(), 0);
            for (uint32_t d : f.detectors) syndrome[d] ^= 1;
            uint64_t predicted = dec.decode(syndrome);
            uint64_t actual = 0;
            for (uint32_t o : f.observables) actual |= uint64_t(1) << o;
            CHECK(predicted == actual);
        }
    }
}

TEST_CASE("decoder corrects all data-error patterns below half distance") {
    // Inject X errors on data qubits directly (before round 1) and check
    // every pattern of weight <= (d-1)/2 decodes to the right observable.
    for (int d : {3, 5}) {
        auto quiet = build_memory_circuit(d, d, NoiseChannelSet::noiseless());
        // attach a tiny X error to every data qubit so the graph has the
        // corresponding edges, then enumerate
        StabCircuit noisy = quiet;
        std::vector<uint32_t> data_ids;
        for (uint32_t q = 0; q < noisy.n_qubits; ++q) {
            auto [x, y] = noisy.coords[q];
            if (int(x) % 2 == 1 && int(y) % 2 == 1) data_ids.push_back(q);
        }
        Instruction err{Op::XError, 1e-3, data_ids};
        // after preparation: find first Prep instruction
        for (size_t i = 0; i < noisy.instructions.size(); ++i)
            if (noisy.instructions[i].op == Op::Prep) {
                noisy.instructions.insert(noisy.instructions.begin() + i + 1, err);
                break;
            }
        auto cat = enumerate_faults(noisy);
        auto g = DetectorGraph::from_catalog(cat);
        Decoder dec(g);

        // catalog faults are exactly the data X errors here
        REQUIRE(cat.faults.size() == data_ids.size());
        int w = (d - 1) / 2;
        std::vector<int> idx(cat.faults.size());
        std::vector<uint8_t> syndrome(g.n_detectors());
        std::function<void(size_t, int, std::vector<size_t>&)> walk =
            [&](size_t start, int left, std::vector<size_t>& picked) {
                if (left == 0) {
                    std::fill(syndrome.begin(), syndrome.end(), 0);
                    uint64_t actual = 0;
                    for (size_t p : picked) {
                        for (uint32_t dd : cat.faults[p].detectors) syndrome[dd] ^= 1;
                        for (uint32_t o : cat.faults[p].observables)
                            actual ^= uint64_t(1) << o;
                    }
                    uint64_t predicted = dec.decode(syndrome);
                    REQUIRE(predicted == actual);
                    return;
                }
                for (size_t i = start; i < cat.faults.size(); ++i) {
                    picked.push_back(i);
                    walk(i + 1, left - 1, picked);
                    picked.pop_back();
                }
            };
        for (int k = 1; k <= w; ++k) {
            std::vector<size_t> picked;
            walk(0, k, picked);
        }
    }
}

TEST_CASE("decoder matching weight is exact for small defect sets") {
    // Compare against brute force over all pairings (with boundary slots)
    // for every syndrome from <= 3 catalog faults on d=3, and random
    // 4-6 defect syndromes on d=5.
    auto c = build_memory_circuit(3, 3, baseline_noise());
    auto cat = enumerate_faults(c);
    auto g = DetectorGraph::from_catalog(cat);
    g.prepare();
    Decoder dec(g);

    auto brute_weight = [&](const std::vector<uint32_t>& defects) -> int64_t {
        size_t k = defects.size();
        size_t nn = 2 * k;
        std::vector<int64_t> w(nn * nn, 0);
        for (size_t a = 0; a < k; ++a) {
            double dab_b = g.distance(defects[a], g.boundary_node());
            for (size_t b = a + 1; b < k; ++b) {
                double direct = g.distance(defects[a], defects[b]);
                double via = dab_b + g.distance(defects[b], g.boundary_node());
                int64_t cap = Decoder::scale_weight(std::min(direct, via));
                w[a * nn + b] = w[b * nn + a] = cap;
            }
            for (size_t b = k; b < nn; ++b)
                w[a * nn + b] = w[b * nn + a] = Decoder::scale_weight(dab_b);
        }
        return brute_force_matching(int(nn), w);
    };

    Rng rng(5);
    std::vector<uint8_t> syndrome(g.n_detectors());
    for (int trial = 0; trial < 150; ++trial) {
        std::fill(syndrome.begin(), syndrome.end(), 0);
        int nf = 1 + int(rng.below(3));
        for (int i = 0; i < nf; ++i) {
            const auto& f = cat.faults[rng.below(cat.faults.size())];
            for (uint32_t d : f.detectors) syndrome[d] ^= 1;
        }
        std::vector<uint32_t> defects;
        for (uint32_t i = 0; i < syndrome.size(); ++i)
            if (syndrome[i]) defects.push_back(i);
        if (defects.empty() || defects.size() > 6) continue;
        dec.decode(syndrome);
        CHECK(dec.last_weight() == brute_weight(defects));
    }
}

TEST_CASE("logical error rate estimation") {
    auto c = build_memory_circuit(3, 3, baseline_noise());
    auto cat = enumerate_faults(c);
    auto g = DetectorGraph::from_catalog(cat);

    SUBCASE("noiseless data gives zero") {
        auto quiet = build_memory_circuit(3, 3, NoiseChannelSet::noiseless());
        auto cat0 = enumerate_faults(c);  // same graph
        (void)cat0;
        auto data = sample(quiet, 100, 1);
        // the quiet circuit has identical detector/observable layout
        auto est = logical_error_rate(data, g);
        CHECK(est.estimate == 0.0);
        CHECK(est.std_err == 0.0);
    }

    SUBCASE("decoding beats no decoding") {
        auto data = sample(c, 20000, 9);
        auto est = logical_error_rate(data, g);
        uint64_t raw = 0;
        for (uint64_t s = 0; s < data.shots; ++s)
            if (data.observable_bits.get(s, 0)) ++raw;
        CHECK(est.estimate < double(raw) / double(data.shots));
        CHECK(est.estimate > 0.0);
    }

    SUBCASE("streaming runner matches materialized path and is thread-stable") {
        auto est_mat = logical_error_rate(sample(c, 5000, 21), g);
        auto est_st1 = run_logical_error_rate(c, g, 5000, 21, 1);
        auto est_st4 = run_logical_error_rate(c, g, 5000, 21, 4);
        CHECK(est_st1.failures == est_mat.failures);
        CHECK(est_st4.failures == est_mat.failures);
    }
}

TEST_CASE("suppression: d=5 beats d=3 under baseline noise") {
    auto c3 = build_memory_circuit(3, 3, baseline_noise());
    auto c5 = build_memory_circuit(5, 5, baseline_noise());
    auto g3 = DetectorGraph::from_catalog(enumerate_faults(c3));
    auto g5 = DetectorGraph::from_catalog(enumerate_faults(c5));
    auto e3 = run_logical_error_rate(c3, g3, 30000, 77, 1);
    auto e5 = run_logical_error_rate(c5, g5, 30000, 77, 1);
    CHECK(e5.estimate < e3.estimate);
}
