// Copyright 2026 The demc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance gate. One pass/fail line per criterion; nonzero exit
// if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "demc/adaptive.hpp"
#include "demc/codes.hpp"
#include "demc/compile.hpp"
#include "demc/eec.hpp"
#include "demc/frame.hpp"

using namespace demc;
using clock_type = std::chrono::steady_clock;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixture(const std::string &name, const std::string &file) {
    return std::string(DEMC_FIXTURES_DIR) + "/" + name + "/" + file;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string &what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

// 1: the hand-written repetition circuit compiles to exactly 9 classes with the
// documented merges.
Check criterion1() {
    Check c;
    auto t0 = clock_type::now();
    Circuit circ = parse_circuit(read_file(fixture("rep_handwritten", "circuit.txt")));
    Stepg g = lower(circ, CorrelationLevel::L0);
    EecMatrix m = EecMatrix::zeroed(g);
    init_leaves(g, circ.detectors, circ.observables, m);
    run_backward(g, m);
    std::vector<SignedSource> signed_sources;
    for (const ErrorSource &s : g.sources) {
        signed_sources.push_back({source_signature(g, m, s), s.prob});
    }
    std::vector<std::vector<uint32_t>> members;
    Dem d = reduce(signed_sources, g.num_detectors, g.num_observables, &members);
    c.expect(circ.detectors.size() == 4, "expected 4 detectors");
    c.expect(g.sources.size() == 26, "expected 26 error placements, got " +
                                         std::to_string(g.sources.size()));
    c.expect(d.hyperedges.size() == 9,
             "expected 9 hyperedges, got " + std::to_string(d.hyperedges.size()));
    // Placements 3, 8 and 13 (the third error of each of the first three
    // boundaries) merge into one class; placement 12 lands in {D2, D3}.
    for (size_t i = 0; i < members.size(); i++) {
        std::set<uint32_t> grp(members[i].begin(), members[i].end());
        if (grp.count(3)) {
            c.expect(grp == std::set<uint32_t>{3, 8, 13},
                     "placements 3/8/13 not merged into a single class");
        }
        if (grp.count(12)) {
            c.expect(d.hyperedges[i].detectors == std::vector<uint32_t>{2, 3},
                     "placement 12 not in class {D2, D3}");
        }
    }
    c.expect(seconds_since(t0) < 1.0, "runtime exceeded 1 s");
    return c;
}

// 2: pipeline vs forward-propagation oracle across codes and levels.
Check criterion2() {
    Check c;
    auto t0 = clock_type::now();
    std::vector<Circuit> circuits;
    circuits.push_back(gen_repetition(3, 2, NoiseModel{0.001}));
    circuits.push_back(gen_surface(3, 2, NoiseModel{0.001}));
    circuits.push_back(gen_surface(3, 3, NoiseModel{0.001}));
    for (const Circuit &circ : circuits) {
        for (auto level :
             {CorrelationLevel::L0, CorrelationLevel::L1, CorrelationLevel::L2}) {
            Dem pipeline = compile_circuit(circ, level);
            Dem oracle = build_dem_oracle(circ, level);
            std::string diff;
            if (!dem_close(pipeline, oracle, 1e-12, &diff)) {
                c.expect(false, "level " + std::to_string((int)level) + ": " + diff);
            }
        }
    }
    c.expect(seconds_since(t0) < 60.0, "runtime exceeded 60 s");
    return c;
}

// 3: merge_prob algebra.
Check criterion3() {
    Check c;
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 10000; i++) {
        double p = u(rng);
        c.expect(merge_prob(p, 0) == p, "identity failed");
        c.expect(merge_prob(0.5, p) == 0.5, "absorbing point failed");
        double a = u(rng), b = u(rng);
        c.expect(std::abs(merge_prob(a, b) - merge_prob(b, a)) <= 1e-15,
                 "commutativity failed");
        c.expect(std::abs(merge_prob(merge_prob(a, b), p) - merge_prob(a, merge_prob(b, p))) <=
                     1e-15,
                 "associativity failed");
    }
    return c;
}

// 4: per-round rate conversion.
Check criterion4() {
    Check c;
    for (uint32_t d : {1u, 2u, 5u, 11u}) {
        c.expect(per_round_rate(0, d) == 0, "zero rate failed");
    }
    c.expect(per_round_rate(0.3, 1) == 0.3, "single-round identity failed");
    c.expect(std::abs(per_round_rate(0.18, 2) - 0.1) <= 1e-12, "(0.18, 2) != 0.1");
    return c;
}

// 5: alpha values and level-monotone hyperedge counts.
Check criterion5() {
    Check c;
    c.expect(alpha(CorrelationLevel::L0) == 2 && alpha(CorrelationLevel::L1) == 4 &&
                 alpha(CorrelationLevel::L2) == 7,
             "alpha mismatch");
    std::vector<Circuit> corpus;
    for (const char *name : {"rep_handwritten", "rep_d3_r2", "surface_d3_r2_l0"}) {
        corpus.push_back(parse_circuit(read_file(fixture(name, "circuit.txt"))));
    }
    corpus.push_back(gen_repetition(5, 3, NoiseModel{0.002}));
    corpus.push_back(gen_surface(4, 2, NoiseModel{0.001}));
    for (const Circuit &circ : corpus) {
        size_t l0 = compile_circuit(circ, CorrelationLevel::L0).hyperedges.size();
        size_t l1 = compile_circuit(circ, CorrelationLevel::L1).hyperedges.size();
        size_t l2 = compile_circuit(circ, CorrelationLevel::L2).hyperedges.size();
        c.expect(l0 <= l1 && l1 <= l2, "hyperedge counts not monotone: " + std::to_string(l0) +
                                           ", " + std::to_string(l1) + ", " + std::to_string(l2));
    }
    return c;
}

// 6: schedule independence and repeatability.
Check criterion6() {
    Check c;
    std::vector<std::pair<Circuit, CorrelationLevel>> corpus;
    for (const char *name :
         {"rep_handwritten", "rep_d3_r2", "surface_d3_r2_l0", "surface_d3_r2_l2"}) {
        corpus.emplace_back(parse_circuit(read_file(fixture(name, "circuit.txt"))),
                            (CorrelationLevel)std::stoi(read_file(fixture(name, "level"))));
    }
    corpus.emplace_back(gen_surface(5, 2, NoiseModel{0.001}), CorrelationLevel::L2);
    for (const auto &[circ, level] : corpus) {
        std::string serial = serialize_dem(compile_circuit(circ, level, 1));
        std::string parallel = serialize_dem(compile_circuit(circ, level, 32));
        c.expect(serial == parallel, "serial vs parallel output mismatch");
        for (int rep = 0; rep < 20; rep++) {
            c.expect(serialize_dem(compile_circuit(circ, level, 4)) == serial,
                     "repeated run diverged");
        }
    }
    return c;
}

// 7: noiseless circuits are silent.
Check criterion7() {
    Check c;
    for (uint32_t d : {3u, 5u}) {
        Circuit circ = gen_surface(d, 2, NoiseModel{0});
        std::mt19937_64 rng(42 + d);
        for (int shot = 0; shot < 1000; shot++) {
            for (uint8_t v : sample_detector_values(circ, rng)) {
                if (v) {
                    c.expect(false, "surface d=" + std::to_string(d) + " detector fired at p=0");
                    return c;
                }
            }
        }
    }
    AdaptiveConfig cfg;
    cfg.d = 4;
    cfg.p = 0;
    cfg.seed = 7;
    for (uint64_t shot = 0; shot < 1000; shot++) {
        ShotRecord rec = run_adaptive_shot(cfg, shot);
        for (uint8_t v : rec.detector_values) {
            if (v) {
                c.expect(false, "adaptive detector fired at p=0");
                return c;
            }
        }
    }
    return c;
}

// 8: refresh 1 makes every shot's model equal the static one.
Check criterion8() {
    Check c;
    AdaptiveConfig cfg;
    cfg.d = 4;
    cfg.rounds = 4;
    cfg.refresh = 1;
    cfg.p = 0.001;
    cfg.seed = 31;
    Circuit static_c = build_static_concatenated(4, 4, 0.001);
    Dem static_dem = compile_circuit(static_c, CorrelationLevel::L0);
    for (uint64_t shot = 0; shot < 5; shot++) {
        ShotRecord rec = run_adaptive_shot(cfg, shot);
        c.expect(rec.circuit == static_c, "realized circuit differs from the static one");
        c.expect(rec.dem == static_dem, "per-shot model differs from the static one");
    }
    return c;
}

// 9: layout invariants hold exhaustively for the supported distances.
Check criterion9() {
    Check c;
    for (uint32_t d : {4u, 6u, 8u, 10u}) {
        IcebergLayout lay;
        try {
            lay = build_iceberg_layout(d);
        } catch (const std::exception &e) {
            c.expect(false, "d=" + std::to_string(d) + ": " + e.what());
            continue;
        }
        // Perfect matching.
        std::vector<int> seen(d * d, 0);
        for (const IcebergBlock &blk : lay.blocks) {
            for (uint32_t q : blk.outer_qubit) {
                seen[q]++;
            }
        }
        for (int s : seen) {
            c.expect(s == 1, "d=" + std::to_string(d) + ": matching not perfect");
        }
        // Disjoint adjacent checks and per-type time slots for every pair.
        std::vector<std::set<uint32_t>> adj(d * d), sx(d * d), sz(d * d);
        for (uint32_t ci = 0; ci < lay.outer.checks.size(); ci++) {
            const SurfaceCheck &chk = lay.outer.checks[ci];
            for (int s = 0; s < 4; s++) {
                if (chk.step_data[s] < 0) {
                    continue;
                }
                adj[chk.step_data[s]].insert(ci);
                (chk.is_x ? sx : sz)[chk.step_data[s]].insert(s);
            }
        }
        for (const IcebergBlock &blk : lay.blocks) {
            auto [a, b] = blk.outer_qubit;
            for (uint32_t ci : adj[a]) {
                c.expect(!adj[b].count(ci), "d=" + std::to_string(d) + ": shared check");
            }
            for (uint32_t s : sx[a]) {
                c.expect(!sx[b].count(s), "d=" + std::to_string(d) + ": X slot clash");
            }
            for (uint32_t s : sz[a]) {
                c.expect(!sz[b].count(s), "d=" + std::to_string(d) + ": Z slot clash");
            }
        }
    }
    return c;
}

// 10: desk-scale performance floor.
Check criterion10() {
    Check c;
    for (uint32_t d : {7u, 9u}) {
        Circuit circ = gen_surface(d, 1, NoiseModel{0.001});
        compile_circuit(circ, CorrelationLevel::L2);  // warm-up
        uint64_t total_ns = 0;
        size_t hyperedges = 0;
        const int iters = 100;
        for (int i = 0; i < iters; i++) {
            CompileStats stats;
            Dem dem = compile_circuit(circ, CorrelationLevel::L2, 1, &stats);
            total_ns += stats.total_ns;
            hyperedges = dem.hyperedges.size();
        }
        double mean_s = (double)total_ns / iters / 1e9;
        double throughput = (double)hyperedges / mean_s;
        if (d == 9) {
            c.expect(mean_s < 1.0, "d=9 mean compile time " + std::to_string(mean_s) + " s");
        }
        c.expect(throughput > 1e5, "d=" + std::to_string(d) + " throughput " +
                                       std::to_string(throughput) + " edges/s");
    }
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char *what;
        Check (*fn)();
    };
    const Criterion criteria[] = {
        {"hand-written circuit reproduction (9 classes, documented merges)", criterion1},
        {"pipeline equals forward oracle across codes and levels", criterion2},
        {"probability-merge algebra", criterion3},
        {"per-round rate conversion", criterion4},
        {"correlation-level structure and monotone hyperedge counts", criterion5},
        {"determinism and schedule independence", criterion6},
        {"noiseless soundness (generated and adaptive circuits)", criterion7},
        {"adaptive/static model equivalence at refresh 1", criterion8},
        {"concatenated layout validity for d in {4, 6, 8, 10}", criterion9},
        {"desk-scale performance floor", criterion10},
    };
    int failures = 0;
    for (size_t i = 0; i < std::size(criteria); i++) {
        Check c;
        try {
            c = criteria[i].fn();
        } catch (const std::exception &e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": "
                  << criteria[i].what;
        if (!c.ok) {
            std::cout << " [" << c.detail << "]";
            failures++;
        }
        std::cout << "\n";
    }
    return failures == 0 ? 0 : 1;
}
