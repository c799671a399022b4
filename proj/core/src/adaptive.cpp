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

#include "demc/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "demc/frame.hpp"

namespace demc {

std::pair<uint32_t, uint32_t> iceberg_partner(uint32_t r, uint32_t c, uint32_t d) {
    if (d < 4 || d % 2 != 0) {
        throw std::invalid_argument("iceberg_partner requires even d >= 4");
    }
    if (r >= d || c >= d) {
        throw std::invalid_argument("iceberg_partner coordinate out of range");
    }
    return {d - 1 - r, (c + 2) % d};
}

IcebergLayout build_iceberg_layout(uint32_t d) {
    if (d < 4 || d % 2 != 0) {
        throw std::invalid_argument("build_iceberg_layout requires even d >= 4");
    }
    IcebergLayout lay;
    lay.d = d;
    lay.outer = surface_layout(d);
    const uint32_t nq = d * d;
    lay.block_of_outer.assign(nq, UINT32_MAX);
    lay.logical_of_outer.assign(nq, 0);

    for (uint32_t q = 0; q < nq; q++) {
        if (lay.block_of_outer[q] != UINT32_MAX) {
            continue;
        }
        auto [pr, pc] = iceberg_partner(q / d, q % d, d);
        uint32_t p = pr * d + pc;
        if (p == q || lay.block_of_outer[p] != UINT32_MAX) {
            throw std::runtime_error("iceberg pairing is not a perfect matching at qubit " +
                                     std::to_string(q));
        }
        uint32_t i = (uint32_t)lay.blocks.size();
        IcebergBlock blk;
        blk.data = {6 * i, 6 * i + 1, 6 * i + 2, 6 * i + 3};
        blk.anc_x = 6 * i + 4;
        blk.anc_z = 6 * i + 5;
        blk.outer_qubit = {q, p};
        lay.blocks.push_back(blk);
        lay.block_of_outer[q] = i;
        lay.block_of_outer[p] = i;
        lay.logical_of_outer[q] = 0;
        lay.logical_of_outer[p] = 1;
    }

    const uint32_t base = 6 * (uint32_t)lay.blocks.size();
    for (uint32_t ci = 0; ci < lay.outer.checks.size(); ci++) {
        lay.outer_anc.push_back(base + ci);
    }
    lay.num_physical = base + (uint32_t)lay.outer.checks.size();

    // Adjacent checks and per-type CNOT steps of paired qubits must be
    // disjoint, or a block would interact with two outer ancillas at once.
    std::vector<std::set<uint32_t>> adjacent(nq);
    std::vector<std::set<uint32_t>> steps_x(nq), steps_z(nq);
    for (uint32_t ci = 0; ci < lay.outer.checks.size(); ci++) {
        const SurfaceCheck &chk = lay.outer.checks[ci];
        for (int s = 0; s < 4; s++) {
            if (chk.step_data[s] < 0) {
                continue;
            }
            uint32_t q = (uint32_t)chk.step_data[s];
            adjacent[q].insert(ci);
            (chk.is_x ? steps_x : steps_z)[q].insert((uint32_t)s);
        }
    }
    auto overlaps = [](const std::set<uint32_t> &a, const std::set<uint32_t> &b) {
        for (uint32_t v : a) {
            if (b.count(v)) {
                return true;
            }
        }
        return false;
    };
    for (const IcebergBlock &blk : lay.blocks) {
        auto [q0, q1] = blk.outer_qubit;
        std::string pair = "pair (" + std::to_string(q0) + ", " + std::to_string(q1) + ")";
        if (overlaps(adjacent[q0], adjacent[q1])) {
            throw std::runtime_error("paired qubits share an outer check: " + pair);
        }
        if (overlaps(steps_x[q0], steps_x[q1]) || overlaps(steps_z[q0], steps_z[q1])) {
            throw std::runtime_error("paired qubits collide at a CNOT step: " + pair);
        }
    }
    return lay;
}

DetectorTracker::DetectorTracker(size_t num_checks, std::vector<uint8_t> deterministic_first)
    : cur_(num_checks, -1), prev_(num_checks, -1),
      deterministic_first_(std::move(deterministic_first)) {}

std::vector<uint32_t> DetectorTracker::record(size_t check, uint32_t meas) {
    if (cur_[check] < 0) {
        cur_[check] = meas;
        if (deterministic_first_[check]) {
            return {meas};
        }
        return {};
    }
    prev_[check] = cur_[check];
    cur_[check] = meas;
    return {(uint32_t)prev_[check], meas};
}

std::vector<uint32_t> trigger_set(const InnerDiff &diff, const IcebergLayout &layout,
                                  bool full_round) {
    std::vector<uint32_t> out;
    for (uint32_t ci = 0; ci < layout.outer.checks.size(); ci++) {
        if (full_round) {
            out.push_back(ci);
            continue;
        }
        for (uint32_t q : layout.outer.checks[ci].support) {
            uint32_t b = layout.block_of_outer[q];
            if (diff.x[b] || diff.z[b]) {
                out.push_back(ci);
                break;
            }
        }
    }
    return out;
}

std::vector<PauliCorrection> inner_correct(const std::vector<uint8_t> &x_outcomes,
                                           const std::vector<uint8_t> &z_outcomes,
                                           const IcebergLayout &layout) {
    std::vector<PauliCorrection> out;
    for (uint32_t i = 0; i < layout.blocks.size(); i++) {
        if (z_outcomes[i]) {
            out.push_back({layout.shared_qubit(i), Pauli::X});
        }
        if (x_outcomes[i]) {
            out.push_back({layout.shared_qubit(i), Pauli::Z});
        }
    }
    return out;
}

double per_round_rate(double total_rate, uint32_t rounds) {
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * total_rate, 1.0 / (double)rounds));
}

namespace {

// Inner CNOT schedule: at step s the X ancilla targets data[s] while
// data[kInnerZOrder[s]] targets the Z ancilla, keeping the two fan-outs
// disjoint within every step.
constexpr uint32_t kInnerZOrder[4] = {1, 0, 3, 2};

ShotRecord run_workbench(uint32_t d, uint32_t rounds, uint32_t refresh, double p,
                         std::mt19937_64 *rng, bool adaptive) {
    IcebergLayout lay = build_iceberg_layout(d);
    const uint32_t B = (uint32_t)lay.blocks.size();
    const uint32_t C = (uint32_t)lay.outer.checks.size();
    const uint32_t n = lay.num_physical;
    const uint32_t max_meas = rounds * (2 * B + C) + 4 * B;
    NoiseModel nm{p};
    CircuitBuilder b;
    FrameSim sim(n, max_meas);
    if (adaptive) {
        sim.set_rng(rng, true, false);
    }
    size_t cursor = 0;
    auto advance = [&] {
        if (!adaptive) {
            return;
        }
        const auto &layers = b.built_layers();
        for (; cursor < layers.size(); cursor++) {
            sim.apply_layer(layers[cursor]);
        }
    };

    DetectorTracker inner_z(B, std::vector<uint8_t>(B, 1));
    DetectorTracker inner_x(B, std::vector<uint8_t>(B, 0));
    std::vector<uint8_t> outer_det_first(C);
    for (uint32_t ci = 0; ci < C; ci++) {
        outer_det_first[ci] = lay.outer.checks[ci].is_x ? 0 : 1;
    }
    DetectorTracker outer(C, outer_det_first);

    for (uint32_t q = 0; q < n; q++) {
        b.r(q);
    }
    b.apply_noise(nm, n);
    b.tick();

    ShotRecord rec;
    std::vector<uint32_t> mx(B), mz(B);
    std::vector<uint8_t> prev_ox(B, 0), prev_oz(B, 0);
    std::vector<uint8_t> ox(B), oz(B);
    InnerDiff diff{std::vector<uint8_t>(B, 0), std::vector<uint8_t>(B, 0)};

    for (uint32_t r = 0; r < rounds; r++) {
        for (const IcebergBlock &blk : lay.blocks) {
            b.r(blk.anc_x);
            b.r(blk.anc_z);
        }
        b.apply_noise(nm, n);
        b.tick();
        for (const IcebergBlock &blk : lay.blocks) {
            b.h(blk.anc_x);
        }
        b.apply_noise(nm, n);
        b.tick();
        for (int s = 0; s < 4; s++) {
            for (const IcebergBlock &blk : lay.blocks) {
                b.cx(blk.anc_x, blk.data[s]);
                b.cx(blk.data[kInnerZOrder[s]], blk.anc_z);
            }
            b.apply_noise(nm, n);
            b.tick();
        }
        for (const IcebergBlock &blk : lay.blocks) {
            b.h(blk.anc_x);
        }
        b.apply_noise(nm, n);
        b.tick();
        for (uint32_t i = 0; i < B; i++) {
            mx[i] = b.mr(lay.blocks[i].anc_x);
            mz[i] = b.mr(lay.blocks[i].anc_z);
        }
        b.apply_noise(nm, n);
        for (uint32_t i = 0; i < B; i++) {
            auto det = inner_z.record(i, mz[i]);
            if (!det.empty()) {
                b.detector(std::move(det));
            }
            inner_x.record(i, mx[i]);  // tracked, never emitted (Z basis)
        }
        b.tick();
        advance();

        if (adaptive) {
            for (uint32_t i = 0; i < B; i++) {
                ox[i] = sim.measurement_flip(mx[i]);
                oz[i] = sim.measurement_flip(mz[i]);
                diff.x[i] = (uint8_t)(ox[i] ^ prev_ox[i]);
                diff.z[i] = (uint8_t)(oz[i] ^ prev_oz[i]);
            }
            prev_ox = ox;
            prev_oz = oz;
            for (const PauliCorrection &c : inner_correct(ox, oz, lay)) {
                sim.apply_pauli(c.qubit, c.pauli);
            }
        }

        bool full = r == 0 || r == rounds - 1 || r % refresh == 0;
        std::vector<uint32_t> trig = trigger_set(diff, lay, full || !adaptive);
        rec.triggered_per_round.push_back((uint32_t)trig.size());
        if (trig.empty()) {
            continue;
        }

        for (uint32_t ci : trig) {
            b.r(lay.outer_anc[ci]);
        }
        b.apply_noise(nm, n);
        b.tick();
        for (uint32_t ci : trig) {
            if (lay.outer.checks[ci].is_x) {
                b.h(lay.outer_anc[ci]);
            }
        }
        b.apply_noise(nm, n);
        b.tick();
        // Transversal logical CNOTs, two sub-steps per outer step. The X
        // operator is touched leaf first and the Z operator shared qubit
        // first, so the two checks of a block never collide.
        for (int s = 0; s < 4; s++) {
            for (int sub = 0; sub < 2; sub++) {
                for (uint32_t ci : trig) {
                    const SurfaceCheck &chk = lay.outer.checks[ci];
                    if (chk.step_data[s] < 0) {
                        continue;
                    }
                    uint32_t q = (uint32_t)chk.step_data[s];
                    uint32_t bl = lay.block_of_outer[q];
                    uint8_t slot = lay.logical_of_outer[q];
                    if (chk.is_x) {
                        auto op = lay.logical_x(bl, slot);
                        b.cx(lay.outer_anc[ci], sub == 0 ? op[1] : op[0]);
                    } else {
                        auto op = lay.logical_z(bl, slot);
                        b.cx(sub == 0 ? op[0] : op[1], lay.outer_anc[ci]);
                    }
                }
                b.apply_noise(nm, n);
                b.tick();
            }
        }
        for (uint32_t ci : trig) {
            if (lay.outer.checks[ci].is_x) {
                b.h(lay.outer_anc[ci]);
            }
        }
        b.apply_noise(nm, n);
        b.tick();
        std::vector<uint32_t> mo(trig.size());
        for (size_t t = 0; t < trig.size(); t++) {
            mo[t] = b.mr(lay.outer_anc[trig[t]]);
        }
        b.apply_noise(nm, n);
        for (size_t t = 0; t < trig.size(); t++) {
            uint32_t ci = trig[t];
            auto det = outer.record(ci, mo[t]);
            if (!lay.outer.checks[ci].is_x && !det.empty()) {
                b.detector(std::move(det));
            }
        }
        b.tick();
        advance();
    }

    std::vector<std::array<uint32_t, 4>> dm(B);
    for (uint32_t i = 0; i < B; i++) {
        for (int j = 0; j < 4; j++) {
            dm[i][j] = b.m(lay.blocks[i].data[j]);
        }
    }
    b.apply_noise(nm, n);
    for (uint32_t i = 0; i < B; i++) {
        b.detector({(uint32_t)inner_z.current(i), dm[i][0], dm[i][1], dm[i][2], dm[i][3]});
    }
    auto data_meas = [&](uint32_t phys) { return dm[phys / 6][phys % 6]; };
    for (uint32_t ci = 0; ci < C; ci++) {
        const SurfaceCheck &chk = lay.outer.checks[ci];
        if (chk.is_x) {
            continue;
        }
        std::vector<uint32_t> set{(uint32_t)outer.current(ci)};
        for (uint32_t q : chk.support) {
            for (uint32_t phys : lay.logical_z(lay.block_of_outer[q], lay.logical_of_outer[q])) {
                set.push_back(data_meas(phys));
            }
        }
        b.detector(std::move(set));
    }
    std::vector<uint32_t> obs;
    for (uint32_t c = 0; c < d; c++) {
        for (uint32_t phys : lay.logical_z(lay.block_of_outer[c], lay.logical_of_outer[c])) {
            obs.push_back(data_meas(phys));
        }
    }
    b.observable_include(0, obs);
    rec.circuit = b.take(n);
    advance();
    if (adaptive) {
        rec.detector_values = sim.detector_values(rec.circuit.detectors);
    }
    return rec;
}

}  // namespace

ShotRecord run_adaptive_shot(const AdaptiveConfig &cfg, uint64_t shot_index) {
    uint32_t rounds = cfg.rounds ? cfg.rounds : cfg.d;
    uint32_t refresh = cfg.refresh ? cfg.refresh : cfg.d / 2;
    std::seed_seq seq{(uint32_t)cfg.seed, (uint32_t)(cfg.seed >> 32), (uint32_t)shot_index,
                      (uint32_t)(shot_index >> 32)};
    std::mt19937_64 rng(seq);
    ShotRecord rec = run_workbench(cfg.d, rounds, refresh, cfg.p, &rng, true);
    rec.dem = compile_circuit(rec.circuit, CorrelationLevel::L0, 1, &rec.stats);
    return rec;
}

Circuit build_static_concatenated(uint32_t d, uint32_t rounds, double p) {
    if (rounds == 0) {
        rounds = d;
    }
    return run_workbench(d, rounds, 1, p, nullptr, false).circuit;
}

}  // namespace demc
