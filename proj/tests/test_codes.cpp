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

#include <set>

#include "demc/codes.hpp"
#include "demc/compile.hpp"
#include "demc/frame.hpp"
#include "doctest.h"

using namespace demc;

TEST_CASE("repetition circuit structure") {
    Circuit c = gen_repetition(3, 2, NoiseModel{0.001});
    CHECK(c.num_qubits == 5);
    CHECK(c.num_measurements == 2 * 2 + 3);
    // Per round: d-1 detectors; closing round adds d-1 more.
    CHECK(c.detectors.size() == 3 * 2);
    REQUIRE(c.observables.size() == 1);
    CHECK(c.observables[0].measurements.size() == 1);
    CHECK(validate_layers(c) == std::nullopt);
}

TEST_CASE("surface layout has d*d-1 checks with alternating types") {
    for (uint32_t d : {2u, 3u, 4u, 5u}) {
        SurfaceLayout layout = surface_layout(d);
        CHECK(layout.checks.size() == d * d - 1);
        CHECK(layout.num_qubits == 2 * d * d - 1);
        size_t x = 0;
        for (const SurfaceCheck &chk : layout.checks) {
            x += chk.is_x;
            CHECK(chk.support.size() >= 2);
            CHECK(chk.support.size() <= 4);
        }
        // X and Z checks split the total as evenly as possible.
        CHECK(x >= (d * d - 1) / 2);
        CHECK(x <= (d * d + 1) / 2);
    }
}

TEST_CASE("surface CNOT schedule is conflict free") {
    for (uint32_t d : {3u, 5u}) {
        SurfaceLayout layout = surface_layout(d);
        for (int step = 0; step < 4; step++) {
            std::set<uint32_t> used;
            for (const SurfaceCheck &chk : layout.checks) {
                if (chk.step_data[step] < 0) {
                    continue;
                }
                CHECK(used.insert((uint32_t)chk.step_data[step]).second);
                CHECK(used.insert(chk.ancilla).second);
            }
        }
        // Every supported qubit appears at exactly one step.
        for (const SurfaceCheck &chk : layout.checks) {
            std::set<int32_t> scheduled;
            for (int step = 0; step < 4; step++) {
                if (chk.step_data[step] >= 0) {
                    scheduled.insert(chk.step_data[step]);
                }
            }
            CHECK(scheduled.size() == chk.support.size());
        }
    }
}

TEST_CASE("surface circuit validates and has the expected detector count") {
    Circuit c = gen_surface(3, 2, NoiseModel{0.001});
    CHECK(validate_layers(c) == std::nullopt);
    // Round 0: Z checks only (first X outcomes are gauge); round 1: all 8;
    // closing: 4 Z checks.
    CHECK(c.detectors.size() == 4 + 8 + 4);
    Circuit zc = gen_surface(3, 2, NoiseModel{0.001}, true);
    // Z-only: round 0 emits 4, round 1 emits 4, closing 4.
    CHECK(zc.detectors.size() == 12);
}

TEST_CASE("noise channels land on their gates") {
    Circuit c = gen_surface(3, 1, NoiseModel{0.01});
    for (const Layer &layer : c.layers) {
        std::set<uint32_t> busy;
        for (const GateOp &g : layer.gates) {
            busy.insert(g.q0);
            if (g.kind == GateKind::CX) {
                busy.insert(g.q1);
            }
            if (g.is_measurement()) {
                CHECK(g.flip_prob == 0.01);
            }
        }
        size_t dep2 = 0, reset_fail = 0, gate1 = 0, idle = 0;
        for (const NoiseOp &nop : layer.noise) {
            switch (nop.kind) {
                case NoiseKind::DEPOLARIZE2:
                    dep2++;
                    CHECK(nop.prob == 0.001);
                    break;
                case NoiseKind::X_ERROR:
                    reset_fail++;
                    CHECK(nop.prob == 0.01);
                    break;
                case NoiseKind::DEPOLARIZE1:
                    if (busy.count(nop.q0)) {
                        gate1++;
                        CHECK(nop.prob == 0.01);
                    } else {
                        idle++;
                        CHECK(nop.prob == 0.001);
                    }
                    break;
                default:
                    FAIL("unexpected channel");
            }
        }
        size_t cx = 0, hr = 0, touched = 0;
        for (const GateOp &g : layer.gates) {
            cx += g.kind == GateKind::CX;
            hr += g.kind == GateKind::H || g.kind == GateKind::R || g.kind == GateKind::MR;
        }
        touched = busy.size();
        CHECK(dep2 == cx);
        CHECK(reset_fail + gate1 == hr);  // H depolarizes; R and MR get X_ERROR
        CHECK(idle == c.num_qubits - touched);
    }
}

TEST_CASE("invert_gate_rates swaps the two depolarizing strengths") {
    NoiseModel nm{0.01, true};
    CHECK(nm.single_qubit_depolarize() == 0.001);
    CHECK(nm.two_qubit_depolarize() == 0.01);
    CHECK(nm.idle_depolarize() == 0.001);
}

TEST_CASE("zero noise produces an empty model") {
    Circuit c = gen_surface(3, 2, NoiseModel{0});
    for (const Layer &layer : c.layers) {
        CHECK(layer.noise.empty());
    }
    Dem d = compile_circuit(c, CorrelationLevel::L2);
    CHECK(d.hyperedges.empty());
}

TEST_CASE("generator argument validation") {
    CHECK_THROWS_AS(gen_repetition(1, 2, NoiseModel{0}), std::invalid_argument);
    CHECK_THROWS_AS(gen_repetition(3, 0, NoiseModel{0}), std::invalid_argument);
    CHECK_THROWS_AS(surface_layout(1), std::invalid_argument);
    CHECK_THROWS_AS(gen_surface(3, 0, NoiseModel{0}), std::invalid_argument);
}

TEST_CASE("repetition pipeline matches the oracle across levels") {
    Circuit c = gen_repetition(3, 2, NoiseModel{0.001});
    for (auto level : {CorrelationLevel::L0, CorrelationLevel::L1, CorrelationLevel::L2}) {
        Dem pipeline = compile_circuit(c, level);
        Dem oracle = build_dem_oracle(c, level);
        std::string diff;
        CHECK_MESSAGE(dem_close(pipeline, oracle, 1e-12, &diff), diff);
    }
}
