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

#include <fstream>
#include <sstream>

#include "demc/codes.hpp"
#include "demc/compile.hpp"
#include "demc/frame.hpp"
#include "doctest.h"

using namespace demc;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixture(const std::string &name, const std::string &file) {
    return std::string(DEMC_FIXTURES_DIR) + "/" + name + "/" + file;
}

}  // namespace

TEST_CASE("frame conjugation rules") {
    Circuit c = parse_circuit("H 0\nCX 1 2\n");
    FrameSim sim(3, 0);
    sim.apply_pauli(0, Pauli::X);
    sim.apply_pauli(1, Pauli::X);
    sim.apply_pauli(2, Pauli::Z);
    sim.apply_gates(c.layers[0]);
    // H: X -> Z. CX: X on control fans to target, Z on target backs up.
    CHECK(!sim.x_flip(0));
    CHECK(sim.z_flip(0));
    CHECK(sim.x_flip(1));
    CHECK(sim.z_flip(1));
    CHECK(sim.x_flip(2));
    CHECK(sim.z_flip(2));
}

TEST_CASE("Y toggles both components") {
    FrameSim sim(1, 0);
    sim.apply_pauli(0, Pauli::Y);
    CHECK(sim.x_flip(0));
    CHECK(sim.z_flip(0));
    sim.apply_pauli(0, Pauli::Y);
    CHECK(!sim.x_flip(0));
    CHECK(!sim.z_flip(0));
}

TEST_CASE("MR consumes the X flip, M keeps it") {
    Circuit c = parse_circuit("M 0\nMR 1\n");
    FrameSim sim(2, 2);
    sim.apply_pauli(0, Pauli::X);
    sim.apply_pauli(1, Pauli::X);
    sim.apply_gates(c.layers[0]);
    CHECK(sim.measurement_flip(0));
    CHECK(sim.measurement_flip(1));
    CHECK(sim.x_flip(0));
    CHECK(!sim.x_flip(1));
}

TEST_CASE("propagate_error flags the right detectors on the hand-written circuit") {
    Circuit c = parse_circuit(read_file(fixture("rep_handwritten", "circuit.txt")));
    // X on data qubit 0 at boundary 0 flips the first-round and the
    // difference detector of the left check.
    SourceSpec e{0.01, 0, {{0, Pauli::X}}};
    CHECK(propagate_error(c, e) == std::vector<uint64_t>{0b0001});
    // Z errors are invisible to this Z-basis experiment.
    SourceSpec z{0.01, 0, {{0, Pauli::Z}}};
    CHECK(propagate_error(c, z) == std::vector<uint64_t>{0});
    // A pre-MR Z error on the ancilla flips nothing either.
    SourceSpec az{0.01, 2, {{1, Pauli::Z}}};
    CHECK(propagate_error(c, az) == std::vector<uint64_t>{0});
    // Flipping measurement 0 flips both detectors that use it.
    SourceSpec m{0.01, -1, {}, 0};
    CHECK(propagate_error(c, m) == std::vector<uint64_t>{0b0101});
}

TEST_CASE("oracle matches the frozen goldens") {
    for (const char *name : {"rep_handwritten", "rep_d3_r2", "surface_d3_r2_l0",
                             "surface_d3_r2_l2"}) {
        CAPTURE(name);
        Circuit c = parse_circuit(read_file(fixture(name, "circuit.txt")));
        int level = std::stoi(read_file(fixture(name, "level")));
        Dem oracle = build_dem_oracle(c, (CorrelationLevel)level);
        Dem golden = parse_dem(read_file(fixture(name, "expected.dem")), oracle.num_detectors,
                               oracle.num_observables);
        CHECK(serialize_dem(oracle) == serialize_dem(golden));
    }
}

TEST_CASE("pipeline equals oracle on the goldens") {
    for (const char *name : {"rep_handwritten", "rep_d3_r2", "surface_d3_r2_l0",
                             "surface_d3_r2_l2"}) {
        CAPTURE(name);
        Circuit c = parse_circuit(read_file(fixture(name, "circuit.txt")));
        int level = std::stoi(read_file(fixture(name, "level")));
        Dem pipeline = compile_circuit(c, (CorrelationLevel)level);
        Dem oracle = build_dem_oracle(c, (CorrelationLevel)level);
        std::string diff;
        CHECK_MESSAGE(dem_close(pipeline, oracle, 1e-12, &diff), diff);
    }
}

TEST_CASE("randomized collapse exposes non-deterministic detectors") {
    // An H before measurement makes the outcome random; the detector on it
    // must fire about half the time.
    Circuit c = parse_circuit("R 0\nTICK\nH 0\nTICK\nM 0\nDETECTOR rec[-1]\n");
    std::mt19937_64 rng(3);
    int fired = 0;
    for (int shot = 0; shot < 400; shot++) {
        fired += sample_detector_values(c, rng)[0];
    }
    CHECK(fired > 100);
    CHECK(fired < 300);
    // Deterministic detectors stay silent under the same randomization.
    Circuit ok = parse_circuit("R 0\nTICK\nM 0\nDETECTOR rec[-1]\n");
    for (int shot = 0; shot < 100; shot++) {
        CHECK(sample_detector_values(ok, rng)[0] == 0);
    }
}

TEST_CASE("generated circuits have deterministic detectors at p = 0") {
    for (uint32_t d : {2u, 3u}) {
        Circuit c = gen_surface(d, 2, NoiseModel{0});
        std::mt19937_64 rng(17);
        for (int shot = 0; shot < 50; shot++) {
            auto det = sample_detector_values(c, rng);
            for (uint8_t v : det) {
                REQUIRE(v == 0);
            }
        }
    }
}
