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

#include <random>

#include "demc/circuit.hpp"
#include "demc/codes.hpp"
#include "doctest.h"

using namespace demc;

TEST_CASE("layers split on TICK and measurement indices are absolute") {
    Circuit c = parse_circuit(
        "R 0 1\n"
        "TICK\n"
        "CX 0 1\n"
        "TICK\n"
        "M 1\n"
        "MR(0.25) 0\n"
        "DETECTOR rec[-2]\n");
    CHECK(c.num_qubits == 2);
    CHECK(c.layers.size() == 3);
    CHECK(c.num_measurements == 2);
    CHECK(c.layers[2].gates[0].meas_index == 0);
    CHECK(c.layers[2].gates[1].meas_index == 1);
    CHECK(c.layers[2].gates[1].flip_prob == 0.25);
    REQUIRE(c.detectors.size() == 1);
    CHECK(c.detectors[0].measurements == std::vector<uint32_t>{0});
}

TEST_CASE("rec references resolve against the running record count") {
    Circuit c = parse_circuit(
        "M 0\n"
        "DETECTOR rec[-1]\n"
        "TICK\n"
        "M 0\n"
        "DETECTOR rec[-1]\n");
    CHECK(c.detectors[0].measurements == std::vector<uint32_t>{0});
    CHECK(c.detectors[1].measurements == std::vector<uint32_t>{1});
}

TEST_CASE("duplicate record references toggle out") {
    Circuit c = parse_circuit("M 0\nTICK\nM 0\nOBSERVABLE_INCLUDE(0) rec[-1] rec[-2] rec[-1]\n");
    CHECK(c.observables[0].measurements == std::vector<uint32_t>{0});
    CHECK_THROWS_AS(parse_circuit("M 0\nDETECTOR rec[-1] rec[-1]\n"), ParseError);
}

TEST_CASE("parse errors carry the source line") {
    try {
        parse_circuit("R 0\nBAD 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_circuit("M 0\nDETECTOR rec[-2]\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("OBSERVABLE_INCLUDE(1) rec[-1]\n"), ParseError);
}

TEST_CASE("validation rejects intra-layer conflicts and bad probabilities") {
    CHECK_THROWS_AS(parse_circuit("CX 0 1\nH 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_circuit("X_ERROR(1.5) 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_circuit("M(-0.1) 0\n"), std::invalid_argument);
    // DEPOLARIZE2 must sit on the exact CX pair or a fully idle pair.
    CHECK_THROWS_AS(parse_circuit("CX 0 1\nDEPOLARIZE2(0.1) 1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_circuit("CX 0 1\nH 2\nDEPOLARIZE2(0.1) 2 0\n"), std::invalid_argument);
    CHECK_NOTHROW(parse_circuit("CX 0 1\nDEPOLARIZE2(0.1) 0 1\n"));
    CHECK_NOTHROW(parse_circuit("CX 0 1\nR 3\nDEPOLARIZE2(0.1) 2 4\n"));
}

TEST_CASE("serialize and reparse is the identity on generated circuits") {
    for (uint32_t d : {2u, 3u, 4u}) {
        Circuit c = gen_surface(d, 2, NoiseModel{0.001});
        Circuit back = parse_circuit(serialize_circuit(c));
        CHECK(back == c);
    }
    Circuit c = gen_repetition(3, 2, NoiseModel{0.01});
    CHECK(parse_circuit(serialize_circuit(c)) == c);
    // And on a hand-written circuit exercising every instruction.
    Circuit h = parse_circuit(
        "R 0 1 2\n"
        "Z_ERROR(0.125) 2\n"
        "TICK\n"
        "H 0\n"
        "CX 1 2\n"
        "DEPOLARIZE2(0.0625) 1 2\n"
        "TICK\n"
        "M(0.5) 1\n"
        "MR 2\n"
        "DEPOLARIZE1(0.03125) 0\n"
        "DETECTOR rec[-2] rec[-1]\n"
        "OBSERVABLE_INCLUDE(0) rec[-1]\n");
    CHECK(parse_circuit(serialize_circuit(h)) == h);
}

TEST_CASE("empty circuit parses to nothing") {
    Circuit c = parse_circuit("# only a comment\n\n");
    CHECK(c.layers.empty());
    CHECK(c.num_qubits == 0);
}
