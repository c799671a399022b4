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

#ifndef DEMC_CIRCUIT_HPP
#define DEMC_CIRCUIT_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace demc {

/// Thrown on malformed circuit text. Carries the 1-based source line.
struct ParseError : std::runtime_error {
    size_t line;
    ParseError(size_t line, const std::string &msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
};

enum class GateKind : uint8_t { H, CX, R, M, MR };

/// A single gate. CX stores {control, target}; everything else one qubit.
/// M/MR carry the absolute measurement record index assigned at parse time
/// and an optional outcome-flip probability.
struct GateOp {
    GateKind kind;
    uint32_t q0;
    uint32_t q1 = 0;           // CX target
    int32_t meas_index = -1;   // M/MR only
    double flip_prob = 0.0;    // M/MR only

    bool is_measurement() const {
        return kind == GateKind::M || kind == GateKind::MR;
    }
    bool operator==(const GateOp &) const = default;
};

enum class NoiseKind : uint8_t { X_ERROR, Z_ERROR, DEPOLARIZE1, DEPOLARIZE2 };

struct NoiseOp {
    NoiseKind kind;
    double prob;
    uint32_t q0;
    uint32_t q1 = 0;  // DEPOLARIZE2 only
    bool operator==(const NoiseOp &) const = default;
};

/// Detector/observable declaration, kept with its layer so serialization can
/// re-derive rec[-k] offsets.
struct Annotation {
    bool is_observable;
    uint32_t id;
    std::vector<uint32_t> measurements;  // absolute, sorted
    bool operator==(const Annotation &) const = default;
};

struct Layer {
    std::vector<GateOp> gates;
    std::vector<NoiseOp> noise;
    std::vector<Annotation> annotations;
    bool operator==(const Layer &) const = default;
};

struct Detector {
    uint32_t id;
    std::vector<uint32_t> measurements;  // absolute, sorted
    bool operator==(const Detector &) const = default;
};

struct Observable {
    uint32_t id;
    std::vector<uint32_t> measurements;  // absolute, sorted
    bool operator==(const Observable &) const = default;
};

struct Circuit {
    uint32_t num_qubits = 0;
    std::vector<Layer> layers;
    uint32_t num_measurements = 0;
    std::vector<Detector> detectors;
    std::vector<Observable> observables;

    bool operator==(const Circuit &) const = default;
};

struct Violation {
    size_t layer;  // layer index, or SIZE_MAX for circuit-wide problems
    std::string message;
};

/// Parses the line-oriented circuit grammar. TICK delimits layers, rec[-k]
/// references resolve against the measurement count at the point of use.
/// Throws ParseError on malformed input; also runs validate_layers and
/// throws std::invalid_argument on the first violation.
Circuit parse_circuit(const std::string &text);

/// Checks every structural invariant (qubit bounds, intra-layer conflicts,
/// probability ranges, DEPOLARIZE2 pairing). Returns the first violation,
/// or nullopt when the circuit is well formed.
std::optional<Violation> validate_layers(const Circuit &c);

/// Emits circuit text that parses back to an equal Circuit. Annotations are
/// printed at the end of their layer.
std::string serialize_circuit(const Circuit &c);

}  // namespace demc

#endif
