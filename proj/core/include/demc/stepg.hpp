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

#ifndef DEMC_STEPG_HPP
#define DEMC_STEPG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "demc/circuit.hpp"

namespace demc {

/// Which Pauli components of a noise channel are modeled. Levels are
/// cumulative: every error kept at L0 is kept at L1, and so on.
enum class CorrelationLevel : uint8_t { L0 = 0, L1 = 1, L2 = 2 };

/// Nodes per qubit per boundary: 2, 4 or 7.
uint32_t alpha(CorrelationLevel level);

enum class Pauli : uint8_t { X, Y, Z };

struct PauliTerm {
    uint32_t qubit;
    Pauli pauli;
    bool operator==(const PauliTerm &) const = default;
};

/// One independent physical error mechanism, described in circuit terms:
/// either 1-2 Pauli components placed at a boundary, or a single
/// measurement-record flip. This is the currency shared by the lowering and
/// the forward-propagation oracle.
struct SourceSpec {
    double prob;
    int32_t boundary = -1;        // boundary index; -1 for measurement flips
    std::vector<PauliTerm> paulis;  // empty for measurement flips
    int32_t measurement = -1;     // >= 0: flips this measurement record
};

constexpr uint32_t kNoSuccessor = 0xFFFFFFFFu;

/// Graph-level error source: 1-2 node ids at a common boundary (or one leaf).
struct ErrorSource {
    uint32_t node0;
    uint32_t node1 = kNoSuccessor;  // kNoSuccessor when single-component
    double prob;
};

/// The space-time error propagation graph. Boundary i holds the error state
/// after layer i's gates; node (i, slot) has id i*k + slot. Leaves occupy a
/// separate region starting at num_layers*k, one per measurement record.
struct Stepg {
    CorrelationLevel level;
    uint32_t num_qubits;
    uint32_t num_layers;        // boundary count, one per gate layer
    uint32_t k;                 // alpha(level) * num_qubits
    uint32_t num_measurements;
    uint32_t num_detectors;
    uint32_t num_observables;
    // Packed successors: low 32 bits = first, high 32 bits = second.
    std::vector<uint64_t> successors;  // num_layers * k entries
    std::vector<ErrorSource> sources;

    uint32_t node(uint32_t boundary, uint32_t slot) const {
        return boundary * k + slot;
    }
    uint32_t leaf(uint32_t measurement) const {
        return num_layers * k + measurement;
    }
    uint32_t num_rows() const {
        return num_layers * k + num_measurements;
    }
    static uint64_t pack(uint32_t a, uint32_t b) {
        return (uint64_t)b << 32 | a;
    }
    static void unpack(uint64_t w, uint32_t &a, uint32_t &b) {
        a = (uint32_t)w;
        b = (uint32_t)(w >> 32);
    }
};

/// Per-boundary slot map. Base X/Z slots interleave in [0, 2n); Y slots sit
/// at 2n + q; per-CX correlated slots fill [3n, 4n) and [4n, 7n).
struct SlotLayout {
    CorrelationLevel level;
    uint32_t n;
    uint32_t k;

    uint32_t x_slot(uint32_t q) const { return 2 * q; }
    uint32_t z_slot(uint32_t q) const { return 2 * q + 1; }
    uint32_t y_slot(uint32_t q) const { return 2 * n + q; }
    // j indexes CX gates within the boundary's layer.
    uint32_t xz_slot(uint32_t j) const { return 3 * n + 2 * j; }
    uint32_t zx_slot(uint32_t j) const { return 3 * n + 2 * j + 1; }
    uint32_t xy_slot(uint32_t j) const { return 4 * n + 5 * j; }
    uint32_t yx_slot(uint32_t j) const { return 4 * n + 5 * j + 1; }
    uint32_t yy_slot(uint32_t j) const { return 4 * n + 5 * j + 2; }
    uint32_t yz_slot(uint32_t j) const { return 4 * n + 5 * j + 3; }
    uint32_t zy_slot(uint32_t j) const { return 4 * n + 5 * j + 4; }
};

SlotLayout slot_layout(CorrelationLevel level, uint32_t n);

/// Expands one noise op (attached after `boundary`'s gates) into the error
/// sources retained at `level`. Measurement flips are produced separately by
/// enumerate_sources from M/MR flip probabilities.
std::vector<SourceSpec> decompose_noise(const NoiseOp &op, CorrelationLevel level, int32_t boundary);

/// Every error source of the circuit at the given level, in deterministic
/// order: layer by layer, noise ops then measurement flips.
std::vector<SourceSpec> enumerate_sources(const Circuit &c, CorrelationLevel level);

/// Lowers a validated circuit to its propagation graph.
Stepg lower(const Circuit &c, CorrelationLevel level);

/// Text edge list `node_id -> succ0 succ1` for fixture diffing.
std::string dump_stepg(const Stepg &g);

}  // namespace demc

#endif
