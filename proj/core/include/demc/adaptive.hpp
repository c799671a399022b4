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

#ifndef DEMC_ADAPTIVE_HPP
#define DEMC_ADAPTIVE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "demc/codes.hpp"
#include "demc/compile.hpp"
#include "demc/dem.hpp"

namespace demc {

/// One [[4,2,2]] block hosting two outer data qubits. Physical layout per
/// block i: data 6i..6i+3, X ancilla 6i+4, Z ancilla 6i+5. data[0] is the
/// qubit shared by both logical X and both logical Z operators.
struct IcebergBlock {
    std::array<uint32_t, 4> data;
    uint32_t anc_x;
    uint32_t anc_z;
    std::array<uint32_t, 2> outer_qubit;  // hosted outer data qubits (r*d + c)
};

/// Concatenation of an even-distance rotated surface code over Iceberg
/// blocks. Outer data qubit q = r*d + c pairs with (d-1-r, (c+2) mod d);
/// each pair shares a block, q's logical slot given by logical_of_outer.
struct IcebergLayout {
    uint32_t d;
    SurfaceLayout outer;
    std::vector<IcebergBlock> blocks;
    std::vector<uint32_t> block_of_outer;   // outer data qubit -> block
    std::vector<uint8_t> logical_of_outer;  // outer data qubit -> 0 or 1
    std::vector<uint32_t> outer_anc;        // physical ancilla per outer check
    uint32_t num_physical;

    uint32_t shared_qubit(uint32_t block) const { return blocks[block].data[0]; }
    /// Physical support of the hosted logical operators. The two logicals of
    /// a block overlap only on data[0]:
    ///   logical 0: X on {data0,data1}, Z on {data0,data2}
    ///   logical 1: X on {data0,data2}, Z on {data0,data1}
    std::array<uint32_t, 2> logical_x(uint32_t block, uint8_t slot) const {
        const IcebergBlock &b = blocks[block];
        return {b.data[0], slot == 0 ? b.data[1] : b.data[2]};
    }
    std::array<uint32_t, 2> logical_z(uint32_t block, uint8_t slot) const {
        const IcebergBlock &b = blocks[block];
        return {b.data[0], slot == 0 ? b.data[2] : b.data[1]};
    }
};

/// Pairing rule for outer data qubits. Throws for odd d or out-of-range
/// coordinates.
std::pair<uint32_t, uint32_t> iceberg_partner(uint32_t r, uint32_t c, uint32_t d);

/// Builds and validates the concatenated layout. Validation rejects layouts
/// where (a) the pairing is not a perfect matching, (b) paired qubits share
/// an adjacent outer check, or (c) paired qubits are touched at a common
/// CNOT step by same-type outer checks.
IcebergLayout build_iceberg_layout(uint32_t d);

/// Latest and previous measurement per check, advanced only when a check
/// executes. A detector is instantiated for an execution iff the two indices
/// differ; checks marked deterministic_first additionally compare their first
/// execution against the fixed initial state.
class DetectorTracker {
   public:
    DetectorTracker(size_t num_checks, std::vector<uint8_t> deterministic_first);

    /// Records an execution of `check` producing measurement `meas`. Returns
    /// the measurement set of the detector to instantiate; empty = none.
    std::vector<uint32_t> record(size_t check, uint32_t meas);

    bool executed(size_t check) const { return cur_[check] >= 0; }
    int64_t current(size_t check) const { return cur_[check]; }

   private:
    std::vector<int64_t> cur_, prev_;
    std::vector<uint8_t> deterministic_first_;
};

/// Inner-round difference syndrome, one bit per block per check type.
struct InnerDiff {
    std::vector<uint8_t> x;  // X-type inner check changed since last round
    std::vector<uint8_t> z;
};

/// Outer checks to execute this round: on full rounds, all of them;
/// otherwise every check with support on an outer qubit whose block has a
/// nonzero difference syndrome. Returned indices are ascending.
std::vector<uint32_t> trigger_set(const InnerDiff &diff, const IcebergLayout &layout,
                                  bool full_round);

struct PauliCorrection {
    uint32_t qubit;
    Pauli pauli;
};

/// Block-local corrections from raw inner outcomes: an excited Z-type check
/// signals an X error and yields an X on the block's shared qubit; an excited
/// X-type check yields a Z there. Corrections are folded into the tracking
/// frame, never emitted as gates.
std::vector<PauliCorrection> inner_correct(const std::vector<uint8_t> &x_outcomes,
                                           const std::vector<uint8_t> &z_outcomes,
                                           const IcebergLayout &layout);

struct AdaptiveConfig {
    uint32_t d = 4;
    uint32_t rounds = 0;   // 0: defaults to d
    uint32_t refresh = 0;  // 0: defaults to d/2; full rounds at r % refresh == 0
    double p = 0;
    uint64_t seed = 0;
};

struct ShotRecord {
    Circuit circuit;
    Dem dem;
    CompileStats stats;
    std::vector<uint8_t> detector_values;      // sampled outcome per detector
    std::vector<uint32_t> triggered_per_round;  // outer checks executed
};

/// Runs one adaptive shot: simulates the noisy Pauli frame round by round,
/// schedules outer checks from the difference syndrome, applies inner
/// corrections, then compiles the shot's realized circuit at L0.
ShotRecord run_adaptive_shot(const AdaptiveConfig &cfg, uint64_t shot_index);

/// The non-adaptive baseline: identical structure with every round full.
/// Equals the realized circuit of any shot run with refresh = 1.
Circuit build_static_concatenated(uint32_t d, uint32_t rounds, double p);

/// Converts a logical error rate R accumulated over `rounds` rounds into a
/// per-round rate, inverting R = (1 - (1 - 2r)^rounds) / 2.
double per_round_rate(double total_rate, uint32_t rounds);

}  // namespace demc

#endif
