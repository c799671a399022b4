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

#ifndef DEMC_EEC_HPP
#define DEMC_EEC_HPP

#include <cstdint>
#include <vector>

#include "demc/stepg.hpp"

namespace demc {

/// Bit-packed equivalence-class matrix. Row u holds the detector/observable
/// set flipped by an error at node u. Column-major storage: word w of every
/// row is contiguous, address(u, w) = w * num_rows + u.
struct EecMatrix {
    uint32_t num_rows = 0;
    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;
    uint32_t words_per_row = 0;
    std::vector<uint64_t> storage;

    static EecMatrix zeroed(const Stepg &g);

    uint64_t &word(uint32_t row, uint32_t w) {
        return storage[(size_t)w * num_rows + row];
    }
    uint64_t word(uint32_t row, uint32_t w) const {
        return storage[(size_t)w * num_rows + row];
    }
    bool bit(uint32_t row, uint32_t b) const {
        return word(row, b >> 6) >> (b & 63) & 1;
    }
    void toggle_bit(uint32_t row, uint32_t b) {
        word(row, b >> 6) ^= 1ull << (b & 63);
    }
    std::vector<uint64_t> row(uint32_t u) const;
};

/// XORs each detector's basis vector into the leaf rows of its measurements;
/// observable columns sit after the detector columns.
void init_leaves(const Stepg &g, const std::vector<Detector> &detectors,
                 const std::vector<Observable> &observables, EecMatrix &m);

/// Layer-synchronous backward traversal. Boundaries run last to first; within
/// a boundary the base, level-1 and level-2 sub-passes are barriers. With
/// threads > 1 the (slot, word) grid of each sub-pass is split across worker
/// threads; the result is bit-identical to the serial schedule.
void run_backward(const Stepg &g, EecMatrix &m, uint32_t threads = 1);

/// XOR of the source's component rows.
std::vector<uint64_t> source_signature(const Stepg &g, const EecMatrix &m, const ErrorSource &s);

/// Same, written into a caller-owned buffer of words_per_row words.
void source_signature_into(const Stepg &g, const EecMatrix &m, const ErrorSource &s,
                           uint64_t *out);

}  // namespace demc

#endif
