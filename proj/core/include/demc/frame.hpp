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

#ifndef DEMC_FRAME_HPP
#define DEMC_FRAME_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "demc/circuit.hpp"
#include "demc/dem.hpp"
#include "demc/stepg.hpp"

namespace demc {

/// Forward Pauli-frame simulator. Deliberately independent of the graph
/// lowering and backward traversal; this is the quadratic reference path.
class FrameSim {
   public:
    FrameSim(uint32_t num_qubits, uint32_t num_measurements);

    /// Enables noise sampling and Stim-style collapse randomization (a random
    /// Z toggle after every reset and measurement, which makes detectors that
    /// depend on non-deterministic outcomes fire randomly).
    void set_rng(std::mt19937_64 *rng, bool sample_noise, bool randomize_collapse);

    void apply_pauli(uint32_t q, Pauli p);
    void apply_gates(const Layer &layer);
    void apply_noise(const Layer &layer);  // requires sampling rng
    void apply_layer(const Layer &layer);  // gates, then noise when sampling

    bool x_flip(uint32_t q) const { return x_[q]; }
    bool z_flip(uint32_t q) const { return z_[q]; }
    void toggle_measurement(uint32_t m) { meas_[m] ^= 1; }
    bool measurement_flip(uint32_t m) const { return meas_[m]; }

    std::vector<uint8_t> detector_values(const std::vector<Detector> &detectors) const;
    std::vector<uint8_t> observable_values(const std::vector<Observable> &observables) const;

   private:
    std::vector<uint8_t> x_, z_, meas_;
    std::mt19937_64 *rng_ = nullptr;
    bool sample_noise_ = false;
    bool randomize_collapse_ = false;

    bool coin(double p);
    void collapse_z(uint32_t q);
};

/// Signature of one error source obtained by forward propagation: bit b set
/// iff detector b (b < D) or observable b - D flips. Word layout matches
/// EecMatrix rows.
std::vector<uint64_t> propagate_error(const Circuit &c, const SourceSpec &e);

/// Quadratic reference construction of the decoding hypergraph: every source
/// is propagated forward and duplicates are merged with merge_prob.
Dem build_dem_oracle(const Circuit &c, CorrelationLevel level);

/// Samples one shot and returns per-detector values. Collapse randomization
/// is on, so non-deterministic detectors show up as nonzero even at p = 0.
std::vector<uint8_t> sample_detector_values(const Circuit &c, std::mt19937_64 &rng);

}  // namespace demc

#endif
