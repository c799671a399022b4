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

#ifndef DEMC_CODES_HPP
#define DEMC_CODES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "demc/circuit.hpp"

namespace demc {

/// Hardware-style noise model parameterised by a single strength p.
/// Single-qubit gates depolarise at p and two-qubit gates at p/10 (swappable
/// via invert_gate_rates); measurements flip and resets fail at p; idling
/// depolarises at p/10.
struct NoiseModel {
    double p = 0;
    bool invert_gate_rates = false;

    double single_qubit_depolarize() const { return invert_gate_rates ? p / 10 : p; }
    double two_qubit_depolarize() const { return invert_gate_rates ? p : p / 10; }
    double measurement_flip() const { return p; }
    double reset_fail() const { return p; }
    double idle_depolarize() const { return p / 10; }
};

/// Incremental circuit assembly with absolute measurement bookkeeping.
class CircuitBuilder {
   public:
    void tick();  // close the current layer
    void h(uint32_t q);
    void cx(uint32_t c, uint32_t t);
    void r(uint32_t q);
    uint32_t m(uint32_t q, double flip_prob = 0);
    uint32_t mr(uint32_t q, double flip_prob = 0);
    void noise1(NoiseKind kind, double p, uint32_t q);
    void depolarize2(double p, uint32_t a, uint32_t b);
    uint32_t detector(std::vector<uint32_t> measurements);
    void observable_include(uint32_t id, const std::vector<uint32_t> &measurements);

    /// Decorates the current (still open) layer per the noise model: gate
    /// channels, measurement flips, reset failures, then idle channels on
    /// untouched qubits. Zero-rate channels are omitted.
    void apply_noise(const NoiseModel &model, uint32_t num_qubits);

    uint32_t measurement_count() const { return meas_count_; }

    /// Layers closed so far (excludes the open layer).
    const std::vector<Layer> &built_layers() const { return c_.layers; }

    /// Finishes the circuit. The builder is left empty.
    Circuit take(uint32_t num_qubits);

   private:
    Circuit c_;
    Layer cur_;
    uint32_t meas_count_ = 0;
    bool layer_dirty() const;
};

/// Repetition-code memory experiment: 2d-1 qubits, data at even indices.
Circuit gen_repetition(uint32_t d, uint32_t rounds, const NoiseModel &noise);

struct SurfaceCheck {
    bool is_x;
    uint32_t ancilla;
    std::vector<uint32_t> support;      // data qubit ids, ascending
    std::array<int32_t, 4> step_data;   // data targeted at CNOT step s, -1 if idle
};

/// Rotated surface-code lattice with a fixed conflict-free 4-step CNOT
/// schedule (X checks sweep NW,NE,SW,SE; Z checks NW,SW,NE,SE).
struct SurfaceLayout {
    uint32_t d;
    uint32_t num_qubits;  // d*d data qubits, then one ancilla per check
    std::vector<SurfaceCheck> checks;

    uint32_t data_qubit(uint32_t r, uint32_t c) const { return r * d + c; }
};

SurfaceLayout surface_layout(uint32_t d);

/// Z-basis memory experiment on the rotated surface code. With
/// only_z_detectors set, X-check detectors are suppressed (the uncorrelated
/// compilation level cannot model the errors that correlate the two bases).
Circuit gen_surface(uint32_t d, uint32_t rounds, const NoiseModel &noise,
                    bool only_z_detectors = false);

}  // namespace demc

#endif
