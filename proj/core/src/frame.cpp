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

#include "demc/frame.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace demc {

FrameSim::FrameSim(uint32_t num_qubits, uint32_t num_measurements)
    : x_(num_qubits, 0), z_(num_qubits, 0), meas_(num_measurements, 0) {}

void FrameSim::set_rng(std::mt19937_64 *rng, bool sample_noise, bool randomize_collapse) {
    rng_ = rng;
    sample_noise_ = sample_noise;
    randomize_collapse_ = randomize_collapse;
}

bool FrameSim::coin(double p) {
    if (p <= 0) {
        return false;
    }
    return std::uniform_real_distribution<double>(0.0, 1.0)(*rng_) < p;
}

void FrameSim::collapse_z(uint32_t q) {
    // Post-collapse states are Z eigenstates: the Z part of the frame is
    // gauge. Randomizing it exposes detectors built on non-deterministic
    // outcomes; zeroing it keeps exact propagation deterministic.
    if (randomize_collapse_) {
        z_[q] = (uint8_t)((*rng_)() & 1);
    } else {
        z_[q] = 0;
    }
}

void FrameSim::apply_pauli(uint32_t q, Pauli p) {
    if (p != Pauli::Z) {
        x_[q] ^= 1;
    }
    if (p != Pauli::X) {
        z_[q] ^= 1;
    }
}

void FrameSim::apply_gates(const Layer &layer) {
    for (const GateOp &g : layer.gates) {
        switch (g.kind) {
            case GateKind::H:
                std::swap(x_[g.q0], z_[g.q0]);
                break;
            case GateKind::CX:
                x_[g.q1] ^= x_[g.q0];
                z_[g.q0] ^= z_[g.q1];
                break;
            case GateKind::R:
                x_[g.q0] = 0;
                collapse_z(g.q0);
                break;
            case GateKind::M:
                meas_[g.meas_index] ^= x_[g.q0];
                if (sample_noise_ && coin(g.flip_prob)) {
                    meas_[g.meas_index] ^= 1;
                }
                collapse_z(g.q0);
                break;
            case GateKind::MR:
                meas_[g.meas_index] ^= x_[g.q0];
                if (sample_noise_ && coin(g.flip_prob)) {
                    meas_[g.meas_index] ^= 1;
                }
                x_[g.q0] = 0;
                collapse_z(g.q0);
                break;
        }
    }
}

void FrameSim::apply_noise(const Layer &layer) {
    static constexpr Pauli kSingles[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (const NoiseOp &op : layer.noise) {
        switch (op.kind) {
            case NoiseKind::X_ERROR:
                if (coin(op.prob)) {
                    x_[op.q0] ^= 1;
                }
                break;
            case NoiseKind::Z_ERROR:
                if (coin(op.prob)) {
                    z_[op.q0] ^= 1;
                }
                break;
            case NoiseKind::DEPOLARIZE1:
                if (coin(op.prob)) {
                    apply_pauli(op.q0, kSingles[(*rng_)() % 3]);
                }
                break;
            case NoiseKind::DEPOLARIZE2:
                if (coin(op.prob)) {
                    uint32_t c = (uint32_t)((*rng_)() % 15) + 1;  // 1..15, skip II
                    uint32_t a = c / 4;
                    uint32_t b = c % 4;
                    if (a) {
                        apply_pauli(op.q0, kSingles[a - 1]);
                    }
                    if (b) {
                        apply_pauli(op.q1, kSingles[b - 1]);
                    }
                }
                break;
        }
    }
}

void FrameSim::apply_layer(const Layer &layer) {
    apply_gates(layer);
    if (sample_noise_) {
        apply_noise(layer);
    }
}

std::vector<uint8_t> FrameSim::detector_values(const std::vector<Detector> &detectors) const {
    std::vector<uint8_t> out(detectors.size(), 0);
    for (size_t i = 0; i < detectors.size(); i++) {
        uint8_t v = 0;
        for (uint32_t m : detectors[i].measurements) {
            v ^= meas_[m];
        }
        out[i] = v;
    }
    return out;
}

std::vector<uint8_t> FrameSim::observable_values(const std::vector<Observable> &observables) const {
    std::vector<uint8_t> out(observables.size(), 0);
    for (size_t i = 0; i < observables.size(); i++) {
        uint8_t v = 0;
        for (uint32_t m : observables[i].measurements) {
            v ^= meas_[m];
        }
        out[i] = v;
    }
    return out;
}

std::vector<uint64_t> propagate_error(const Circuit &c, const SourceSpec &e) {
    const uint32_t D = (uint32_t)c.detectors.size();
    const uint32_t O = (uint32_t)c.observables.size();
    const uint32_t W = (D + O + 63) / 64;
    FrameSim sim(c.num_qubits, c.num_measurements);
    if (e.measurement >= 0) {
        if ((uint32_t)e.measurement >= c.num_measurements) {
            throw std::invalid_argument("error placement references a missing measurement");
        }
        sim.toggle_measurement((uint32_t)e.measurement);
    } else {
        if (e.boundary < 0 || (size_t)e.boundary >= c.layers.size()) {
            throw std::invalid_argument("error placement at a missing boundary");
        }
        for (const PauliTerm &t : e.paulis) {
            if (t.qubit >= c.num_qubits) {
                throw std::invalid_argument("error placement on a missing qubit");
            }
            sim.apply_pauli(t.qubit, t.pauli);
        }
        for (size_t i = (size_t)e.boundary + 1; i < c.layers.size(); i++) {
            sim.apply_gates(c.layers[i]);
        }
    }
    std::vector<uint64_t> sig(W, 0);
    auto det = sim.detector_values(c.detectors);
    for (uint32_t d = 0; d < D; d++) {
        if (det[d]) {
            sig[d >> 6] |= 1ull << (d & 63);
        }
    }
    auto obs = sim.observable_values(c.observables);
    for (uint32_t o = 0; o < O; o++) {
        uint32_t b = D + o;
        if (obs[o]) {
            sig[b >> 6] |= 1ull << (b & 63);
        }
    }
    return sig;
}

Dem build_dem_oracle(const Circuit &c, CorrelationLevel level) {
    const uint32_t D = (uint32_t)c.detectors.size();
    const uint32_t O = (uint32_t)c.observables.size();
    std::map<std::vector<uint64_t>, std::vector<double>> classes;
    for (const SourceSpec &s : enumerate_sources(c, level)) {
        classes[propagate_error(c, s)].push_back(s.prob);
    }
    Dem d;
    d.num_detectors = D;
    d.num_observables = O;
    for (auto &[sig, probs] : classes) {
        bool empty = std::all_of(sig.begin(), sig.end(), [](uint64_t w) { return w == 0; });
        if (empty) {
            continue;
        }
        Hyperedge e;
        std::sort(probs.begin(), probs.end());
        e.probability = 0;
        for (double p : probs) {
            e.probability = merge_prob(e.probability, p);
        }
        for (uint32_t b = 0; b < D + O; b++) {
            if (sig[b >> 6] >> (b & 63) & 1) {
                if (b < D) {
                    e.detectors.push_back(b);
                } else {
                    e.observables.push_back(b - D);
                }
            }
        }
        d.hyperedges.push_back(std::move(e));
    }
    std::sort(d.hyperedges.begin(), d.hyperedges.end(), [](const Hyperedge &a, const Hyperedge &b) {
        if (a.detectors != b.detectors) {
            return a.detectors < b.detectors;
        }
        return a.observables < b.observables;
    });
    return d;
}

std::vector<uint8_t> sample_detector_values(const Circuit &c, std::mt19937_64 &rng) {
    FrameSim sim(c.num_qubits, c.num_measurements);
    sim.set_rng(&rng, true, true);
    for (const Layer &layer : c.layers) {
        sim.apply_layer(layer);
    }
    return sim.detector_values(c.detectors);
}

}  // namespace demc
