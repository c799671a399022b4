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

#include "demc/codes.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace demc {

bool CircuitBuilder::layer_dirty() const {
    return !cur_.gates.empty() || !cur_.noise.empty() || !cur_.annotations.empty();
}

void CircuitBuilder::tick() {
    c_.layers.push_back(std::move(cur_));
    cur_ = Layer{};
}

void CircuitBuilder::h(uint32_t q) {
    cur_.gates.push_back({GateKind::H, q});
}

void CircuitBuilder::cx(uint32_t c, uint32_t t) {
    cur_.gates.push_back({GateKind::CX, c, t});
}

void CircuitBuilder::r(uint32_t q) {
    cur_.gates.push_back({GateKind::R, q});
}

uint32_t CircuitBuilder::m(uint32_t q, double flip_prob) {
    GateOp g{GateKind::M, q};
    g.meas_index = (int32_t)meas_count_++;
    g.flip_prob = flip_prob;
    cur_.gates.push_back(g);
    return (uint32_t)g.meas_index;
}

uint32_t CircuitBuilder::mr(uint32_t q, double flip_prob) {
    GateOp g{GateKind::MR, q};
    g.meas_index = (int32_t)meas_count_++;
    g.flip_prob = flip_prob;
    cur_.gates.push_back(g);
    return (uint32_t)g.meas_index;
}

void CircuitBuilder::noise1(NoiseKind kind, double p, uint32_t q) {
    cur_.noise.push_back({kind, p, q});
}

void CircuitBuilder::depolarize2(double p, uint32_t a, uint32_t b) {
    cur_.noise.push_back({NoiseKind::DEPOLARIZE2, p, a, b});
}

uint32_t CircuitBuilder::detector(std::vector<uint32_t> measurements) {
    std::sort(measurements.begin(), measurements.end());
    uint32_t id = (uint32_t)c_.detectors.size();
    c_.detectors.push_back({id, measurements});
    cur_.annotations.push_back({false, id, std::move(measurements)});
    return id;
}

void CircuitBuilder::observable_include(uint32_t id, const std::vector<uint32_t> &measurements) {
    while (c_.observables.size() <= id) {
        c_.observables.push_back({(uint32_t)c_.observables.size(), {}});
    }
    std::vector<uint32_t> sorted = measurements;
    std::sort(sorted.begin(), sorted.end());
    for (uint32_t meas : sorted) {
        auto &set = c_.observables[id].measurements;
        auto it = std::lower_bound(set.begin(), set.end(), meas);
        if (it != set.end() && *it == meas) {
            set.erase(it);
        } else {
            set.insert(it, meas);
        }
    }
    cur_.annotations.push_back({true, id, std::move(sorted)});
}

void CircuitBuilder::apply_noise(const NoiseModel &model, uint32_t num_qubits) {
    std::set<uint32_t> busy;
    for (GateOp &g : cur_.gates) {
        busy.insert(g.q0);
        if (g.kind == GateKind::CX) {
            busy.insert(g.q1);
        }
        switch (g.kind) {
            case GateKind::H:
                if (model.single_qubit_depolarize() > 0) {
                    noise1(NoiseKind::DEPOLARIZE1, model.single_qubit_depolarize(), g.q0);
                }
                break;
            case GateKind::CX:
                if (model.two_qubit_depolarize() > 0) {
                    depolarize2(model.two_qubit_depolarize(), g.q0, g.q1);
                }
                break;
            case GateKind::R:
                if (model.reset_fail() > 0) {
                    noise1(NoiseKind::X_ERROR, model.reset_fail(), g.q0);
                }
                break;
            case GateKind::M:
                g.flip_prob = model.measurement_flip();
                break;
            case GateKind::MR:
                g.flip_prob = model.measurement_flip();
                if (model.reset_fail() > 0) {
                    noise1(NoiseKind::X_ERROR, model.reset_fail(), g.q0);
                }
                break;
        }
    }
    if (model.idle_depolarize() > 0) {
        for (uint32_t q = 0; q < num_qubits; q++) {
            if (!busy.count(q)) {
                noise1(NoiseKind::DEPOLARIZE1, model.idle_depolarize(), q);
            }
        }
    }
}

Circuit CircuitBuilder::take(uint32_t num_qubits) {
    if (layer_dirty()) {
        tick();
    }
    c_.num_qubits = num_qubits;
    c_.num_measurements = meas_count_;
    Circuit out = std::move(c_);
    c_ = Circuit{};
    meas_count_ = 0;
    return out;
}

Circuit gen_repetition(uint32_t d, uint32_t rounds, const NoiseModel &noise) {
    if (d < 2 || rounds < 1) {
        throw std::invalid_argument("gen_repetition requires d >= 2 and rounds >= 1");
    }
    const uint32_t n = 2 * d - 1;
    const uint32_t num_anc = d - 1;
    CircuitBuilder b;

    for (uint32_t q = 0; q < n; q++) {
        b.r(q);
    }
    b.apply_noise(noise, n);
    b.tick();

    std::vector<uint32_t> prev_meas(num_anc);
    std::vector<uint32_t> cur_meas(num_anc);
    for (uint32_t round = 0; round < rounds; round++) {
        for (uint32_t a = 0; a < num_anc; a++) {
            b.cx(2 * a, 2 * a + 1);
        }
        b.apply_noise(noise, n);
        b.tick();
        for (uint32_t a = 0; a < num_anc; a++) {
            b.cx(2 * a + 2, 2 * a + 1);
        }
        b.apply_noise(noise, n);
        b.tick();
        for (uint32_t a = 0; a < num_anc; a++) {
            cur_meas[a] = b.mr(2 * a + 1);
        }
        b.apply_noise(noise, n);
        for (uint32_t a = 0; a < num_anc; a++) {
            if (round == 0) {
                b.detector({cur_meas[a]});
            } else {
                b.detector({prev_meas[a], cur_meas[a]});
            }
        }
        b.tick();
        prev_meas = cur_meas;
    }

    std::vector<uint32_t> data_meas(d);
    for (uint32_t i = 0; i < d; i++) {
        data_meas[i] = b.m(2 * i);
    }
    b.apply_noise(noise, n);
    for (uint32_t a = 0; a < num_anc; a++) {
        b.detector({prev_meas[a], data_meas[a], data_meas[a + 1]});
    }
    b.observable_include(0, {data_meas[0]});
    return b.take(n);
}

SurfaceLayout surface_layout(uint32_t d) {
    if (d < 2) {
        throw std::invalid_argument("surface_layout requires d >= 2");
    }
    SurfaceLayout layout;
    layout.d = d;
    // X checks sweep NW,NE,SW,SE; Z checks NW,SW,NE,SE ("N" and "Z" orders).
    static constexpr int kDirs[4][2] = {{-1, -1}, {-1, 0}, {0, -1}, {0, 0}};  // NW NE SW SE
    static constexpr int kStepX[4] = {0, 1, 2, 3};
    static constexpr int kStepZ[4] = {0, 2, 1, 3};
    uint32_t next_anc = d * d;
    for (uint32_t i = 0; i <= d; i++) {
        for (uint32_t j = 0; j <= d; j++) {
            bool is_x = (i + j) % 2 == 1;
            bool bulk = i >= 1 && i <= d - 1 && j >= 1 && j <= d - 1;
            bool top_bottom = (i == 0 || i == d) && j >= 1 && j <= d - 1;
            bool left_right = (j == 0 || j == d) && i >= 1 && i <= d - 1;
            if (!(bulk || (top_bottom && is_x) || (left_right && !is_x))) {
                continue;
            }
            SurfaceCheck chk;
            chk.is_x = is_x;
            chk.ancilla = next_anc++;
            chk.step_data.fill(-1);
            for (int dir = 0; dir < 4; dir++) {
                int r = (int)i + kDirs[dir][0];
                int c = (int)j + kDirs[dir][1];
                if (r < 0 || c < 0 || r >= (int)d || c >= (int)d) {
                    continue;
                }
                uint32_t q = layout.data_qubit((uint32_t)r, (uint32_t)c);
                chk.support.push_back(q);
                chk.step_data[is_x ? kStepX[dir] : kStepZ[dir]] = (int32_t)q;
            }
            std::sort(chk.support.begin(), chk.support.end());
            layout.checks.push_back(std::move(chk));
        }
    }
    layout.num_qubits = next_anc;
    return layout;
}

Circuit gen_surface(uint32_t d, uint32_t rounds, const NoiseModel &noise, bool only_z_detectors) {
    if (rounds < 1) {
        throw std::invalid_argument("gen_surface requires rounds >= 1");
    }
    SurfaceLayout layout = surface_layout(d);
    const uint32_t n = layout.num_qubits;
    const size_t num_checks = layout.checks.size();
    CircuitBuilder b;

    for (uint32_t q = 0; q < n; q++) {
        b.r(q);
    }
    b.apply_noise(noise, n);
    b.tick();

    std::vector<uint32_t> prev_meas(num_checks);
    std::vector<uint32_t> cur_meas(num_checks);
    for (uint32_t round = 0; round < rounds; round++) {
        for (const SurfaceCheck &chk : layout.checks) {
            if (chk.is_x) {
                b.h(chk.ancilla);
            }
        }
        b.apply_noise(noise, n);
        b.tick();
        for (int step = 0; step < 4; step++) {
            for (const SurfaceCheck &chk : layout.checks) {
                int32_t q = chk.step_data[step];
                if (q < 0) {
                    continue;
                }
                if (chk.is_x) {
                    b.cx(chk.ancilla, (uint32_t)q);
                } else {
                    b.cx((uint32_t)q, chk.ancilla);
                }
            }
            b.apply_noise(noise, n);
            b.tick();
        }
        for (const SurfaceCheck &chk : layout.checks) {
            if (chk.is_x) {
                b.h(chk.ancilla);
            }
        }
        b.apply_noise(noise, n);
        b.tick();
        for (size_t i = 0; i < num_checks; i++) {
            cur_meas[i] = b.mr(layout.checks[i].ancilla);
        }
        b.apply_noise(noise, n);
        for (size_t i = 0; i < num_checks; i++) {
            bool emit = layout.checks[i].is_x ? (!only_z_detectors && round > 0) : true;
            if (!emit) {
                continue;
            }
            if (round == 0) {
                b.detector({cur_meas[i]});
            } else {
                b.detector({prev_meas[i], cur_meas[i]});
            }
        }
        b.tick();
        prev_meas = cur_meas;
    }

    std::vector<uint32_t> data_meas(d * d);
    for (uint32_t q = 0; q < d * d; q++) {
        data_meas[q] = b.m(q);
    }
    b.apply_noise(noise, n);
    for (size_t i = 0; i < num_checks; i++) {
        const SurfaceCheck &chk = layout.checks[i];
        if (chk.is_x) {
            continue;
        }
        std::vector<uint32_t> set{prev_meas[i]};
        for (uint32_t q : chk.support) {
            set.push_back(data_meas[q]);
        }
        b.detector(std::move(set));
    }
    std::vector<uint32_t> obs;
    for (uint32_t c = 0; c < d; c++) {
        obs.push_back(data_meas[layout.data_qubit(0, c)]);
    }
    b.observable_include(0, obs);
    return b.take(n);
}

}  // namespace demc
