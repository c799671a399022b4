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

#include "demc/eec.hpp"

#include <stdexcept>
#include <thread>

namespace demc {

EecMatrix EecMatrix::zeroed(const Stepg &g) {
    EecMatrix m;
    m.num_rows = g.num_rows();
    m.num_detectors = g.num_detectors;
    m.num_observables = g.num_observables;
    m.words_per_row = (g.num_detectors + g.num_observables + 63) / 64;
    m.storage.assign((size_t)m.words_per_row * m.num_rows, 0);
    return m;
}

std::vector<uint64_t> EecMatrix::row(uint32_t u) const {
    std::vector<uint64_t> out(words_per_row);
    for (uint32_t w = 0; w < words_per_row; w++) {
        out[w] = word(u, w);
    }
    return out;
}

void init_leaves(const Stepg &g, const std::vector<Detector> &detectors,
                 const std::vector<Observable> &observables, EecMatrix &m) {
    for (const Detector &d : detectors) {
        for (uint32_t meas : d.measurements) {
            if (meas >= g.num_measurements) {
                throw std::invalid_argument("detector references a measurement without a leaf");
            }
            m.toggle_bit(g.leaf(meas), d.id);
        }
    }
    for (const Observable &o : observables) {
        for (uint32_t meas : o.measurements) {
            if (meas >= g.num_measurements) {
                throw std::invalid_argument("observable references a measurement without a leaf");
            }
            m.toggle_bit(g.leaf(meas), g.num_detectors + o.id);
        }
    }
}

namespace {

// One (slot, word) cell of a sub-pass. Branch-free apart from the sentinel
// case split of the traversal rule.
inline void update_cell(const Stepg &g, EecMatrix &m, uint32_t u, uint32_t w) {
    uint32_t v0, v1;
    Stepg::unpack(g.successors[u], v0, v1);
    uint64_t acc = 0;
    if (v0 != kNoSuccessor) {
        acc ^= m.word(v0, w);
    }
    if (v1 != kNoSuccessor) {
        acc ^= m.word(v1, w);
    }
    m.word(u, w) = acc;
}

void run_subpass(const Stepg &g, EecMatrix &m, uint32_t boundary, uint32_t slot_begin,
                 uint32_t slot_end, uint32_t threads) {
    const uint32_t W = m.words_per_row;
    const uint64_t cells = (uint64_t)(slot_end - slot_begin) * W;
    if (threads <= 1 || cells < 2) {
        for (uint32_t s = slot_begin; s < slot_end; s++) {
            uint32_t u = g.node(boundary, s);
            for (uint32_t w = 0; w < W; w++) {
                update_cell(g, m, u, w);
            }
        }
        return;
    }
    uint32_t t = (uint32_t)std::min<uint64_t>(threads, cells);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (uint32_t ti = 0; ti < t; ti++) {
        uint64_t lo = cells * ti / t;
        uint64_t hi = cells * (ti + 1) / t;
        pool.emplace_back([&, lo, hi] {
            for (uint64_t cell = lo; cell < hi; cell++) {
                uint32_t s = slot_begin + (uint32_t)(cell / W);
                uint32_t w = (uint32_t)(cell % W);
                update_cell(g, m, g.node(boundary, s), w);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

}  // namespace

void run_backward(const Stepg &g, EecMatrix &m, uint32_t threads) {
    const uint32_t n = g.num_qubits;
    for (uint32_t i = g.num_layers; i-- > 0;) {
        run_subpass(g, m, i, 0, 2 * n, threads);
        if (g.level != CorrelationLevel::L0) {
            run_subpass(g, m, i, 2 * n, 4 * n, threads);
        }
        if (g.level == CorrelationLevel::L2) {
            run_subpass(g, m, i, 4 * n, 7 * n, threads);
        }
    }
}

std::vector<uint64_t> source_signature(const Stepg &g, const EecMatrix &m, const ErrorSource &s) {
    std::vector<uint64_t> sig(m.words_per_row);
    source_signature_into(g, m, s, sig.data());
    return sig;
}

void source_signature_into(const Stepg &g, const EecMatrix &m, const ErrorSource &s,
                           uint64_t *out) {
    (void)g;
    for (uint32_t w = 0; w < m.words_per_row; w++) {
        uint64_t acc = m.word(s.node0, w);
        if (s.node1 != kNoSuccessor) {
            acc ^= m.word(s.node1, w);
        }
        out[w] = acc;
    }
}

}  // namespace demc
