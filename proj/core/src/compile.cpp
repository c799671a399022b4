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

#include "demc/compile.hpp"

#include <chrono>

#include "demc/eec.hpp"

namespace demc {

Dem compile_circuit(const Circuit &c, CorrelationLevel level, uint32_t threads,
                    CompileStats *stats) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    Stepg g = lower(c, level);
    auto t1 = clock::now();
    EecMatrix m = EecMatrix::zeroed(g);
    init_leaves(g, c.detectors, c.observables, m);
    run_backward(g, m, threads);
    auto t2 = clock::now();
    const uint32_t W = m.words_per_row;
    std::vector<uint64_t> signatures(g.sources.size() * W);
    std::vector<double> probs(g.sources.size());
    for (size_t i = 0; i < g.sources.size(); i++) {
        source_signature_into(g, m, g.sources[i], signatures.data() + i * W);
        probs[i] = g.sources[i].prob;
    }
    Dem d = reduce_packed(signatures.data(), probs.data(), g.sources.size(), W, g.num_detectors,
                          g.num_observables);
    auto t3 = clock::now();
    if (stats) {
        auto ns = [](auto a, auto b) {
            return (uint64_t)std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count();
        };
        stats->lower_ns = ns(t0, t1);
        stats->traverse_ns = ns(t1, t2);
        stats->reduce_ns = ns(t2, t3);
        stats->total_ns = ns(t0, t3);
    }
    return d;
}

}  // namespace demc
