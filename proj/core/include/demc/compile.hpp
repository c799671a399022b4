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

#ifndef DEMC_COMPILE_HPP
#define DEMC_COMPILE_HPP

#include <cstdint>

#include "demc/circuit.hpp"
#include "demc/dem.hpp"
#include "demc/stepg.hpp"

namespace demc {

struct CompileStats {
    uint64_t lower_ns = 0;
    uint64_t traverse_ns = 0;
    uint64_t reduce_ns = 0;
    uint64_t total_ns = 0;
};

/// Full pipeline: lower -> init leaves -> backward traversal -> signatures ->
/// sort/reduce. Deterministic for any thread count.
Dem compile_circuit(const Circuit &c, CorrelationLevel level, uint32_t threads = 1,
                    CompileStats *stats = nullptr);

}  // namespace demc

#endif
