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

#ifndef DEMC_DEM_HPP
#define DEMC_DEM_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace demc {

/// Bernoulli XOR-convolution: the probability that exactly one of two
/// independent events occurs.
inline double merge_prob(double a, double b) {
    return a * (1 - b) + b * (1 - a);
}

/// FNV-1 (multiply then XOR) over the signature words, serialized word 0
/// first, least significant byte first.
uint64_t fnv1_64(std::span<const uint64_t> words);

constexpr uint64_t kFnv1OffsetBasis = 0xcbf29ce484222325ull;

struct Hyperedge {
    std::vector<uint32_t> detectors;    // strictly ascending
    std::vector<uint32_t> observables;  // strictly ascending
    double probability;

    bool operator==(const Hyperedge &) const = default;
};

struct Dem {
    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;
    std::vector<Hyperedge> hyperedges;  // lexicographic on (detectors, observables)

    bool operator==(const Dem &) const = default;
};

struct SignedSource {
    std::vector<uint64_t> signature;
    double prob;
};

using HashFn = std::function<uint64_t(std::span<const uint64_t>)>;

/// Deduplicates signatures and merges probabilities into a canonical Dem.
/// Hash collisions are broken by full-signature comparison. Empty signatures
/// are dropped. If `members` is non-null it receives, per hyperedge, the
/// input indices that merged into it.
Dem reduce(const std::vector<SignedSource> &sources, uint32_t num_detectors,
           uint32_t num_observables, std::vector<std::vector<uint32_t>> *members = nullptr,
           const HashFn &hash = nullptr);

/// Allocation-light variant over a flat signature buffer: source i owns words
/// [i * words, (i + 1) * words). reduce() delegates here.
Dem reduce_packed(const uint64_t *signatures, const double *probs, size_t count, uint32_t words,
                  uint32_t num_detectors, uint32_t num_observables,
                  std::vector<std::vector<uint32_t>> *members = nullptr,
                  const HashFn &hash = nullptr);

/// One `error(P) D... L...` line per hyperedge, canonical order, shortest
/// round-trip probability formatting.
std::string serialize_dem(const Dem &d);

/// Read-back parser for the serialize_dem subset. Detector/observable counts
/// are inferred as max id + 1 unless larger values are supplied.
Dem parse_dem(const std::string &text, uint32_t num_detectors = 0, uint32_t num_observables = 0);

/// True when both models have the same hyperedge sets with probabilities
/// within `tolerance`. On mismatch, fills `diff` (when non-null) with a
/// description of the first difference.
bool dem_close(const Dem &a, const Dem &b, double tolerance, std::string *diff = nullptr);

}  // namespace demc

#endif
