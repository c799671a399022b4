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

#include "demc/dem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "demc/util.hpp"

namespace demc {

uint64_t fnv1_64(std::span<const uint64_t> words) {
    constexpr uint64_t kPrime = 0x100000001b3ull;
    uint64_t h = kFnv1OffsetBasis;
    for (uint64_t w : words) {
        for (int b = 0; b < 8; b++) {
            h *= kPrime;
            h ^= (w >> (8 * b)) & 0xff;
        }
    }
    return h;
}

Dem reduce(const std::vector<SignedSource> &sources, uint32_t num_detectors,
           uint32_t num_observables, std::vector<std::vector<uint32_t>> *members,
           const HashFn &hash) {
    const uint32_t words = (num_detectors + num_observables + 63) / 64;
    std::vector<uint64_t> flat(sources.size() * words, 0);
    std::vector<double> probs(sources.size());
    for (size_t i = 0; i < sources.size(); i++) {
        if (sources[i].signature.size() != words) {
            throw std::invalid_argument("signature word count mismatch");
        }
        std::copy(sources[i].signature.begin(), sources[i].signature.end(),
                  flat.begin() + i * words);
        probs[i] = sources[i].prob;
    }
    return reduce_packed(flat.data(), probs.data(), sources.size(), words, num_detectors,
                         num_observables, members, hash);
}

Dem reduce_packed(const uint64_t *signatures, const double *probs, size_t count, uint32_t words,
                  uint32_t num_detectors, uint32_t num_observables,
                  std::vector<std::vector<uint32_t>> *members, const HashFn &hash) {
    auto sig = [&](size_t i) { return signatures + i * words; };
    std::vector<uint64_t> keys(count);
    for (size_t i = 0; i < count; i++) {
        keys[i] = hash ? hash(std::span(sig(i), words)) : fnv1_64(std::span(sig(i), words));
    }
    std::vector<uint32_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    auto sig_cmp = [&](uint32_t a, uint32_t b) {
        return std::lexicographical_compare(sig(a), sig(a) + words, sig(b), sig(b) + words);
    };
    auto sig_eq = [&](uint32_t a, uint32_t b) {
        return std::equal(sig(a), sig(a) + words, sig(b));
    };
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (keys[a] != keys[b]) {
            return keys[a] < keys[b];
        }
        return sig_cmp(a, b);
    });

    struct Group {
        Hyperedge edge;
        std::vector<uint32_t> srcs;
    };
    std::vector<Group> groups;
    std::vector<double> fold;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j < order.size() && sig_eq(order[j], order[i])) {
            j++;
        }
        const uint64_t *s = sig(order[i]);
        bool empty = std::all_of(s, s + words, [](uint64_t w) { return w == 0; });
        if (!empty) {
            Group grp;
            fold.clear();
            for (size_t t = i; t < j; t++) {
                fold.push_back(probs[order[t]]);
                grp.srcs.push_back(order[t]);
            }
            // Canonical fold order so the output is permutation invariant.
            std::sort(fold.begin(), fold.end());
            double p = 0;
            for (double q : fold) {
                p = merge_prob(p, q);
            }
            grp.edge.probability = p;
            for (uint32_t b = 0; b < num_detectors + num_observables; b++) {
                if (s[b >> 6] >> (b & 63) & 1) {
                    if (b < num_detectors) {
                        grp.edge.detectors.push_back(b);
                    } else {
                        grp.edge.observables.push_back(b - num_detectors);
                    }
                }
            }
            std::sort(grp.srcs.begin(), grp.srcs.end());
            groups.push_back(std::move(grp));
        }
        i = j;
    }
    std::sort(groups.begin(), groups.end(), [](const Group &a, const Group &b) {
        if (a.edge.detectors != b.edge.detectors) {
            return a.edge.detectors < b.edge.detectors;
        }
        return a.edge.observables < b.edge.observables;
    });

    Dem d;
    d.num_detectors = num_detectors;
    d.num_observables = num_observables;
    if (members) {
        members->clear();
    }
    for (auto &grp : groups) {
        d.hyperedges.push_back(std::move(grp.edge));
        if (members) {
            members->push_back(std::move(grp.srcs));
        }
    }
    return d;
}

std::string serialize_dem(const Dem &d) {
    std::ostringstream out;
    for (const Hyperedge &e : d.hyperedges) {
        out << "error(" << format_double(e.probability) << ")";
        for (uint32_t t : e.detectors) {
            out << " D" << t;
        }
        for (uint32_t t : e.observables) {
            out << " L" << t;
        }
        out << "\n";
    }
    return out.str();
}

Dem parse_dem(const std::string &text, uint32_t num_detectors, uint32_t num_observables) {
    Dem d;
    std::istringstream ss(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(ss, line)) {
        line_no++;
        if (auto h = line.find('#'); h != std::string::npos) {
            line.resize(h);
        }
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) {
            continue;
        }
        if (tok.rfind("error(", 0) != 0 || tok.back() != ')') {
            throw std::invalid_argument("dem line " + std::to_string(line_no) + ": expected error(P)");
        }
        Hyperedge e;
        e.probability = std::stod(tok.substr(6, tok.size() - 7));
        while (ls >> tok) {
            if (tok.size() < 2 || (tok[0] != 'D' && tok[0] != 'L')) {
                throw std::invalid_argument("dem line " + std::to_string(line_no) + ": bad target '" + tok + "'");
            }
            uint32_t id = (uint32_t)std::stoul(tok.substr(1));
            if (tok[0] == 'D') {
                e.detectors.push_back(id);
                num_detectors = std::max(num_detectors, id + 1);
            } else {
                e.observables.push_back(id);
                num_observables = std::max(num_observables, id + 1);
            }
        }
        d.hyperedges.push_back(std::move(e));
    }
    d.num_detectors = num_detectors;
    d.num_observables = num_observables;
    return d;
}

bool dem_close(const Dem &a, const Dem &b, double tolerance, std::string *diff) {
    auto describe = [](const Hyperedge &e) {
        std::ostringstream out;
        out << "error(" << format_double(e.probability) << ")";
        for (uint32_t t : e.detectors) {
            out << " D" << t;
        }
        for (uint32_t t : e.observables) {
            out << " L" << t;
        }
        return out.str();
    };
    if (a.hyperedges.size() != b.hyperedges.size()) {
        if (diff) {
            *diff = "hyperedge count " + std::to_string(a.hyperedges.size()) + " vs " +
                    std::to_string(b.hyperedges.size());
        }
        return false;
    }
    for (size_t i = 0; i < a.hyperedges.size(); i++) {
        const Hyperedge &ea = a.hyperedges[i];
        const Hyperedge &eb = b.hyperedges[i];
        if (ea.detectors != eb.detectors || ea.observables != eb.observables) {
            if (diff) {
                *diff = "edge " + std::to_string(i) + ": " + describe(ea) + " vs " + describe(eb);
            }
            return false;
        }
        if (std::abs(ea.probability - eb.probability) > tolerance) {
            if (diff) {
                *diff = "edge " + std::to_string(i) + " probability: " + describe(ea) + " vs " + describe(eb);
            }
            return false;
        }
    }
    return true;
}

}  // namespace demc
