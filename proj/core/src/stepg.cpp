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

#include "demc/stepg.hpp"

#include <map>
#include <sstream>
#include <unordered_map>

namespace demc {

uint32_t alpha(CorrelationLevel level) {
    switch (level) {
        case CorrelationLevel::L0:
            return 2;
        case CorrelationLevel::L1:
            return 4;
        case CorrelationLevel::L2:
            return 7;
    }
    return 2;
}

SlotLayout slot_layout(CorrelationLevel level, uint32_t n) {
    return SlotLayout{level, n, alpha(level) * n};
}

namespace {

// The 15 non-identity two-qubit Paulis, grouped by the level that first
// retains them. 'I' marks an identity component.
struct PauliPair {
    char a;
    char b;
    CorrelationLevel min_level;
};

constexpr PauliPair kPairTable[] = {
    {'I', 'X', CorrelationLevel::L0}, {'I', 'Y', CorrelationLevel::L1},
    {'I', 'Z', CorrelationLevel::L0}, {'X', 'I', CorrelationLevel::L0},
    {'X', 'X', CorrelationLevel::L0}, {'X', 'Y', CorrelationLevel::L2},
    {'X', 'Z', CorrelationLevel::L1}, {'Y', 'I', CorrelationLevel::L1},
    {'Y', 'X', CorrelationLevel::L2}, {'Y', 'Y', CorrelationLevel::L2},
    {'Y', 'Z', CorrelationLevel::L2}, {'Z', 'I', CorrelationLevel::L0},
    {'Z', 'X', CorrelationLevel::L1}, {'Z', 'Y', CorrelationLevel::L2},
    {'Z', 'Z', CorrelationLevel::L0},
};

Pauli from_char(char c) {
    return c == 'X' ? Pauli::X : c == 'Y' ? Pauli::Y : Pauli::Z;
}

}  // namespace

std::vector<SourceSpec> decompose_noise(const NoiseOp &op, CorrelationLevel level, int32_t boundary) {
    std::vector<SourceSpec> out;
    switch (op.kind) {
        case NoiseKind::X_ERROR:
            out.push_back({op.prob, boundary, {{op.q0, Pauli::X}}});
            break;
        case NoiseKind::Z_ERROR:
            out.push_back({op.prob, boundary, {{op.q0, Pauli::Z}}});
            break;
        case NoiseKind::DEPOLARIZE1: {
            double p = op.prob / 3;
            out.push_back({p, boundary, {{op.q0, Pauli::X}}});
            if (level != CorrelationLevel::L0) {
                out.push_back({p, boundary, {{op.q0, Pauli::Y}}});
            }
            out.push_back({p, boundary, {{op.q0, Pauli::Z}}});
            break;
        }
        case NoiseKind::DEPOLARIZE2: {
            double p = op.prob / 15;
            for (const PauliPair &pp : kPairTable) {
                if ((uint8_t)pp.min_level > (uint8_t)level) {
                    continue;
                }
                SourceSpec s{p, boundary, {}};
                if (pp.a != 'I') {
                    s.paulis.push_back({op.q0, from_char(pp.a)});
                }
                if (pp.b != 'I') {
                    s.paulis.push_back({op.q1, from_char(pp.b)});
                }
                out.push_back(std::move(s));
            }
            break;
        }
    }
    return out;
}

std::vector<SourceSpec> enumerate_sources(const Circuit &c, CorrelationLevel level) {
    std::vector<SourceSpec> out;
    for (size_t i = 0; i < c.layers.size(); i++) {
        for (const NoiseOp &op : c.layers[i].noise) {
            auto part = decompose_noise(op, level, (int32_t)i);
            out.insert(out.end(), part.begin(), part.end());
        }
        for (const GateOp &g : c.layers[i].gates) {
            if (g.is_measurement() && g.flip_prob > 0) {
                SourceSpec s{g.flip_prob, -1, {}};
                s.measurement = g.meas_index;
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

namespace {

// What happens to qubit q during a given layer.
struct QubitOp {
    GateKind kind;
    bool is_cx_control = false;
    uint32_t partner = 0;    // CX only
    int32_t meas_index = -1;  // M/MR only
};

struct LayerIndex {
    std::unordered_map<uint32_t, QubitOp> by_qubit;
    std::vector<const GateOp *> cx_gates;                  // in layer order
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> cx_index;  // (c, t) -> j
};

LayerIndex index_layer(const Layer &layer) {
    LayerIndex idx;
    for (const GateOp &g : layer.gates) {
        switch (g.kind) {
            case GateKind::CX: {
                uint32_t j = (uint32_t)idx.cx_gates.size();
                idx.cx_gates.push_back(&g);
                idx.cx_index[{g.q0, g.q1}] = j;
                idx.by_qubit[g.q0] = {GateKind::CX, true, g.q1};
                idx.by_qubit[g.q1] = {GateKind::CX, false, g.q0};
                break;
            }
            case GateKind::M:
            case GateKind::MR:
                idx.by_qubit[g.q0] = {g.kind, false, 0, g.meas_index};
                break;
            default:
                idx.by_qubit[g.q0] = {g.kind};
                break;
        }
    }
    return idx;
}

}  // namespace

Stepg lower(const Circuit &c, CorrelationLevel level) {
    const uint32_t n = c.num_qubits;
    const uint32_t num_layers = (uint32_t)c.layers.size();
    SlotLayout sl = slot_layout(level, n);
    const uint32_t k = sl.k;

    uint64_t rows = (uint64_t)num_layers * k + c.num_measurements;
    if (rows >= kNoSuccessor) {
        throw std::invalid_argument("circuit exceeds 32-bit node index space");
    }

    Stepg g;
    g.level = level;
    g.num_qubits = n;
    g.num_layers = num_layers;
    g.k = k;
    g.num_measurements = c.num_measurements;
    g.num_detectors = (uint32_t)c.detectors.size();
    g.num_observables = (uint32_t)c.observables.size();
    g.successors.assign((size_t)num_layers * k, Stepg::pack(kNoSuccessor, kNoSuccessor));

    std::vector<LayerIndex> layer_idx;
    layer_idx.reserve(num_layers);
    for (const Layer &layer : c.layers) {
        layer_idx.push_back(index_layer(layer));
    }

    auto set_succ = [&](uint32_t u, uint32_t a, uint32_t b) {
        g.successors[u] = Stepg::pack(a, b);
    };

    for (uint32_t i = 0; i < num_layers; i++) {
        // Base X/Z slots: propagation through layer i+1.
        if (i + 1 < num_layers) {
            const LayerIndex &next = layer_idx[i + 1];
            for (uint32_t q = 0; q < n; q++) {
                uint32_t ux = g.node(i, sl.x_slot(q));
                uint32_t uz = g.node(i, sl.z_slot(q));
                auto it = next.by_qubit.find(q);
                if (it == next.by_qubit.end()) {
                    set_succ(ux, g.node(i + 1, sl.x_slot(q)), kNoSuccessor);
                    set_succ(uz, g.node(i + 1, sl.z_slot(q)), kNoSuccessor);
                    continue;
                }
                const QubitOp &op = it->second;
                switch (op.kind) {
                    case GateKind::H:
                        set_succ(ux, g.node(i + 1, sl.z_slot(q)), kNoSuccessor);
                        set_succ(uz, g.node(i + 1, sl.x_slot(q)), kNoSuccessor);
                        break;
                    case GateKind::CX:
                        if (op.is_cx_control) {
                            set_succ(ux, g.node(i + 1, sl.x_slot(q)), g.node(i + 1, sl.x_slot(op.partner)));
                            set_succ(uz, g.node(i + 1, sl.z_slot(q)), kNoSuccessor);
                        } else {
                            set_succ(ux, g.node(i + 1, sl.x_slot(q)), kNoSuccessor);
                            set_succ(uz, g.node(i + 1, sl.z_slot(op.partner)), g.node(i + 1, sl.z_slot(q)));
                        }
                        break;
                    case GateKind::R:
                        break;  // both empty
                    case GateKind::M:
                        set_succ(ux, g.leaf((uint32_t)op.meas_index), g.node(i + 1, sl.x_slot(q)));
                        break;
                    case GateKind::MR:
                        set_succ(ux, g.leaf((uint32_t)op.meas_index), kNoSuccessor);
                        break;
                }
            }
        }
        // Correlated slots reference nodes at the same boundary.
        if (level != CorrelationLevel::L0) {
            for (uint32_t q = 0; q < n; q++) {
                set_succ(g.node(i, sl.y_slot(q)), g.node(i, sl.x_slot(q)), g.node(i, sl.z_slot(q)));
            }
            const LayerIndex &here = layer_idx[i];
            for (uint32_t j = 0; j < here.cx_gates.size(); j++) {
                uint32_t cq = here.cx_gates[j]->q0;
                uint32_t tq = here.cx_gates[j]->q1;
                set_succ(g.node(i, sl.xz_slot(j)), g.node(i, sl.x_slot(cq)), g.node(i, sl.z_slot(tq)));
                set_succ(g.node(i, sl.zx_slot(j)), g.node(i, sl.z_slot(cq)), g.node(i, sl.x_slot(tq)));
                if (level == CorrelationLevel::L2) {
                    set_succ(g.node(i, sl.xy_slot(j)), g.node(i, sl.x_slot(cq)), g.node(i, sl.y_slot(tq)));
                    set_succ(g.node(i, sl.yx_slot(j)), g.node(i, sl.y_slot(cq)), g.node(i, sl.x_slot(tq)));
                    set_succ(g.node(i, sl.yy_slot(j)), g.node(i, sl.y_slot(cq)), g.node(i, sl.y_slot(tq)));
                    set_succ(g.node(i, sl.yz_slot(j)), g.node(i, sl.y_slot(cq)), g.node(i, sl.z_slot(tq)));
                    set_succ(g.node(i, sl.zy_slot(j)), g.node(i, sl.z_slot(cq)), g.node(i, sl.y_slot(tq)));
                }
            }
        }
    }

    // Map semantic sources onto graph nodes.
    auto term_node = [&](uint32_t boundary, const PauliTerm &t) -> uint32_t {
        switch (t.pauli) {
            case Pauli::X:
                return g.node(boundary, sl.x_slot(t.qubit));
            case Pauli::Z:
                return g.node(boundary, sl.z_slot(t.qubit));
            case Pauli::Y:
                return g.node(boundary, sl.y_slot(t.qubit));
        }
        return kNoSuccessor;
    };
    for (const SourceSpec &s : enumerate_sources(c, level)) {
        if (s.measurement >= 0) {
            g.sources.push_back({g.leaf((uint32_t)s.measurement), kNoSuccessor, s.prob});
            continue;
        }
        uint32_t b = (uint32_t)s.boundary;
        if (s.paulis.size() == 1) {
            g.sources.push_back({term_node(b, s.paulis[0]), kNoSuccessor, s.prob});
            continue;
        }
        // Two components: use the dedicated per-CX slot when one exists.
        const LayerIndex &here = layer_idx[b];
        auto cx = here.cx_index.find({s.paulis[0].qubit, s.paulis[1].qubit});
        if (cx != here.cx_index.end()) {
            uint32_t j = cx->second;
            Pauli a = s.paulis[0].pauli;
            Pauli bb = s.paulis[1].pauli;
            uint32_t slot = kNoSuccessor;
            if (level != CorrelationLevel::L0) {
                if (a == Pauli::X && bb == Pauli::Z) {
                    slot = sl.xz_slot(j);
                } else if (a == Pauli::Z && bb == Pauli::X) {
                    slot = sl.zx_slot(j);
                }
            }
            if (level == CorrelationLevel::L2 && slot == kNoSuccessor) {
                if (a == Pauli::X && bb == Pauli::Y) {
                    slot = sl.xy_slot(j);
                } else if (a == Pauli::Y && bb == Pauli::X) {
                    slot = sl.yx_slot(j);
                } else if (a == Pauli::Y && bb == Pauli::Y) {
                    slot = sl.yy_slot(j);
                } else if (a == Pauli::Y && bb == Pauli::Z) {
                    slot = sl.yz_slot(j);
                } else if (a == Pauli::Z && bb == Pauli::Y) {
                    slot = sl.zy_slot(j);
                }
            }
            if (slot != kNoSuccessor) {
                g.sources.push_back({g.node(b, slot), kNoSuccessor, s.prob});
                continue;
            }
        }
        g.sources.push_back({term_node(b, s.paulis[0]), term_node(b, s.paulis[1]), s.prob});
    }
    return g;
}

std::string dump_stepg(const Stepg &g) {
    std::ostringstream out;
    for (size_t u = 0; u < g.successors.size(); u++) {
        uint32_t a, b;
        Stepg::unpack(g.successors[u], a, b);
        out << u << " -> " << (a == kNoSuccessor ? -1 : (int64_t)a) << " "
            << (b == kNoSuccessor ? -1 : (int64_t)b) << "\n";
    }
    return out.str();
}

}  // namespace demc
