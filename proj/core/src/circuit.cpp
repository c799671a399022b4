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

#include "demc/circuit.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>
#include <unordered_map>

#include "demc/util.hpp"

namespace demc {

namespace {

struct Tokenized {
    std::string name;
    bool has_arg = false;
    double arg = 0;
    std::vector<std::string> targets;
};

Tokenized tokenize_line(const std::string &raw, size_t line_no) {
    std::string line = raw;
    if (auto h = line.find('#'); h != std::string::npos) {
        line.resize(h);
    }
    Tokenized out;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) {
        return out;  // blank
    }
    if (auto paren = tok.find('('); paren != std::string::npos) {
        if (tok.back() != ')') {
            throw ParseError(line_no, "unterminated argument in '" + tok + "'");
        }
        std::string arg_str = tok.substr(paren + 1, tok.size() - paren - 2);
        out.name = tok.substr(0, paren);
        char *end = nullptr;
        out.arg = std::strtod(arg_str.c_str(), &end);
        if (end == arg_str.c_str() || *end != '\0') {
            throw ParseError(line_no, "bad numeric argument '" + arg_str + "'");
        }
        out.has_arg = true;
    } else {
        out.name = tok;
    }
    while (ss >> tok) {
        out.targets.push_back(tok);
    }
    return out;
}

uint32_t parse_qubit(const std::string &t, size_t line_no) {
    for (char c : t) {
        if (!isdigit((unsigned char)c)) {
            throw ParseError(line_no, "expected qubit index, got '" + t + "'");
        }
    }
    return (uint32_t)std::stoul(t);
}

// rec[-k] -> absolute index against the running measurement count.
uint32_t parse_rec(const std::string &t, uint32_t meas_count, size_t line_no) {
    if (t.rfind("rec[-", 0) != 0 || t.back() != ']') {
        throw ParseError(line_no, "expected rec[-k], got '" + t + "'");
    }
    std::string num = t.substr(5, t.size() - 6);
    for (char c : num) {
        if (!isdigit((unsigned char)c)) {
            throw ParseError(line_no, "expected rec[-k], got '" + t + "'");
        }
    }
    uint32_t k = (uint32_t)std::stoul(num);
    if (k == 0 || k > meas_count) {
        throw ParseError(line_no, "record reference " + t + " reaches before the first measurement");
    }
    return meas_count - k;
}

// XOR-toggle t into sorted set s.
void toggle_into(std::vector<uint32_t> &s, uint32_t t) {
    auto it = std::lower_bound(s.begin(), s.end(), t);
    if (it != s.end() && *it == t) {
        s.erase(it);
    } else {
        s.insert(it, t);
    }
}

}  // namespace

Circuit parse_circuit(const std::string &text) {
    Circuit c;
    Layer cur;
    uint32_t meas_count = 0;
    uint32_t max_qubit = 0;
    bool any_qubit = false;

    auto note_qubit = [&](uint32_t q) {
        max_qubit = std::max(max_qubit, q);
        any_qubit = true;
    };

    std::istringstream ss(text);
    std::string raw;
    size_t line_no = 0;
    auto flush_layer = [&] {
        c.layers.push_back(std::move(cur));
        cur = Layer{};
    };

    while (std::getline(ss, raw)) {
        line_no++;
        Tokenized t = tokenize_line(raw, line_no);
        if (t.name.empty()) {
            continue;
        }
        const auto &name = t.name;
        if (name == "TICK") {
            if (t.has_arg || !t.targets.empty()) {
                throw ParseError(line_no, "TICK takes no targets");
            }
            flush_layer();
        } else if (name == "H" || name == "R") {
            if (t.has_arg) {
                throw ParseError(line_no, name + " takes no argument");
            }
            if (t.targets.empty()) {
                throw ParseError(line_no, name + " needs at least one target");
            }
            for (auto &tok : t.targets) {
                uint32_t q = parse_qubit(tok, line_no);
                note_qubit(q);
                cur.gates.push_back({name == "H" ? GateKind::H : GateKind::R, q});
            }
        } else if (name == "CX") {
            if (t.targets.size() < 2 || t.targets.size() % 2) {
                throw ParseError(line_no, "CX needs an even number of targets");
            }
            for (size_t i = 0; i < t.targets.size(); i += 2) {
                uint32_t a = parse_qubit(t.targets[i], line_no);
                uint32_t b = parse_qubit(t.targets[i + 1], line_no);
                if (a == b) {
                    throw ParseError(line_no, "CX control equals target");
                }
                note_qubit(a);
                note_qubit(b);
                cur.gates.push_back({GateKind::CX, a, b});
            }
        } else if (name == "M" || name == "MR") {
            if (t.targets.empty()) {
                throw ParseError(line_no, name + " needs at least one target");
            }
            for (auto &tok : t.targets) {
                uint32_t q = parse_qubit(tok, line_no);
                note_qubit(q);
                GateOp g{name == "M" ? GateKind::M : GateKind::MR, q};
                g.meas_index = (int32_t)meas_count++;
                g.flip_prob = t.has_arg ? t.arg : 0.0;
                cur.gates.push_back(g);
            }
        } else if (name == "X_ERROR" || name == "Z_ERROR" || name == "DEPOLARIZE1") {
            if (!t.has_arg) {
                throw ParseError(line_no, name + " needs a probability argument");
            }
            NoiseKind k = name == "X_ERROR"     ? NoiseKind::X_ERROR
                          : name == "Z_ERROR"   ? NoiseKind::Z_ERROR
                                                : NoiseKind::DEPOLARIZE1;
            for (auto &tok : t.targets) {
                uint32_t q = parse_qubit(tok, line_no);
                note_qubit(q);
                cur.noise.push_back({k, t.arg, q});
            }
        } else if (name == "DEPOLARIZE2") {
            if (!t.has_arg) {
                throw ParseError(line_no, "DEPOLARIZE2 needs a probability argument");
            }
            if (t.targets.size() < 2 || t.targets.size() % 2) {
                throw ParseError(line_no, "DEPOLARIZE2 needs an even number of targets");
            }
            for (size_t i = 0; i < t.targets.size(); i += 2) {
                uint32_t a = parse_qubit(t.targets[i], line_no);
                uint32_t b = parse_qubit(t.targets[i + 1], line_no);
                note_qubit(a);
                note_qubit(b);
                cur.noise.push_back({NoiseKind::DEPOLARIZE2, t.arg, a, b});
            }
        } else if (name == "DETECTOR") {
            if (t.targets.empty()) {
                throw ParseError(line_no, "DETECTOR needs at least one record target");
            }
            std::vector<uint32_t> set;
            for (auto &tok : t.targets) {
                toggle_into(set, parse_rec(tok, meas_count, line_no));
            }
            if (set.empty()) {
                throw ParseError(line_no, "DETECTOR measurement set cancels to empty");
            }
            uint32_t id = (uint32_t)c.detectors.size();
            c.detectors.push_back({id, set});
            cur.annotations.push_back({false, id, std::move(set)});
        } else if (name == "OBSERVABLE_INCLUDE") {
            if (!t.has_arg) {
                throw ParseError(line_no, "OBSERVABLE_INCLUDE needs an index argument");
            }
            uint32_t id = (uint32_t)t.arg;
            if ((double)id != t.arg) {
                throw ParseError(line_no, "observable index must be an integer");
            }
            if (id > c.observables.size()) {
                throw ParseError(line_no, "observable indices must be dense");
            }
            if (id == c.observables.size()) {
                c.observables.push_back({id, {}});
            }
            std::vector<uint32_t> set;
            for (auto &tok : t.targets) {
                toggle_into(set, parse_rec(tok, meas_count, line_no));
            }
            for (uint32_t m : set) {
                toggle_into(c.observables[id].measurements, m);
            }
            cur.annotations.push_back({true, id, std::move(set)});
        } else {
            throw ParseError(line_no, "unsupported instruction '" + name + "'");
        }
    }
    if (!cur.gates.empty() || !cur.noise.empty() || !cur.annotations.empty()) {
        flush_layer();
    }
    c.num_qubits = any_qubit ? max_qubit + 1 : 0;
    c.num_measurements = meas_count;
    if (auto v = validate_layers(c)) {
        throw std::invalid_argument("layer " + std::to_string(v->layer) + ": " + v->message);
    }
    return c;
}

std::optional<Violation> validate_layers(const Circuit &c) {
    int32_t next_meas = 0;
    for (size_t i = 0; i < c.layers.size(); i++) {
        const Layer &layer = c.layers[i];
        std::unordered_map<uint32_t, const GateOp *> gate_of;
        for (const GateOp &g : layer.gates) {
            uint32_t qs[2] = {g.q0, g.q1};
            size_t nq = g.kind == GateKind::CX ? 2 : 1;
            for (size_t j = 0; j < nq; j++) {
                if (qs[j] >= c.num_qubits) {
                    return Violation{i, "qubit " + std::to_string(qs[j]) + " out of range"};
                }
                if (!gate_of.emplace(qs[j], &g).second) {
                    return Violation{i, "qubit " + std::to_string(qs[j]) + " used by two gates in one layer"};
                }
            }
            if (g.is_measurement()) {
                if (g.meas_index != next_meas++) {
                    return Violation{i, "measurement indices out of order"};
                }
                if (g.flip_prob < 0 || g.flip_prob > 1) {
                    return Violation{i, "measurement flip probability out of [0, 1]"};
                }
            }
        }
        for (const NoiseOp &nop : layer.noise) {
            if (nop.prob < 0 || nop.prob > 1) {
                return Violation{i, "noise probability out of [0, 1]"};
            }
            uint32_t qs[2] = {nop.q0, nop.q1};
            size_t nq = nop.kind == NoiseKind::DEPOLARIZE2 ? 2 : 1;
            for (size_t j = 0; j < nq; j++) {
                if (qs[j] >= c.num_qubits) {
                    return Violation{i, "noise qubit " + std::to_string(qs[j]) + " out of range"};
                }
            }
            if (nop.kind == NoiseKind::DEPOLARIZE2) {
                // Either the exact CX pair of this layer or a fully idle pair.
                auto a = gate_of.find(nop.q0);
                auto b = gate_of.find(nop.q1);
                bool idle_pair = a == gate_of.end() && b == gate_of.end();
                bool cx_pair = a != gate_of.end() && a->second->kind == GateKind::CX &&
                               a->second->q0 == nop.q0 && a->second->q1 == nop.q1;
                if (!idle_pair && !cx_pair) {
                    return Violation{
                        i, "DEPOLARIZE2 targets must form a CX (control, target) pair or an idle pair"};
                }
            }
        }
    }
    if ((uint32_t)next_meas != c.num_measurements) {
        return Violation{SIZE_MAX, "measurement count mismatch"};
    }
    for (size_t d = 0; d < c.detectors.size(); d++) {
        if (c.detectors[d].id != d) {
            return Violation{SIZE_MAX, "detector ids not dense"};
        }
        if (c.detectors[d].measurements.empty()) {
            return Violation{SIZE_MAX, "detector " + std::to_string(d) + " has empty measurement set"};
        }
        for (uint32_t m : c.detectors[d].measurements) {
            if (m >= c.num_measurements) {
                return Violation{SIZE_MAX, "detector " + std::to_string(d) + " references missing measurement"};
            }
        }
    }
    for (size_t o = 0; o < c.observables.size(); o++) {
        if (c.observables[o].id != o) {
            return Violation{SIZE_MAX, "observable ids not dense"};
        }
    }
    return std::nullopt;
}

std::string serialize_circuit(const Circuit &c) {
    std::ostringstream out;
    uint32_t meas_count = 0;
    for (size_t i = 0; i < c.layers.size(); i++) {
        const Layer &layer = c.layers[i];
        if (i) {
            out << "TICK\n";
        }
        for (const GateOp &g : layer.gates) {
            switch (g.kind) {
                case GateKind::H:
                    out << "H " << g.q0 << "\n";
                    break;
                case GateKind::R:
                    out << "R " << g.q0 << "\n";
                    break;
                case GateKind::CX:
                    out << "CX " << g.q0 << " " << g.q1 << "\n";
                    break;
                case GateKind::M:
                case GateKind::MR:
                    out << (g.kind == GateKind::M ? "M" : "MR");
                    if (g.flip_prob != 0) {
                        out << "(" << format_double(g.flip_prob) << ")";
                    }
                    out << " " << g.q0 << "\n";
                    meas_count++;
                    break;
            }
        }
        for (const NoiseOp &nop : layer.noise) {
            switch (nop.kind) {
                case NoiseKind::X_ERROR:
                    out << "X_ERROR(" << format_double(nop.prob) << ") " << nop.q0 << "\n";
                    break;
                case NoiseKind::Z_ERROR:
                    out << "Z_ERROR(" << format_double(nop.prob) << ") " << nop.q0 << "\n";
                    break;
                case NoiseKind::DEPOLARIZE1:
                    out << "DEPOLARIZE1(" << format_double(nop.prob) << ") " << nop.q0 << "\n";
                    break;
                case NoiseKind::DEPOLARIZE2:
                    out << "DEPOLARIZE2(" << format_double(nop.prob) << ") " << nop.q0 << " " << nop.q1
                        << "\n";
                    break;
            }
        }
        for (const Annotation &a : layer.annotations) {
            if (a.is_observable) {
                out << "OBSERVABLE_INCLUDE(" << a.id << ")";
            } else {
                out << "DETECTOR";
            }
            for (uint32_t m : a.measurements) {
                out << " rec[-" << (meas_count - m) << "]";
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace demc
