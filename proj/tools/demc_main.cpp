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

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "demc/adaptive.hpp"
#include "demc/codes.hpp"
#include "demc/compile.hpp"
#include "demc/frame.hpp"
#include "demc/util.hpp"

namespace {

using namespace demc;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << text;
}

/// RFC 4180: quote a field when it contains a comma, quote or line break.
std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

CorrelationLevel to_level(int level) {
    return (CorrelationLevel)level;
}

int cmd_compile(const std::string &input, int level, const std::string &output,
                uint32_t threads) {
    Circuit c = parse_circuit(read_file(input));
    CompileStats stats;
    Dem d = compile_circuit(c, to_level(level), threads, &stats);
    write_output(output, serialize_dem(d));
    std::cerr << "detectors=" << d.num_detectors << " observables=" << d.num_observables
              << " hyperedges=" << d.hyperedges.size() << " time_ms="
              << format_double((double)stats.total_ns / 1e6) << "\n";
    return 0;
}

int cmd_verify(const std::string &input, int level, uint64_t cap) {
    Circuit c = parse_circuit(read_file(input));
    uint64_t volume = (uint64_t)c.num_qubits * c.layers.size();
    if (volume > cap) {
        std::cerr << "circuit volume " << volume << " exceeds oracle cap " << cap << "\n";
        return 2;
    }
    Dem pipeline = compile_circuit(c, to_level(level));
    Dem oracle = build_dem_oracle(c, to_level(level));
    std::string diff;
    if (!dem_close(pipeline, oracle, 1e-12, &diff)) {
        std::cerr << "pipeline and oracle differ: " << diff << "\n";
        return 1;
    }
    std::cerr << "verified: " << pipeline.hyperedges.size() << " hyperedges match the oracle\n";
    return 0;
}

int cmd_gen(const std::string &code, uint32_t distance, uint32_t rounds, double noise,
            const std::string &output) {
    NoiseModel nm{noise};
    Circuit c;
    if (code == "repetition") {
        c = gen_repetition(distance, rounds, nm);
    } else {
        c = gen_surface(distance, rounds, nm);
    }
    write_output(output, serialize_circuit(c));
    return 0;
}

int cmd_bench(const std::string &code, uint32_t distance, uint32_t rounds, int level,
              uint32_t iters, uint32_t threads, const std::string &output) {
    NoiseModel nm{0.001};
    Circuit c = code == "repetition" ? gen_repetition(distance, rounds, nm)
                                     : gen_surface(distance, rounds, nm);
    size_t hyperedges = 0;
    std::vector<double> per_round_ms;
    for (uint32_t i = 0; i <= iters; i++) {  // iteration 0 is warm-up
        CompileStats stats;
        Dem d = compile_circuit(c, to_level(level), threads, &stats);
        hyperedges = d.hyperedges.size();
        if (i > 0) {
            per_round_ms.push_back((double)stats.total_ns / 1e6 / rounds);
        }
    }
    double mean = 0;
    for (double v : per_round_ms) {
        mean += v;
    }
    mean /= (double)per_round_ms.size();
    double var = 0;
    for (double v : per_round_ms) {
        var += (v - mean) * (v - mean);
    }
    double stddev = per_round_ms.size() > 1 ? std::sqrt(var / ((double)per_round_ms.size() - 1)) : 0;
    double total_s = mean * rounds * iters / 1e3;
    double throughput = (double)hyperedges * rounds * iters / total_s;

    std::ostringstream csv;
    std::string label = code + "_d" + std::to_string(distance) + "_r" + std::to_string(rounds);
    csv << "label,level,iterations,mean_round_ms,stddev_round_ms,hyperedges,hyperedges_per_s\n";
    csv << csv_field(label) << "," << level << "," << iters << "," << format_double(mean) << ","
        << format_double(stddev) << "," << hyperedges << "," << format_double(throughput) << "\n";
    write_output(output, csv.str());
    return 0;
}

int cmd_dem_diff(const std::string &a_path, const std::string &b_path, double tolerance) {
    Dem a = parse_dem(read_file(a_path));
    Dem b = parse_dem(read_file(b_path));
    std::string diff;
    if (dem_close(a, b, tolerance, &diff)) {
        std::cerr << "equal within tolerance " << format_double(tolerance) << "\n";
        return 0;
    }
    std::cerr << diff << "\n";
    return 1;
}

int cmd_adaptive_run(uint32_t distance, uint32_t rounds, double noise, uint32_t shots,
                     uint64_t seed, uint32_t refresh, uint32_t threads,
                     const std::string &output) {
    AdaptiveConfig cfg;
    cfg.d = distance;
    cfg.rounds = rounds;
    cfg.refresh = refresh;
    cfg.p = noise;
    cfg.seed = seed;

    std::vector<ShotRecord> records(shots);
    if (threads <= 1) {
        for (uint32_t s = 0; s < shots; s++) {
            records[s] = run_adaptive_shot(cfg, s);
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<uint32_t> next{0};
        for (uint32_t t = 0; t < threads; t++) {
            pool.emplace_back([&] {
                for (uint32_t s = next++; s < shots; s = next++) {
                    records[s] = run_adaptive_shot(cfg, s);
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    std::ostringstream csv;
    csv << "shot,triggered_per_round,detectors,hyperedges,compile_ns,weight_histogram\n";
    for (uint32_t s = 0; s < shots; s++) {
        const ShotRecord &rec = records[s];
        std::string trig;
        for (size_t r = 0; r < rec.triggered_per_round.size(); r++) {
            if (r) {
                trig += ';';
            }
            trig += std::to_string(rec.triggered_per_round[r]);
        }
        std::map<size_t, size_t> hist;  // detector count per hyperedge -> frequency
        for (const Hyperedge &e : rec.dem.hyperedges) {
            hist[e.detectors.size()]++;
        }
        std::string hist_s;
        for (auto &[w, n] : hist) {
            if (!hist_s.empty()) {
                hist_s += ' ';
            }
            hist_s += std::to_string(w) + ":" + std::to_string(n);
        }
        csv << s << "," << csv_field(trig) << "," << rec.circuit.detectors.size() << ","
            << rec.dem.hyperedges.size() << "," << rec.stats.total_ns << ","
            << csv_field(hist_s) << "\n";
    }
    write_output(output, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"JIT compiler from syndrome-measurement circuits to detector error models"};
    app.require_subcommand(1);

    int level = 0;
    uint32_t distance = 3, rounds = 1, iters = 10, threads = 1, shots = 1, refresh = 0;
    uint64_t seed = 0, cap = 20000;
    double noise = 0.001, tolerance = 1e-12;
    std::string input, output, code, a_path, b_path;

    auto *compile = app.add_subcommand("compile", "compile a circuit file to a DEM");
    compile->add_option("input", input)->required();
    compile->add_option("--level", level)->check(CLI::Range(0, 2));
    compile->add_option("--threads", threads);
    compile->add_option("-o,--output", output);

    auto *verify = app.add_subcommand("verify", "compare the pipeline against the forward oracle");
    verify->add_option("input", input)->required();
    verify->add_option("--level", level)->check(CLI::Range(0, 2));
    verify->add_option("--cap", cap);

    auto *gen = app.add_subcommand("gen", "generate a memory-experiment circuit");
    gen->add_option("code", code)->required()->check(CLI::IsMember({"repetition", "surface"}));
    gen->add_option("--distance", distance);
    gen->add_option("--rounds", rounds);
    gen->add_option("--noise", noise);
    gen->add_option("-o,--output", output);

    auto *bench = app.add_subcommand("bench", "benchmark compilation, CSV output");
    bench->add_option("code", code)->required()->check(CLI::IsMember({"repetition", "surface"}));
    bench->add_option("--distance", distance);
    bench->add_option("--rounds", rounds);
    bench->add_option("--level", level)->check(CLI::Range(0, 2));
    bench->add_option("--iters", iters);
    bench->add_option("--threads", threads);
    bench->add_option("-o,--output", output);

    auto *diff = app.add_subcommand("dem-diff", "compare two DEM files");
    diff->add_option("a", a_path)->required();
    diff->add_option("b", b_path)->required();
    diff->add_option("--tolerance", tolerance);

    auto *adaptive = app.add_subcommand("adaptive", "adaptive-circuit workbench");
    auto *run = adaptive->add_subcommand("run", "per-shot JIT compilation, CSV output");
    run->add_option("--distance", distance);
    run->add_option("--rounds", rounds = 0);
    run->add_option("--noise", noise);
    run->add_option("--shots", shots);
    run->add_option("--seed", seed);
    run->add_option("--refresh", refresh);
    run->add_option("--threads", threads);
    run->add_option("-o,--output", output);
    adaptive->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compile) {
            return cmd_compile(input, level, output, threads);
        }
        if (*verify) {
            return cmd_verify(input, level, cap);
        }
        if (*gen) {
            return cmd_gen(code, distance, rounds, noise, output);
        }
        if (*bench) {
            return cmd_bench(code, distance, rounds, level, iters, threads, output);
        }
        if (*diff) {
            return cmd_dem_diff(a_path, b_path, tolerance);
        }
        if (*run) {
            return cmd_adaptive_run(distance, rounds, noise, shots, seed, refresh, threads,
                                    output);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
