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

// Rewrites every fixtures/<name>/expected.dem from the forward-propagation
// oracle. Aborts without writing if the main pipeline disagrees with the
// oracle, so a bad golden can never be frozen.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "demc/compile.hpp"
#include "demc/frame.hpp"

namespace fs = std::filesystem;
using namespace demc;

static std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int main(int argc, char **argv) {
    fs::path root = argc > 1 ? argv[1] : "fixtures";
    int status = 0;
    for (const auto &entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) {
            continue;
        }
        fs::path dir = entry.path();
        try {
            Circuit c = parse_circuit(read_file(dir / "circuit.txt"));
            int level = std::stoi(read_file(dir / "level"));
            Dem oracle = build_dem_oracle(c, (CorrelationLevel)level);
            Dem pipeline = compile_circuit(c, (CorrelationLevel)level);
            std::string diff;
            if (!dem_close(pipeline, oracle, 1e-12, &diff)) {
                std::cerr << dir.filename().string() << ": pipeline/oracle divergence, "
                          << "golden not written: " << diff << "\n";
                status = 1;
                continue;
            }
            std::ofstream out(dir / "expected.dem", std::ios::binary);
            out << serialize_dem(oracle);
            std::cerr << dir.filename().string() << ": " << oracle.hyperedges.size()
                      << " hyperedges\n";
        } catch (const std::exception &e) {
            std::cerr << dir.filename().string() << ": " << e.what() << "\n";
            status = 1;
        }
    }
    return status;
}
