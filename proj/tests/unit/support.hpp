#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "problock/bench_io.hpp"
#include "problock/netlist.hpp"

namespace problock::testing {

inline std::filesystem::path data_path(const std::string& relative) {
    return std::filesystem::path(PROBLOCK_DATA_DIR) / relative;
}

inline Netlist load(const std::string& relative) { return read_bench_file(data_path(relative)); }

inline Netlist parse(const std::string& text) { return parse_bench(text, "t"); }

// Truth of a gate written out longhand; kept apart from the library's evaluator.
inline bool oracle_gate(GateType t, const std::vector<bool>& in) {
    std::size_t ones = 0;
    for (bool b : in) ones += b;
    switch (t) {
        case GateType::And: return ones == in.size();
        case GateType::Nand: return ones != in.size();
        case GateType::Or: return ones > 0;
        case GateType::Nor: return ones == 0;
        case GateType::Xor: return ones % 2 == 1;
        case GateType::Xnor: return ones % 2 == 0;
        case GateType::Not: return !in[0];
        case GateType::Buf:
        case GateType::Dff: return in[0];
    }
    return false;
}

inline constexpr GateType kMultiInputTypes[] = {GateType::And, GateType::Nand, GateType::Or,
                                               GateType::Nor, GateType::Xor,  GateType::Xnor};

// Random combinational DAG: each gate reads 1..max_fanin earlier wires. Every
// sink-less gate becomes an output, plus a random sample of the rest.
inline Netlist random_dag(std::mt19937_64& rng, int num_inputs, int num_gates, int max_fanin = 3) {
    NetlistParts p;
    p.name = "dag";
    std::vector<std::string> wires;
    for (int i = 0; i < num_inputs; ++i) {
        p.primary_inputs.push_back("i" + std::to_string(i));
        wires.push_back(p.primary_inputs.back());
    }
    std::map<std::string, int> uses;
    for (int g = 0; g < num_gates; ++g) {
        const int fanin = std::uniform_int_distribution<int>(1, max_fanin)(rng);
        Gate gate;
        gate.output = "g" + std::to_string(g);
        if (fanin == 1) {
            gate.type = rng() % 2 ? GateType::Not : GateType::Buf;
        } else {
            gate.type = kMultiInputTypes[rng() % 6];
        }
        for (int k = 0; k < fanin; ++k) {
            const auto& w = wires[std::uniform_int_distribution<std::size_t>(0, wires.size() - 1)(rng)];
            gate.inputs.push_back(w);
            ++uses[w];
        }
        wires.push_back(gate.output);
        p.gates.push_back(std::move(gate));
    }
    for (const auto& g : p.gates) {
        if (!uses.count(g.output) || rng() % 4 == 0) p.primary_outputs.push_back(g.output);
    }
    return Netlist::build(std::move(p));
}

// Fanout-free circuit: every primary input and gate output is read exactly once.
inline Netlist random_tree(std::mt19937_64& rng, int num_inputs) {
    NetlistParts p;
    p.name = "tree";
    std::vector<std::string> pool;
    for (int i = 0; i < num_inputs; ++i) {
        p.primary_inputs.push_back("i" + std::to_string(i));
        pool.push_back(p.primary_inputs.back());
    }
    int next = 0;
    auto take = [&]() {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
        std::string w = pool[k];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        return w;
    };
    while (pool.size() > 1 || next == 0) {
        Gate gate;
        gate.output = "g" + std::to_string(next++);
        if (rng() % 5 == 0 || pool.size() == 1) {
            gate.type = rng() % 2 ? GateType::Not : GateType::Buf;
            gate.inputs.push_back(take());
        } else {
            gate.type = kMultiInputTypes[rng() % 6];
            const std::size_t fanin = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(4, pool.size()))(rng);
            for (std::size_t k = 0; k < fanin; ++k) gate.inputs.push_back(take());
        }
        pool.push_back(gate.output);
        p.gates.push_back(std::move(gate));
    }
    p.primary_outputs.push_back(pool.front());
    return Netlist::build(std::move(p));
}

// Random sequential circuit: a random DAG whose extra inputs are fed back from DFFs.
inline Netlist random_sequential(std::mt19937_64& rng, int num_inputs, int num_dffs, int num_gates) {
    Netlist dag = random_dag(rng, num_inputs + num_dffs, num_gates);
    NetlistParts p = dag.parts();
    p.name = "seq";
    p.primary_inputs.resize(static_cast<std::size_t>(num_inputs));
    for (int d = 0; d < num_dffs; ++d) {
        const auto& src = p.gates[std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(num_gates) - 1)(rng)];
        p.gates.push_back(Gate{GateType::Dff, "i" + std::to_string(num_inputs + d), {src.output}});
    }
    return Netlist::build(std::move(p));
}

// Recursive evaluation by wire name, straight from the gate list.
class NaiveEvaluator {
public:
    explicit NaiveEvaluator(const Netlist& n) : n_(n) {
        for (const auto& g : n.gates()) by_output_[g.output] = &g;
    }

    std::map<std::string, bool> outputs(const std::map<std::string, bool>& sources) {
        cache_ = sources;
        std::map<std::string, bool> out;
        for (const auto& po : n_.primary_outputs()) out[po] = value(po);
        return out;
    }

    bool value(const std::string& wire) {
        if (auto it = cache_.find(wire); it != cache_.end()) return it->second;
        const Gate& g = *by_output_.at(wire);
        std::vector<bool> in;
        for (const auto& w : g.inputs) in.push_back(value(w));
        return cache_[wire] = oracle_gate(g.type, in);
    }

private:
    const Netlist& n_;
    std::map<std::string, const Gate*> by_output_;
    std::map<std::string, bool> cache_;
};

// Every source->sink gate path of a combinational netlist, by explicit DFS.
inline std::vector<std::vector<std::string>> enumerate_paths(const Netlist& n) {
    std::map<std::string, std::vector<std::string>> readers;
    for (const auto& g : n.gates()) {
        for (const auto& in : g.inputs) readers[in].push_back(g.output);
    }
    std::map<std::string, int> po_count;
    for (const auto& po : n.primary_outputs()) ++po_count[po];

    std::vector<std::vector<std::string>> paths;
    std::vector<std::string> stack;
    std::function<void(const std::string&)> walk = [&](const std::string& w) {
        stack.push_back(w);
        for (int k = 0; k < po_count[w]; ++k) paths.push_back(stack);
        std::vector<std::string> next = readers[w];
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (const auto& r : next) walk(r);
        stack.pop_back();
    };
    for (const auto& pi : n.primary_inputs()) {
        std::vector<std::string> next = readers[pi];
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        for (const auto& r : next) walk(r);
    }
    return paths;
}

}  // namespace problock::testing
