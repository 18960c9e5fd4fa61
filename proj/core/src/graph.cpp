#include "problock/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace problock {

std::size_t CircuitGraph::num_edges() const {
    std::size_t e = 0;
    for (const auto& s : succ) e += s.size();
    return e;
}

CircuitGraph build_graph(const Netlist& netlist) {
    CircuitGraph g;
    const std::size_t num_gates = netlist.num_gates();
    const std::size_t num_inputs = netlist.primary_inputs().size() + netlist.key_inputs().size();
    const std::size_t num_pos = netlist.primary_outputs().size();
    const std::size_t num_dffs = netlist.dffs().size();
    const std::size_t n = num_gates + num_inputs + num_pos + num_dffs;

    g.num_gates = num_gates;
    g.kind.resize(n);
    g.succ.resize(n);
    g.pred.resize(n);
    g.gate_type.reserve(num_gates);
    for (std::size_t i = 0; i < num_gates; ++i) {
        const auto t = netlist.gates()[i].type;
        g.gate_type.push_back(t);
        g.kind[i] = t == GateType::Dff ? NodeKind::DffSource : NodeKind::Gate;
    }
    const NodeId first_input = static_cast<NodeId>(num_gates);
    const NodeId first_po = static_cast<NodeId>(first_input + num_inputs);
    const NodeId first_dff_sink = static_cast<NodeId>(first_po + num_pos);
    std::fill(g.kind.begin() + first_input, g.kind.begin() + first_po, NodeKind::InputSource);
    std::fill(g.kind.begin() + first_po, g.kind.begin() + first_dff_sink, NodeKind::OutputSink);
    std::fill(g.kind.begin() + first_dff_sink, g.kind.end(), NodeKind::DffSink);

    auto node_of = [&](SignalId s) -> NodeId {
        if (auto d = netlist.driver(s)) return *d;
        return first_input + s;
    };
    auto add_edge = [&](NodeId u, NodeId v) {
        auto& out = g.succ[u];
        if (std::find(out.begin(), out.end(), v) != out.end()) return;
        out.push_back(v);
        g.pred[v].push_back(u);
    };

    std::size_t dff_index = 0;
    for (GateId gate = 0; gate < num_gates; ++gate) {
        if (g.gate_type[gate] == GateType::Dff) {
            const NodeId driver = node_of(netlist.fanin(gate)[0]);
            const NodeId sink = first_dff_sink + static_cast<NodeId>(dff_index++);
            add_edge(driver, sink);
            g.dff_cut_edges.emplace_back(driver, gate);
            continue;
        }
        for (SignalId s : netlist.fanin(gate)) add_edge(node_of(s), gate);
    }
    for (std::size_t i = 0; i < num_pos; ++i) {
        add_edge(node_of(netlist.output_signals()[i]), first_po + static_cast<NodeId>(i));
    }

    // Kahn; ties resolved by node id so the order is reproducible.
    std::vector<std::uint32_t> indeg(n);
    std::deque<NodeId> ready;
    for (NodeId v = 0; v < n; ++v) {
        indeg[v] = static_cast<std::uint32_t>(g.pred[v].size());
        if (indeg[v] == 0) ready.push_back(v);
    }
    g.topo.reserve(n);
    while (!ready.empty()) {
        NodeId v = ready.front();
        ready.pop_front();
        g.topo.push_back(v);
        for (NodeId w : g.succ[v]) {
            if (--indeg[w] == 0) ready.push_back(w);
        }
    }
    if (g.topo.size() != n) throw std::logic_error("build_graph: netlist contains a combinational cycle");
    return g;
}

PathDepths path_depths(const CircuitGraph& graph) {
    const std::size_t n = graph.num_nodes();
    PathDepths d;
    d.from_source.assign(n, 0);
    d.to_sink.assign(n, -1);
    for (NodeId v : graph.topo) {
        int best = 0;
        for (NodeId u : graph.pred[v]) best = std::max(best, d.from_source[u]);
        d.from_source[v] = best + (graph.is_gate(v) ? 1 : 0);
    }
    for (auto it = graph.topo.rbegin(); it != graph.topo.rend(); ++it) {
        const NodeId v = *it;
        if (graph.is_sink(v)) {
            d.to_sink[v] = 0;
            continue;
        }
        int best = -1;
        for (NodeId w : graph.succ[v]) best = std::max(best, d.to_sink[w]);
        if (best >= 0) d.to_sink[v] = best + (graph.is_gate(v) ? 1 : 0);
    }
    return d;
}

int longest_path_length(const CircuitGraph& graph) {
    const auto d = path_depths(graph);
    int best = 0;
    for (NodeId v = 0; v < graph.num_nodes(); ++v) {
        if (graph.is_sink(v)) best = std::max(best, d.from_source[v]);
    }
    return best;
}

LongestPathSubset longest_path_subset(const CircuitGraph& graph, int key_length, int multiplier,
                                      std::span<const GateId> projection) {
    if (key_length < 1) throw std::invalid_argument("longest_path_subset: key_length must be >= 1");
    if (multiplier < 1) throw std::invalid_argument("longest_path_subset: multiplier must be >= 1");
    if (!projection.empty() && projection.size() != graph.num_gates) {
        throw std::invalid_argument("longest_path_subset: projection must cover every gate");
    }

    const auto depths = path_depths(graph);
    std::map<int, std::vector<GateId>, std::greater<>> classes;
    for (NodeId v = 0; v < graph.num_gates; ++v) {
        if (!graph.is_gate(v)) continue;
        const int len = depths.through(v, true);
        if (len > 0) classes[len].push_back(v);
    }
    if (classes.empty()) throw std::runtime_error("longest_path_subset: graph has no source-to-sink path through a gate");

    LongestPathSubset out;
    out.multiplier = multiplier;
    out.max_path_length = classes.begin()->first;
    const std::size_t threshold = static_cast<std::size_t>(key_length) * static_cast<std::size_t>(multiplier);

    std::vector<bool> seen(projection.empty() ? graph.num_gates : *std::max_element(projection.begin(), projection.end()) + 1);
    for (const auto& [len, members] : classes) {
        for (GateId v : members) {  // members are ascending by construction
            const GateId id = projection.empty() ? v : projection[v];
            if (seen[id]) continue;
            seen[id] = true;
            out.nodes.push_back(id);
        }
        out.min_admitted_length = len;
        if (out.nodes.size() > threshold) return out;
    }
    out.exhausted = true;
    return out;
}

UnrolledNetlist unroll_once(const Netlist& netlist) {
    UnrolledNetlist out{netlist, {}, {}, false};
    if (!netlist.is_sequential()) {
        out.identity = true;
        out.origin.resize(netlist.num_gates());
        std::iota(out.origin.begin(), out.origin.end(), GateId{0});
        out.frame.assign(netlist.num_gates(), 0);
        return out;
    }

    const auto& gates = netlist.gates();
    auto name0 = [](const std::string& w) { return std::string(kFrame0Prefix) + w; };
    auto is_key = [&](const std::string& w) {
        auto s = netlist.find_signal(w);
        return s && netlist.is_key_input(*s);
    };
    auto frame0 = [&](const std::string& w) { return is_key(w) ? w : name0(w); };
    auto frame1 = [&](const std::string& w) {
        auto g = netlist.find_gate(w);
        if (g && gates[*g].type == GateType::Dff) return frame0(gates[*g].inputs[0]);
        return w;
    };

    NetlistParts parts;
    parts.name = netlist.name();
    parts.key_inputs = netlist.key_inputs();
    for (const auto& pi : netlist.primary_inputs()) parts.primary_inputs.push_back(name0(pi));
    for (GateId d : netlist.dffs()) parts.primary_inputs.push_back(name0(gates[d].output));
    for (const auto& pi : netlist.primary_inputs()) parts.primary_inputs.push_back(pi);

    for (const auto& po : netlist.primary_outputs()) parts.primary_outputs.push_back(frame0(po));
    for (const auto& po : netlist.primary_outputs()) parts.primary_outputs.push_back(frame1(po));
    for (GateId d : netlist.dffs()) parts.primary_outputs.push_back(frame1(gates[d].inputs[0]));

    for (int f = 0; f < 2; ++f) {
        for (GateId g = 0; g < gates.size(); ++g) {
            const Gate& gate = gates[g];
            if (gate.type == GateType::Dff) continue;
            Gate copy{gate.type, f == 0 ? name0(gate.output) : gate.output, {}};
            for (const auto& in : gate.inputs) copy.inputs.push_back(f == 0 ? frame0(in) : frame1(in));
            parts.gates.push_back(std::move(copy));
            out.origin.push_back(g);
            out.frame.push_back(static_cast<std::uint8_t>(f));
        }
    }
    out.netlist = Netlist::build(std::move(parts), BuildOptions{.allow_reserved_names = true});
    return out;
}

}  // namespace problock
