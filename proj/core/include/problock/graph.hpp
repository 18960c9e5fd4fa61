#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "problock/netlist.hpp"

namespace problock {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t {
    Gate,         // combinational gate
    InputSource,  // primary or key input
    DffSource,    // DFF output (the DFF gate node itself)
    OutputSink,   // primary output pin
    DffSink,      // DFF D pin
};

/// DAG view of a netlist.
///
/// Node ids: [0, num_gates) are the netlist's gates in netlist order (a DFF gate
/// is a DffSource node), followed by one InputSource per primary/key input, one
/// OutputSink per primary output and one DffSink per DFF. The edge from a DFF's
/// D driver into the DFF is replaced by an edge into its DffSink and recorded
/// in dff_cut_edges.
struct CircuitGraph {
    std::vector<NodeKind> kind;
    std::vector<GateType> gate_type;  // per gate node
    std::vector<std::vector<NodeId>> succ;
    std::vector<std::vector<NodeId>> pred;
    std::vector<std::pair<NodeId, NodeId>> dff_cut_edges;
    std::vector<NodeId> topo;
    std::size_t num_gates = 0;

    std::size_t num_nodes() const noexcept { return kind.size(); }
    bool is_gate(NodeId v) const noexcept { return kind[v] == NodeKind::Gate; }
    bool is_source(NodeId v) const noexcept {
        return kind[v] == NodeKind::InputSource || kind[v] == NodeKind::DffSource;
    }
    bool is_sink(NodeId v) const noexcept { return kind[v] == NodeKind::OutputSink || kind[v] == NodeKind::DffSink; }
    std::size_t num_edges() const;
};

CircuitGraph build_graph(const Netlist& netlist);

/// Per-node gate counts of the longest source->node and node->sink paths.
/// Both include the node itself when it is a gate. Nodes that cannot reach a
/// sink have to_sink = -1.
struct PathDepths {
    std::vector<int> from_source;
    std::vector<int> to_sink;

    /// Gate count of the longest source->sink path through v, or -1.
    int through(NodeId v, bool is_gate) const {
        if (to_sink[v] < 0) return -1;
        return from_source[v] + to_sink[v] - (is_gate ? 1 : 0);
    }
};

PathDepths path_depths(const CircuitGraph& graph);

/// Maximum number of gates on any source->sink path.
int longest_path_length(const CircuitGraph& graph);

struct LongestPathSubset {
    std::vector<GateId> nodes;
    int max_path_length = 0;
    int multiplier = 0;
    /// Shortest path-length class admitted before the stop threshold was met.
    int min_admitted_length = 0;
    /// True when every eligible gate was admitted without passing the threshold.
    bool exhausted = false;
};

/// Union of the gates on the longest path-length classes, admitted one whole
/// class at a time in decreasing length until the subset holds more than
/// multiplier * key_length gates. Ties inside a class are in gate-id order.
///
/// With `projection` (unrolled gate -> original gate), admitted gates are mapped
/// and deduplicated, and the threshold applies to the projected count.
LongestPathSubset longest_path_subset(const CircuitGraph& graph, int key_length, int multiplier,
                                      std::span<const GateId> projection = {});

/// Two-frame time expansion of a sequential netlist.
struct UnrolledNetlist {
    Netlist netlist;
    /// Original gate id of every unrolled gate.
    std::vector<GateId> origin;
    /// Frame (0 or 1) of every unrolled gate.
    std::vector<std::uint8_t> frame;
    /// Set when the input had no DFFs and was returned unchanged.
    bool identity = false;
};

/// Frame 0 reads the initial state from new inputs `__pl_f0_<q>`; frame 1 reads
/// frame 0's D values in place of each DFF output. Frame-0 copies of inputs and
/// wires carry the `__pl_f0_` prefix; frame 1 keeps the original names. Outputs
/// are the frame-0 outputs, the frame-1 outputs, and the frame-1 D values (next
/// state) in DFF order.
UnrolledNetlist unroll_once(const Netlist& netlist);

inline constexpr std::string_view kFrame0Prefix = "__pl_f0_";

}  // namespace problock
