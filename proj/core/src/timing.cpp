#include "problock/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace problock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tolerance(double critical_delay) {
    return 1e-9 * std::max(1.0, std::abs(critical_delay));
}

double node_delay(const CircuitGraph& g, const DelayModel& m, std::span<const double> extra, NodeId v) {
    if (!g.is_gate(v)) return 0.0;
    return m.of(g.gate_type[v]) + (extra.empty() ? 0.0 : extra[v]);
}

}  // namespace

DelayModel parse_delay_table(std::string_view text) {
    DelayModel model;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;
        double value = 0;
        if (!(ls >> value)) throw std::invalid_argument("delay table line " + std::to_string(line_no) + ": missing delay");
        auto type = gate_type_from_keyword(name);
        if (!type) throw std::invalid_argument("delay table line " + std::to_string(line_no) + ": unknown gate '" + name + "'");
        if (!(value >= 0) || !std::isfinite(value)) {
            throw std::invalid_argument("delay table line " + std::to_string(line_no) + ": delay must be >= 0");
        }
        model.delay[static_cast<std::size_t>(*type)] = value;
    }
    return model;
}

std::string_view to_string(CpMode mode) {
    return mode == CpMode::StrictPaper ? "strict_paper" : "slack_aware";
}

TimingReport analyze_timing(const CircuitGraph& graph, const DelayModel& model, std::uint64_t cp_cap,
                            std::span<const double> extra_gate_delay) {
    const std::size_t n = graph.num_nodes();
    if (!extra_gate_delay.empty() && extra_gate_delay.size() != graph.num_gates) {
        throw std::invalid_argument("analyze_timing: extra_gate_delay must cover every gate");
    }
    TimingReport r;
    r.arrival.assign(n, 0.0);
    r.slack.assign(n, kInf);

    for (NodeId v : graph.topo) {
        if (graph.kind[v] == NodeKind::DffSource) {
            r.arrival[v] = model.of(GateType::Dff);
            continue;
        }
        double best = 0;
        for (NodeId u : graph.pred[v]) best = std::max(best, r.arrival[u]);
        r.arrival[v] = best + node_delay(graph, model, extra_gate_delay, v);
    }
    for (NodeId v = 0; v < n; ++v) {
        if (graph.is_sink(v)) r.critical_delay = std::max(r.critical_delay, r.arrival[v]);
    }

    std::vector<double> required(n, kInf);
    for (auto it = graph.topo.rbegin(); it != graph.topo.rend(); ++it) {
        const NodeId v = *it;
        if (graph.is_sink(v)) {
            required[v] = r.critical_delay;
        } else {
            for (NodeId w : graph.succ[v]) required[v] = std::min(required[v], required[w] - node_delay(graph, model, extra_gate_delay, w));
        }
        if (required[v] < kInf) r.slack[v] = std::max(0.0, required[v] - r.arrival[v]);
    }

    const double eps = tolerance(r.critical_delay);
    auto zero_slack = [&](NodeId v) { return r.slack[v] <= eps; };
    for (GateId g = 0; g < graph.num_gates; ++g) {
        if (graph.is_gate(g) && zero_slack(g)) r.critical_nodes.push_back(g);
    }

    // Count zero-slack paths along tight edges, saturating at the cap.
    std::vector<std::uint64_t> paths(n, 0);
    auto sat_add = [cp_cap](std::uint64_t a, std::uint64_t b) { return std::min(cp_cap, a + std::min(b, cp_cap)); };
    for (NodeId v : graph.topo) {
        if (!zero_slack(v)) continue;
        if (graph.is_source(v)) {
            paths[v] = std::min<std::uint64_t>(1, cp_cap);
            continue;
        }
        const double d = node_delay(graph, model, extra_gate_delay, v);
        for (NodeId u : graph.pred[v]) {
            if (zero_slack(u) && std::abs(r.arrival[u] + d - r.arrival[v]) <= eps) paths[v] = sat_add(paths[v], paths[u]);
        }
    }
    for (NodeId v = 0; v < n; ++v) {
        if (graph.is_sink(v) && zero_slack(v)) r.critical_path_count = sat_add(r.critical_path_count, paths[v]);
    }
    r.path_count_saturated = r.critical_path_count >= cp_cap;
    return r;
}

std::vector<GateId> remove_critical(std::span<const GateId> subset, const TimingReport& report, CpMode mode,
                                    double key_gate_delay) {
    const double eps = tolerance(report.critical_delay);
    std::vector<GateId> kept;
    kept.reserve(subset.size());
    for (GateId g : subset) {
        const bool drop = mode == CpMode::StrictPaper ? report.is_critical(g) : report.slack.at(g) + eps < key_gate_delay;
        if (!drop) kept.push_back(g);
    }
    return kept;
}

}  // namespace problock
