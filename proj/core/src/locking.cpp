#include "problock/locking.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace problock {

namespace {

struct TableRow {
    std::string_view name;
    int key_size;
};

// Key sizes of the published constraint-correlation table.
constexpr std::array<TableRow, 25> kKeyTable = {{
    {"c432", 16},    {"c499", 16},     {"c1355", 32},   {"c1908", 64},    {"c2670", 64},
    {"c3540", 128},  {"c5315", 128},   {"c7552", 256},  {"s298", 8},      {"s344", 8},
    {"s382", 8},     {"s386", 8},      {"s400", 8},     {"s444", 8},      {"s526", 8},
    {"s641", 8},     {"s713", 8},      {"s838", 16},    {"s1238a", 32},   {"s1488", 32},
    {"s5378a", 64},  {"s9234a", 128},  {"s13207a", 256}, {"s15850a", 256}, {"s38584", 256},
}};

std::string fmt_double(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

}  // namespace

void LockConfig::validate() const {
    if (key_length && *key_length < 1) throw std::invalid_argument("key_length must be >= 1");
    if (lp_multiplier < 1) throw std::invalid_argument("lp_multiplier must be >= 1");
    if (!(ld_threshold > 0.0 && ld_threshold <= 1.0)) throw std::invalid_argument("ld_threshold must be in (0, 1]");
    if (dff_iters < 1) throw std::invalid_argument("dff_iters must be >= 1");
    if (cp_cap < 1) throw std::invalid_argument("cp_cap must be >= 1");
    for (double d : delays.delay) {
        if (!(d >= 0.0)) throw std::invalid_argument("gate delays must be >= 0");
    }
}

std::optional<int> table_key_length(std::string_view benchmark) {
    for (const auto& row : kKeyTable) {
        if (row.name == benchmark) return row.key_size;
    }
    // s13207 matches the s13207a row.
    for (const auto& row : kKeyTable) {
        if (row.name.size() == benchmark.size() + 1 && row.name.starts_with(benchmark) && row.name.back() == 'a') {
            return row.key_size;
        }
    }
    return std::nullopt;
}

int default_key_length(std::size_t total_nodes, std::string_view benchmark) {
    if (auto k = table_key_length(benchmark)) return *k;
    int k = 1;
    while (static_cast<std::size_t>(k) * 16 < total_nodes) k *= 2;
    return std::clamp(k, 8, 256);
}

std::string_view to_string(RelaxationEvent::Kind kind) {
    switch (kind) {
        case RelaxationEvent::Kind::LpMultiplier: return "lp_multiplier";
        case RelaxationEvent::Kind::LdThreshold: return "ld_threshold";
        case RelaxationEvent::Kind::RankNcpByBias: return "rank_ncp_by_bias";
        case RelaxationEvent::Kind::DropCriticalPath: return "drop_critical_path";
        case RelaxationEvent::Kind::DropTimingGuard: return "drop_timing_guard";
    }
    return "unknown";
}

ConstraintChain run_chain(const Netlist& netlist, const LockConfig& config) {
    config.validate();
    ConstraintChain chain;
    chain.total_nodes = count_nodes(netlist);
    chain.key_length = config.key_length.value_or(default_key_length(chain.total_nodes, netlist.name()));
    const int k = chain.key_length;
    const auto needed = static_cast<std::size_t>(k);

    // Path constraints see the once-unrolled circuit; timing uses DFF-cut boundaries.
    const UnrolledNetlist unrolled = unroll_once(netlist);
    const CircuitGraph lp_graph = build_graph(unrolled.netlist);
    const std::span<const GateId> projection =
        unrolled.identity ? std::span<const GateId>{} : std::span<const GateId>{unrolled.origin};
    const CircuitGraph graph = build_graph(netlist);
    const TimingReport timing = analyze_timing(graph, config.delays, config.cp_cap);
    chain.lp_length = longest_path_length(lp_graph);

    // Critical delay may grow by at most one key gate in strict mode and not at all in slack-aware mode.
    const double kd = config.delays.key_gate_delay();
    const double limit = timing.critical_delay + (config.cp_mode == CpMode::StrictPaper ? kd : 0.0);
    const double eps = 1e-9 * std::max(1.0, limit);
    auto select = [&](const std::vector<GateId>& pool, bool guarded) {
        if (!guarded) return select_biased(netlist, pool, needed, config.input_probabilities, config.dff_iters);
        std::vector<double> extra(graph.num_gates, 0.0);
        TimingReport current = timing;
        auto admit = [&](GateId g) {
            if (current.critical_delay - current.slack[g] + kd > limit + eps) return false;
            extra[g] = kd;
            current = analyze_timing(graph, config.delays, 1, extra);
            return true;
        };
        return select_biased(netlist, pool, needed, config.input_probabilities, config.dff_iters, admit);
    };
    auto relax = [&](RelaxationEvent::Kind kind, std::string detail) {
        chain.relaxations.push_back({kind, std::move(detail)});
    };

    int multiplier = config.lp_multiplier;
    int ld_steps = 0;
    double threshold = config.ld_threshold;
    bool rank_ncp = false, drop_cp = false, guarded = true;
    LongestPathSubset lp;
    std::vector<GateId> ncp, ld;
    BiasSelection sel;
    for (;;) {
        lp = longest_path_subset(lp_graph, k, multiplier, projection);
        if (lp.exhausted && lp.nodes.size() < needed) {
            throw std::runtime_error("circuit '" + netlist.name() + "' has only " + std::to_string(lp.nodes.size()) +
                                     " lockable gates for a " + std::to_string(k) + "-bit key");
        }
        ncp = drop_cp ? lp.nodes : remove_critical(lp.nodes, timing, config.cp_mode, kd);
        ld = rank_ncp ? ncp : low_dependent_filter(ncp, netlist, threshold);
        std::string shortfall = "LD had " + std::to_string(ld.size()) + " of " + std::to_string(k) + " nodes";
        if (ld.size() >= needed) {
            sel = select(ld, guarded);
            if (sel.nodes.size() == needed) break;
            shortfall = "timing guard admitted " + std::to_string(sel.nodes.size()) + " of " + std::to_string(k) + " nodes";
        }

        if (!lp.exhausted) {
            ++multiplier;
            relax(RelaxationEvent::Kind::LpMultiplier, "lp_multiplier " + std::to_string(multiplier - 1) + " -> " +
                                                           std::to_string(multiplier) + " (" + shortfall + ")");
        } else if (!rank_ncp && threshold < 1.0) {
            const double raised = std::min(1.0, config.ld_threshold + 0.1 * ++ld_steps);
            relax(RelaxationEvent::Kind::LdThreshold,
                  "ld_threshold " + fmt_double(threshold) + " -> " + fmt_double(raised) + " (" + shortfall + ")");
            threshold = raised;
        } else if (!rank_ncp) {
            rank_ncp = true;
            relax(RelaxationEvent::Kind::RankNcpByBias, "LD stage bypassed (" + shortfall + ")");
        } else if (!drop_cp) {
            drop_cp = true;
            relax(RelaxationEvent::Kind::DropCriticalPath, "critical-path stage bypassed (" + shortfall + ")");
        } else if (guarded) {
            guarded = false;
            relax(RelaxationEvent::Kind::DropTimingGuard, "critical-delay budget lifted (" + shortfall + ")");
        } else {
            throw std::logic_error("run_chain: relaxation ladder exhausted");
        }
    }
    chain.lp_multiplier = multiplier;
    chain.ld_threshold = threshold;

    chain.lp = std::move(lp.nodes);
    chain.ncp = std::move(ncp);
    chain.ld = std::move(ld);
    chain.prob = sel.nodes;
    chain.selected = std::move(sel.nodes);
    chain.selected_bias = std::move(sel.bias_at_selection);
    return chain;
}

LockingResult insert_key_gates(const Netlist& netlist, std::span<const GateId> selected, std::uint64_t rng_seed) {
    NetlistParts parts = netlist.parts();
    const std::size_t first_key = parts.key_inputs.size();
    KeyMetadata meta = parts.key.value_or(KeyMetadata{});
    std::vector<char> used(netlist.num_gates(), 0);
    std::mt19937_64 rng(rng_seed);

    LockingResult result{netlist, {}, {}, {}};
    for (std::size_t i = 0; i < selected.size(); ++i) {
        const GateId g = selected[i];
        if (g >= netlist.num_gates()) throw std::invalid_argument("insert_key_gates: gate " + std::to_string(g) + " does not exist");
        if (used[g]) throw std::invalid_argument("insert_key_gates: gate '" + parts.gates[g].output + "' selected twice");
        used[g] = 1;

        const std::size_t index = first_key + i;
        const std::string key_input = "keyinput" + std::to_string(index);
        const std::string moved = std::string(kReservedPrefix) + "w" + std::to_string(index);
        for (const auto& name : {key_input, moved}) {
            if (netlist.find_signal(name)) {
                throw std::invalid_argument("insert_key_gates: generated wire '" + name + "' collides with an existing wire");
            }
        }
        const Polarity polarity = (rng() >> 63) != 0 ? Polarity::Xnor : Polarity::Xor;
        const std::string tapped = parts.gates[g].output;

        for (auto& gate : parts.gates) {
            std::replace(gate.inputs.begin(), gate.inputs.end(), tapped, moved);
        }
        std::replace(parts.primary_outputs.begin(), parts.primary_outputs.end(), tapped, moved);
        parts.gates.push_back(Gate{polarity == Polarity::Xor ? GateType::Xor : GateType::Xnor, moved, {tapped, key_input}});
        parts.key_inputs.push_back(key_input);
        const bool bit = polarity == Polarity::Xnor;
        meta.key.push_back(bit);
        meta.gates.push_back({tapped, polarity});
        result.key.push_back(bit);
        result.gates.push_back({g, tapped, key_input, polarity});
    }
    parts.key = std::move(meta);
    result.locked = Netlist::build(std::move(parts), BuildOptions{.allow_reserved_names = true});
    return result;
}

LockingResult lock(const Netlist& netlist, const LockConfig& config) {
    auto chain = run_chain(netlist, config);
    auto result = insert_key_gates(netlist, chain.selected, config.rng_seed);
    result.chain = std::move(chain);
    return result;
}

ReportRow report_row(const ConstraintChain& chain, const TimingReport& timing, std::string name, int key_length) {
    return ReportRow{std::move(name),  key_length,       chain.lp_length,  timing.critical_path_count,
                     chain.total_nodes, chain.lp.size(), chain.ncp.size(), chain.ld.size(),
                     chain.prob.size()};
}

std::string to_csv(const ReportRow& r) {
    std::ostringstream ss;
    ss << r.name << ',' << r.key_size << ',' << r.lp_length << ',' << r.cp_count << ',' << r.total_nodes << ','
       << r.lp << ',' << r.ncp << ',' << r.ld << ',' << r.prob;
    return ss.str();
}

ReportRow parse_report_row(std::string_view line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in{std::string(line)};
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw std::invalid_argument("report row must have 9 columns: '" + std::string(line) + "'");
    try {
        return ReportRow{cells[0],
                         std::stoi(cells[1]),
                         std::stoi(cells[2]),
                         std::stoull(cells[3]),
                         std::stoull(cells[4]),
                         std::stoull(cells[5]),
                         std::stoull(cells[6]),
                         std::stoull(cells[7]),
                         std::stoull(cells[8])};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("report row has a non-numeric field: '" + std::string(line) + "'");
    }
}

}  // namespace problock
