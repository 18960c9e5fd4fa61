#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "problock/dependency.hpp"
#include "problock/graph.hpp"
#include "problock/netlist.hpp"
#include "problock/probability.hpp"
#include "problock/timing.hpp"

namespace problock {

struct LockConfig {
    std::optional<int> key_length;
    int lp_multiplier = 3;
    CpMode cp_mode = CpMode::StrictPaper;
    double ld_threshold = kDefaultLowDependencyThreshold;
    int dff_iters = kDefaultDffIterations;
    std::uint64_t rng_seed = 0;
    std::uint64_t cp_cap = kDefaultCriticalPathCap;
    DelayModel delays = DelayModel::unit();
    InputProbabilities input_probabilities;

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;
};

/// Key size from the published benchmark table when `benchmark` names one of
/// its rows, otherwise the smallest power of two >= total_nodes / 16 clamped
/// to [8, 256].
int default_key_length(std::size_t total_nodes, std::string_view benchmark = {});

/// Key size listed for a named benchmark, if any.
std::optional<int> table_key_length(std::string_view benchmark);

struct RelaxationEvent {
    enum class Kind : std::uint8_t {
        LpMultiplier,     // LP stop multiplier raised by one
        LdThreshold,      // low-dependency threshold raised by 0.1
        RankNcpByBias,    // LD stage bypassed: NCP ranked directly by bias
        DropCriticalPath, // NCP stage bypassed: LP ranked directly by bias
        DropTimingGuard,  // Prob stage picked without the critical-delay budget
    };
    Kind kind;
    std::string detail;
};

std::string_view to_string(RelaxationEvent::Kind kind);

/// Nested node subsets, selected ⊆ prob ⊆ ld ⊆ ncp ⊆ lp ⊆ gates.
struct ConstraintChain {
    std::size_t total_nodes = 0;
    int key_length = 0;
    int lp_length = 0;
    int lp_multiplier = 0;
    double ld_threshold = 0;
    std::vector<GateId> lp;
    std::vector<GateId> ncp;
    std::vector<GateId> ld;
    std::vector<GateId> prob;
    std::vector<GateId> selected;
    std::vector<double> selected_bias;
    std::vector<RelaxationEvent> relaxations;
};

struct KeyGate {
    GateId original_gate;
    std::string tapped_wire;
    std::string key_input;
    Polarity polarity;
};

struct LockingResult {
    Netlist locked;
    std::vector<bool> key;
    std::vector<KeyGate> gates;
    ConstraintChain chain;
};

/// Runs the LP -> NCP -> LD -> Prob filtering chain, relaxing constraints in a
/// fixed order when a stage leaves fewer than key_length nodes. The Prob stage
/// skips picks that would push the critical delay past its budget: zero growth
/// in slack-aware mode, one key-gate delay in strict mode.
ConstraintChain run_chain(const Netlist& netlist, const LockConfig& config);

/// Inserts one XOR/XNOR key gate after each selected gate. The key gate drives a
/// fresh `__pl_w<i>` wire and every sink of the tapped wire, including a primary
/// output binding, is moved onto it.
/// Polarity is a fair coin from a seeded mt19937_64; the key bit makes each key
/// gate transparent (0 for XOR, 1 for XNOR).
LockingResult insert_key_gates(const Netlist& netlist, std::span<const GateId> selected, std::uint64_t rng_seed);

/// run_chain followed by insert_key_gates.
LockingResult lock(const Netlist& netlist, const LockConfig& config);

struct ReportRow {
    std::string name;
    int key_size = 0;
    int lp_length = 0;
    std::uint64_t cp_count = 0;
    std::size_t total_nodes = 0;
    std::size_t lp = 0;
    std::size_t ncp = 0;
    std::size_t ld = 0;
    std::size_t prob = 0;
};

inline constexpr std::string_view kReportHeader =
    "Benchmark,Key Size,LP Length,CP Count,Total Nodes,LP Subset,NCP Subset,LD Subset,Prob Subset";

ReportRow report_row(const ConstraintChain& chain, const TimingReport& timing, std::string name, int key_length);

std::string to_csv(const ReportRow& row);
ReportRow parse_report_row(std::string_view csv_line);

}  // namespace problock
