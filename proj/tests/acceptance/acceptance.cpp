// End-to-end acceptance run. Prints one PASS/FAIL line per criterion on stdout
// and per-benchmark detail on stderr. Exit status is non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "problock/bench_io.hpp"
#include "problock/dependency.hpp"
#include "problock/graph.hpp"
#include "problock/locking.hpp"
#include "problock/probability.hpp"
#include "problock/verify.hpp"
#include "support.hpp"

namespace pl = problock;
namespace t = problock::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& why) {
        if (!ok) {
            pass = false;
            note << " [" << why << "]";
        }
    }
};

int failures = 0;

void report(int id, const Outcome& o, const std::string& summary) {
    std::printf("AC%d %s %s%s\n", id, o.pass ? "PASS" : "FAIL", summary.c_str(), o.note.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

struct Run {
    std::string name;
    pl::Netlist original;
    pl::LockingResult strict;
    pl::LockingResult slack;
    double seconds;
    pl::VerificationReport verify;
    double slack_delta;
    bool desk;  // small enough for exhaustive checks and brute force
};

bool nested(const pl::ConstraintChain& c) {
    auto sub = [](const std::vector<pl::GateId>& a, const std::vector<pl::GateId>& b) {
        const std::set<pl::GateId> s(b.begin(), b.end());
        for (auto g : a) {
            if (!s.count(g)) return false;
        }
        return true;
    };
    return sub(c.selected, c.prob) && sub(c.prob, c.ld) && sub(c.ld, c.ncp) && sub(c.ncp, c.lp) &&
           c.selected.size() == static_cast<std::size_t>(c.key_length) &&
           std::set<pl::GateId>(c.selected.begin(), c.selected.end()).size() == c.selected.size();
}

double critical_delay(const pl::Netlist& n) {
    return pl::analyze_timing(pl::build_graph(n), pl::DelayModel::unit()).critical_delay;
}

Run run_one(const std::string& path, std::optional<int> key_length, bool desk) {
    auto original = t::load(path);
    pl::LockConfig cfg;
    cfg.key_length = key_length;
    cfg.rng_seed = 2024;
    const auto start = std::chrono::steady_clock::now();
    auto strict = pl::lock(original, cfg);
    const auto verify = pl::check_equivalence(original, strict);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cfg.cp_mode = pl::CpMode::SlackAware;
    auto slack = pl::lock(original, cfg);
    const double slack_delta = critical_delay(slack.locked) - critical_delay(original);
    Run r{original.name(), std::move(original), std::move(strict), std::move(slack), seconds, verify, slack_delta, desk};
    std::cerr << r.name << ": k=" << r.strict.key.size() << " nodes=" << r.verify.original_nodes
              << " overhead=" << r.verify.overhead_pct << "% regime=" << pl::to_string(r.verify.regime)
              << " equivalent=" << r.verify.equivalent << " single_flip=" << r.verify.single_flip_mismatch_rate
              << " strict_delta=" << r.verify.critical_delay_delta << " slack_delta=" << r.slack_delta
              << " time=" << r.seconds << "s\n";
    return r;
}

// Table 1 Total Nodes for the ISCAS'85 rows.
const std::pair<const char*, std::size_t> kTableTotals[] = {
    {"c432", 160},  {"c499", 202},  {"c1355", 546},  {"c1908", 880},
    {"c2670", 1269}, {"c3540", 1669}, {"c5315", 2307}, {"c7552", 3513},
};

}  // namespace

int main() {
    std::vector<Run> runs;
    std::vector<std::string> errors;
    auto attempt = [&](const std::string& path, std::optional<int> k, bool desk) {
        try {
            runs.push_back(run_one(path, k, desk));
        } catch (const std::exception& e) {
            errors.push_back(path + ": " + e.what());
            std::cerr << "ERROR " << path << ": " << e.what() << "\n";
        }
    };
    for (const auto& [name, total] : kTableTotals) attempt(std::string("iscas85/") + name + ".bench", {}, false);
    for (const char* name : {"s27", "s13207", "s38417", "s38584"}) {
        attempt(std::string("iscas89/") + name + ".bench", {}, std::string(name) == "s27");
    }
    attempt("iscas85/c17.bench", 4, true);
    for (const char* name : {"adder4", "counter3", "mux_tree"}) attempt(std::string("small/") + name + ".bench", {}, true);

    {  // AC1
        Outcome o;
        for (const auto& e : errors) o.require(false, e);
        double worst = 0;
        for (const auto& r : runs) {
            const double limit = r.name == "s38584" ? 600.0 : 60.0;
            o.require(r.seconds < limit, r.name + " took " + std::to_string(r.seconds) + "s");
            if (auto k = pl::table_key_length(r.name)) {
                o.require(r.strict.key.size() == static_cast<std::size_t>(*k), r.name + " key size");
            }
            worst = std::max(worst, r.seconds);
        }
        report(1, o, std::to_string(runs.size()) + " benchmarks locked, slowest " + std::to_string(worst) + "s");
    }

    {  // AC2
        Outcome o;
        for (const auto& r : runs) {
            o.require(nested(r.strict.chain), r.name + " strict");
            o.require(nested(r.slack.chain), r.name + " slack_aware");
        }
        report(2, o, "selected <= prob <= ld <= ncp <= lp and |selected| = k on every run");
    }

    {  // AC3
        Outcome o;
        int matches = 0;
        std::ostringstream offsets;
        for (const auto& [name, total] : kTableTotals) {
            const auto n = t::load(std::string("iscas85/") + name + ".bench");
            const auto got = pl::count_nodes(n);
            matches += got == total;
            if (got != total) offsets << " " << name << ":" << got << "/" << total;
        }
        o.require(matches >= 6, "offsets" + offsets.str());
        report(3, o, std::to_string(matches) + " of 8 ISCAS'85 totals match the table");
    }

    {  // AC4
        Outcome o;
        double worst = 0;
        for (const auto& r : runs) {
            if (!pl::table_key_length(r.name)) continue;
            o.require(r.verify.added_gates == static_cast<std::int64_t>(r.strict.key.size()), r.name + " added gates");
            o.require(r.verify.overhead_pct <= 10.0 + 1e-9,
                      r.name + " " + std::to_string(r.verify.overhead_pct) + "%");
            if (r.name == "c432") {
                o.require(std::abs(r.verify.overhead_pct - 10.0) < 1e-9,
                          "c432 " + std::to_string(r.verify.overhead_pct) + "% != 10.0%");
            }
            worst = std::max(worst, r.verify.overhead_pct);
        }
        report(4, o, "added gates = k, worst overhead " + std::to_string(worst) + "%");
    }

    {  // AC5
        Outcome o;
        for (const auto& r : runs) {
            o.require(r.verify.equivalent && r.verify.mismatching_vectors == 0, r.name + " mismatches");
            if (r.original.primary_inputs().size() <= 16 && !r.original.is_sequential()) {
                o.require(r.verify.regime == pl::Regime::Exhaustive &&
                              r.verify.vectors_tested == 1ull << r.original.primary_inputs().size(),
                          r.name + " not exhaustive");
            } else if (r.verify.regime == pl::Regime::Random) {
                o.require(r.verify.vectors_tested >= 10000, r.name + " vectors");
            }
            if (r.original.is_sequential()) o.require(r.verify.sequence_cycles > 0, r.name + " no sequences");
        }
        report(5, o, "correct key is equivalent on every locked benchmark");
    }

    {  // AC6
        Outcome o;
        int checked = 0;
        for (const auto& r : runs) {
            if (r.original.primary_inputs().size() > 16) continue;
            ++checked;
            std::ostringstream silent;
            for (auto b : r.verify.silent_flips) silent << " " << b;
            o.require(r.verify.single_flip_mismatch_rate == 1.0, r.name + " silent bits" + silent.str());
        }
        report(6, o, "every single key-bit flip is observable on " + std::to_string(checked) + " small-input locks");
    }

    {  // AC7
        Outcome o;
        double worst_strict = 0;
        for (const auto& r : runs) {
            if (r.desk && r.name != "s27") continue;  // desk locks key half the circuit
            o.require(r.slack_delta == 0, r.name + " slack_aware delta " + std::to_string(r.slack_delta));
            o.require(r.verify.critical_delay_delta <= 1.0,
                      r.name + " strict delta " + std::to_string(r.verify.critical_delay_delta));
            worst_strict = std::max(worst_strict, r.verify.critical_delay_delta);
        }
        report(7, o, "worst strict_paper delay delta " + std::to_string(worst_strict));
    }

    {  // AC8
        Outcome o;
        int cases = 0;
        for (pl::GateType type : t::kMultiInputTypes) {
            for (std::size_t n = 2; n <= 8; ++n) {
                const auto p = pl::control_profile(type, n);
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t flips = 0;
                    for (std::uint64_t row = 0; row < (1ull << n); ++row) {
                        if (row >> i & 1) continue;
                        std::vector<bool> lo(n), hi(n);
                        for (std::size_t k = 0; k < n; ++k) lo[k] = hi[k] = (row >> k & 1) != 0;
                        hi[i] = true;
                        flips += t::oracle_gate(type, lo) != t::oracle_gate(type, hi);
                    }
                    const double cv = static_cast<double>(flips) / static_cast<double>(1ull << (n - 1));
                    o.require(p.per_input_cv[i] == cv, std::string(pl::to_string(type)) + std::to_string(n));
                    ++cases;
                }
            }
        }
        o.require(pl::control_profile(pl::GateType::And, 5).mean_cv == 1.0 / 16, "AND5");
        report(8, o, std::to_string(cases) + " per-input control values match the truth table");
    }

    {  // AC9
        Outcome o;
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto n = t::random_tree(rng, std::uniform_int_distribution<int>(1, 12)(rng));
            pl::InputProbabilities probs;
            for (const auto& pi : n.primary_inputs()) probs[pi] = unit(rng);
            const auto map = pl::propagate(n, probs);
            const auto& pis = n.primary_inputs();
            std::vector<double> exact(n.num_gates(), 0.0);
            for (std::uint64_t row = 0; row < (1ull << pis.size()); ++row) {
                std::map<std::string, bool> src;
                double w = 1;
                for (std::size_t i = 0; i < pis.size(); ++i) {
                    const bool bit = (row >> i & 1) != 0;
                    src[pis[i]] = bit;
                    w *= bit ? probs[pis[i]] : 1 - probs[pis[i]];
                }
                t::NaiveEvaluator eval(n);
                eval.outputs(src);
                for (pl::GateId g = 0; g < n.num_gates(); ++g) exact[g] += eval.value(n.gate(g).output) ? w : 0;
            }
            for (pl::GateId g = 0; g < n.num_gates(); ++g) {
                worst = std::max(worst, std::abs(map.of(n, n.gate(g).output) - exact[g]));
            }
        }
        o.require(worst <= 1e-12, "tree error " + std::to_string(worst));

        const auto x = t::parse("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(y)\n# KEYINPUTS: keyinput0\n# KEY: 0\n"
                                "# KEYGATES: g:XOR\ng = NOT(a)\ny = XOR(g, keyinput0)\n");
        o.require(pl::propagate(x, {{"a", 0.93}}).of(x, "y") == 0.5, "XOR reset");

        double dff_worst = 0;
        for (const auto& r : runs) {
            if (!r.original.is_sequential()) continue;
            const auto p3 = pl::propagate(r.original, {}, 3);
            const auto p10 = pl::propagate(r.original, {}, 10);
            double d = 0;
            for (std::size_t s = 0; s < p3.prob.size(); ++s) d = std::max(d, std::abs(p3.prob[s] - p10.prob[s]));
            o.require(d <= 0.05, r.name + " dff_iters 3 vs 10 differ by " + std::to_string(d));
            dff_worst = std::max(dff_worst, d);
        }
        std::ostringstream s;
        s << "tree error " << worst << ", dff_iters 3 vs 10 max difference " << dff_worst;
        report(9, o, s.str());
    }

    {  // AC10
        Outcome o;
        std::mt19937_64 rng(10);
        for (int trial = 0; trial < 100; ++trial) {
            const auto n = t::random_dag(rng, std::uniform_int_distribution<int>(1, 5)(rng),
                                         std::uniform_int_distribution<int>(1, 20)(rng));
            const auto g = pl::build_graph(n);
            int longest = 0;
            std::map<std::string, int> through;
            for (const auto& p : t::enumerate_paths(n)) {
                const int len = static_cast<int>(p.size());
                longest = std::max(longest, len);
                for (const auto& w : p) through[w] = std::max(through[w], len);
            }
            o.require(pl::longest_path_length(g) == longest, "length trial " + std::to_string(trial));
            const auto lp = pl::longest_path_subset(g, 2, 2);
            std::set<pl::GateId> expected;
            for (pl::GateId v = 0; v < n.num_gates(); ++v) {
                auto it = through.find(n.gate(v).output);
                if (it != through.end() && it->second >= lp.min_admitted_length) expected.insert(v);
            }
            o.require(std::set<pl::GateId>(lp.nodes.begin(), lp.nodes.end()) == expected,
                      "classes trial " + std::to_string(trial));
        }
        const int c432 = pl::longest_path_length(pl::build_graph(t::load("iscas85/c432.bench")));
        o.require(std::abs(c432 - 18) <= 2, "c432 LP " + std::to_string(c432));
        report(10, o, "100 random DAGs match path enumeration, c432 LP length " + std::to_string(c432));
    }

    {  // AC11
        Outcome o;
        std::vector<std::pair<std::string, pl::LockingResult>> locks;
        std::vector<const pl::Netlist*> originals;
        for (const auto& r : runs) {
            if (r.desk && r.strict.key.size() <= 12) {
                locks.emplace_back(r.name, r.strict);
                originals.push_back(&r.original);
            }
        }
        const auto c432 = t::load("iscas85/c432.bench");
        pl::LockConfig cfg;
        cfg.key_length = 12;
        locks.emplace_back("c432/12", pl::lock(c432, cfg));
        originals.push_back(&c432);
        int unique = 0, flagged = 0;
        for (std::size_t i = 0; i < locks.size(); ++i) {
            const auto& [name, lock] = locks[i];
            const auto bf = pl::brute_force_key(*originals[i], lock.locked);
            const bool has = std::find(bf.keys.begin(), bf.keys.end(), lock.key) != bf.keys.end();
            o.require(has, name + " generated key not recovered");
            o.require(bf.keys.size() == 1 || !bf.ambiguous_bits.empty(), name + " unflagged extra keys");
            unique += bf.keys.size() == 1;
            flagged += bf.keys.size() > 1;
            std::cerr << name << ": " << bf.keys.size() << " correct key(s), " << bf.ambiguous_bits.size()
                      << " ambiguous bit(s)\n";
        }
        report(11, o, std::to_string(locks.size()) + " locks attacked: " + std::to_string(unique) + " unique, " +
                          std::to_string(flagged) + " with flagged redundancy");
    }

    {  // AC12
        Outcome o;
        for (const auto& r : runs) {
            pl::LockConfig cfg;
            cfg.rng_seed = 2024;
            if (r.desk && r.name == "c17") cfg.key_length = 4;
            const auto again = pl::lock(r.original, cfg);
            const auto timing = pl::analyze_timing(pl::build_graph(r.original), cfg.delays);
            const auto row = [&](const pl::LockingResult& l) {
                return pl::to_csv(pl::report_row(l.chain, timing, r.name, l.chain.key_length));
            };
            o.require(pl::write_bench(again.locked) == pl::write_bench(r.strict.locked), r.name + " netlist");
            o.require(row(again) == row(r.strict), r.name + " report");
        }
        report(12, o, "repeat runs with the same seed are byte-identical on " + std::to_string(runs.size()) +
                          " benchmarks");
    }

    return failures == 0 ? 0 : 1;
}
