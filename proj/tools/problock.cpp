#include <algorithm>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "problock/bench_io.hpp"
#include "problock/locking.hpp"
#include "problock/verify.hpp"

namespace fs = std::filesystem;
using namespace problock;

namespace {

struct Options {
    std::vector<std::string> inputs;
    std::string output_dir = ".";
    std::string output_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> key_length;
    int lp_multiplier = 3;
    std::string cp_mode = "strict_paper";
    double ld_threshold = kDefaultLowDependencyThreshold;
    int dff_iters = kDefaultDffIterations;
    std::uint64_t cp_cap = kDefaultCriticalPathCap;
    std::string delay_table;
    std::string input_prob_file;
    std::uint64_t budget = 10000;
    std::string key;
};

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    if (const char* env = std::getenv("PROBLOCK_SEED"); env && *env) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("PROBLOCK_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 0;
}

LockConfig make_config(const Options& o) {
    LockConfig c;
    c.key_length = o.key_length;
    c.lp_multiplier = o.lp_multiplier;
    c.cp_mode = o.cp_mode == "slack_aware" ? CpMode::SlackAware : CpMode::StrictPaper;
    c.ld_threshold = o.ld_threshold;
    c.dff_iters = o.dff_iters;
    c.cp_cap = o.cp_cap;
    c.rng_seed = resolve_seed(o);
    if (!o.delay_table.empty()) c.delays = parse_delay_table(read_text_file(o.delay_table));
    if (!o.input_prob_file.empty()) c.input_probabilities = parse_input_probabilities(read_text_file(o.input_prob_file));
    c.validate();
    return c;
}

VerifyOptions make_verify_options(const Options& o) {
    VerifyOptions v;
    v.budget = o.budget;
    v.seed = resolve_seed(o);
    if (!o.delay_table.empty()) v.delays = parse_delay_table(read_text_file(o.delay_table));
    return v;
}

// Files as given; directories expand to their *.bench files in name order.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> dir;
            for (const auto& e : fs::directory_iterator(in)) {
                if (e.is_regular_file() && e.path().extension() == ".bench") dir.push_back(e.path());
            }
            std::sort(dir.begin(), dir.end());
            files.insert(files.end(), dir.begin(), dir.end());
        } else {
            files.emplace_back(in);
        }
    }
    return files;
}

std::string describe(const std::exception& e) {
    if (const auto* ne = dynamic_cast<const NetlistError*>(&e)) {
        std::ostringstream ss;
        ss << to_string(ne->kind()) << " error";
        if (ne->line()) ss << " at line " << ne->line() << ", column " << ne->column();
        ss << ": " << ne->what();
        return ss.str();
    }
    return e.what();
}

Netlist load(const fs::path& path) {
    if (!fs::exists(path)) throw std::runtime_error("file not found: " + path.string());
    return read_bench_file(path);
}

// Runs `fn` per file, continuing past failures. Returns the process exit status.
template <typename Fn>
int for_each_file(const std::vector<fs::path>& files, Fn fn) {
    std::vector<std::string> failures;
    for (const auto& f : files) {
        try {
            fn(f);
        } catch (const std::exception& e) {
            failures.push_back(f.string() + ": " + describe(e));
        }
    }
    if (files.size() > 1 || !failures.empty()) {
        std::cerr << (files.size() - failures.size()) << " of " << files.size() << " file(s) succeeded\n";
    }
    for (const auto& msg : failures) std::cerr << "  FAILED " << msg << '\n';
    return failures.empty() ? 0 : 1;
}

void print_chain(std::ostream& os, const ConstraintChain& chain, const TimingReport& timing) {
    os << "  total nodes     " << chain.total_nodes << '\n'
       << "  key length      " << chain.key_length << '\n'
       << "  lp length       " << chain.lp_length << '\n'
       << "  critical delay  " << timing.critical_delay << '\n'
       << "  cp count        " << timing.critical_path_count << (timing.path_count_saturated ? "+" : "") << '\n'
       << "  LP / NCP / LD / Prob = " << chain.lp.size() << " / " << chain.ncp.size() << " / " << chain.ld.size()
       << " / " << chain.prob.size() << '\n'
       << "  lp multiplier   " << chain.lp_multiplier << '\n'
       << "  ld threshold    " << chain.ld_threshold << '\n';
    for (const auto& r : chain.relaxations) os << "  relaxation      " << to_string(r.kind) << ": " << r.detail << '\n';
}

int cmd_lock(const Options& o) {
    const LockConfig config = make_config(o);
    fs::create_directories(o.output_dir);
    return for_each_file(expand_inputs(o.inputs), [&](const fs::path& path) {
        const Netlist netlist = load(path);
        const LockingResult result = lock(netlist, config);
        const TimingReport timing = analyze_timing(build_graph(netlist), config.delays, config.cp_cap);
        const auto row = report_row(result.chain, timing, netlist.name(), result.chain.key_length);

        const fs::path out = fs::path(o.output_dir);
        write_file_atomic(out / (netlist.name() + "_locked.bench"), write_bench(result.locked));
        write_file_atomic(out / (netlist.name() + "_chain.csv"),
                          std::string(kReportHeader) + '\n' + to_csv(row) + '\n');
        std::cout << netlist.name() << ": locked with " << result.key.size() << " key gates ("
                  << result.chain.relaxations.size() << " relaxation(s)) -> "
                  << (out / (netlist.name() + "_locked.bench")).string() << '\n';
    });
}

int cmd_analyze(const Options& o) {
    const LockConfig config = make_config(o);
    return for_each_file(expand_inputs(o.inputs), [&](const fs::path& path) {
        const Netlist netlist = load(path);
        const ConstraintChain chain = run_chain(netlist, config);
        const TimingReport timing = analyze_timing(build_graph(netlist), config.delays, config.cp_cap);
        std::cout << netlist.name() << '\n';
        print_chain(std::cout, chain, timing);
    });
}

std::vector<bool> parse_key_bits(const std::string& text) {
    std::vector<bool> key;
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("key must be a string of 0/1 characters");
        key.push_back(c == '1');
    }
    return key;
}

std::vector<std::pair<fs::path, fs::path>> pairs_of(const std::vector<std::string>& inputs) {
    if (inputs.size() % 2 != 0) throw std::invalid_argument("expected ORIGINAL LOCKED path pairs");
    std::vector<std::pair<fs::path, fs::path>> pairs;
    for (std::size_t i = 0; i < inputs.size(); i += 2) pairs.emplace_back(inputs[i], inputs[i + 1]);
    return pairs;
}

int for_each_pair(const Options& o, const std::function<void(const Netlist&, const Netlist&)>& fn) {
    const auto pairs = pairs_of(o.inputs);
    std::vector<fs::path> locked_files;
    for (const auto& p : pairs) locked_files.push_back(p.second);
    std::size_t i = 0;
    return for_each_file(locked_files, [&](const fs::path&) {
        const auto& [orig_path, lock_path] = pairs[i++];
        fn(load(orig_path), load(lock_path));
    });
}

int cmd_verify(const Options& o) {
    const VerifyOptions vo = make_verify_options(o);
    return for_each_pair(o, [&](const Netlist& original, const Netlist& locked) {
        std::vector<bool> key;
        if (!o.key.empty()) {
            key = parse_key_bits(o.key);
        } else if (locked.key_metadata()) {
            key = locked.key_metadata()->key;
        } else {
            throw std::invalid_argument("'" + locked.name() + "' has no KEY header; pass --key");
        }
        const auto r = check_equivalence(original, locked, key, vo);
        std::cout << std::boolalpha << "benchmark=" << original.name() << '\n'
                  << "equivalent=" << r.equivalent << '\n'
                  << "regime=" << to_string(r.regime) << '\n'
                  << "vectors_tested=" << r.vectors_tested << '\n'
                  << "sequence_cycles=" << r.sequence_cycles << '\n'
                  << "mismatching_vectors=" << r.mismatching_vectors << '\n'
                  << "wrong_keys_tested=" << r.wrong_keys_tested << '\n'
                  << "wrong_key_mismatch_rate=" << r.wrong_key_mismatch_rate << '\n'
                  << "single_flip_mismatch_rate=" << r.single_flip_mismatch_rate << '\n'
                  << "key_length=" << r.key_length << '\n'
                  << "added_gates=" << r.added_gates << '\n'
                  << std::fixed << std::setprecision(2) << "overhead_pct=" << r.overhead_pct << '\n'
                  << std::defaultfloat << "critical_delay_delta=" << r.critical_delay_delta << '\n';
        if (!r.equivalent) throw std::runtime_error("locked netlist is not equivalent under the given key");
    });
}

int cmd_attack(const Options& o) {
    const VerifyOptions vo = make_verify_options(o);
    return for_each_pair(o, [&](const Netlist& original, const Netlist& locked) {
        const std::size_t bits = locked.key_inputs().size();
        if (bits > kMaxBruteForceKeyBits) {
            throw std::invalid_argument("refusing to brute-force a " + std::to_string(bits) + "-bit key (limit " +
                                        std::to_string(kMaxBruteForceKeyBits) +
                                        " bits); relock with --key-length <= 20 for a desk-scale attack");
        }
        const auto r = brute_force_key(original, locked, kMaxBruteForceKeyBits, vo);
        std::cout << "benchmark=" << original.name() << '\n'
                  << "regime=" << to_string(r.regime) << '\n'
                  << "vectors_tested=" << r.vectors_tested << '\n'
                  << "correct_keys=" << r.keys.size() << '\n';
        for (const auto& k : r.keys) {
            std::cout << "key=";
            for (bool b : k) std::cout << (b ? '1' : '0');
            std::cout << '\n';
        }
        if (!r.ambiguous_bits.empty()) {
            std::cout << "warning: redundant key bits";
            for (auto b : r.ambiguous_bits) std::cout << ' ' << b;
            std::cout << '\n';
        }
    });
}

int cmd_report(const Options& o) {
    std::vector<fs::path> files;
    for (const auto& in : o.inputs) {
        if (!fs::is_directory(in)) throw std::runtime_error("not a directory: " + in);
        for (const auto& e : fs::directory_iterator(in)) {
            const auto name = e.path().filename().string();
            if (e.is_regular_file() && name.size() > 10 && name.ends_with("_chain.csv")) files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::ostringstream table;
    table << kReportHeader << '\n';
    const int status = for_each_file(files, [&](const fs::path& path) {
        std::istringstream in(read_text_file(path));
        std::string line;
        std::getline(in, line);
        if (line != kReportHeader) throw std::runtime_error("unexpected header");
        while (std::getline(in, line)) {
            if (!line.empty()) table << to_csv(parse_report_row(line)) << '\n';
        }
    });
    if (o.output_file.empty()) {
        std::cout << table.str();
    } else {
        write_file_atomic(o.output_file, table.str());
    }
    return status;
}

void add_lock_flags(CLI::App* app, Options& o) {
    app->add_option("--seed", o.seed, "RNG seed for key-gate polarity (default: $PROBLOCK_SEED or 0)");
    app->add_option("--key-length", o.key_length, "Key bits (default: table size or total/16 rounded up)")
        ->check(CLI::PositiveNumber);
    app->add_option("--lp-multiplier", o.lp_multiplier, "Longest-path stop factor")->check(CLI::PositiveNumber);
    app->add_option("--cp-mode", o.cp_mode, "Critical-path removal mode")
        ->check(CLI::IsMember({"strict_paper", "slack_aware"}));
    app->add_option("--ld-threshold", o.ld_threshold, "Low-dependency mean control-value threshold")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--dff-iters", o.dff_iters, "Probability passes through DFFs")->check(CLI::PositiveNumber);
    app->add_option("--cp-cap", o.cp_cap, "Saturation cap for critical-path counting")->check(CLI::PositiveNumber);
    app->add_option("--delay-table", o.delay_table, "Gate delay table file")->check(CLI::ExistingFile);
    app->add_option("--input-prob-file", o.input_prob_file, "Primary-input probability file")
        ->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ProbLock logic locking for ISCAS bench netlists"};
    app.require_subcommand(1);
    Options o;

    auto* lock_cmd = app.add_subcommand("lock", "Lock bench files or directories");
    lock_cmd->add_option("inputs", o.inputs, "Bench files or directories")->required();
    lock_cmd->add_option("-o,--output-dir", o.output_dir, "Directory for locked netlists and chain CSVs");
    add_lock_flags(lock_cmd, o);

    auto* analyze_cmd = app.add_subcommand("analyze", "Print the constraint chain without locking");
    analyze_cmd->add_option("inputs", o.inputs, "Bench files or directories")->required();
    add_lock_flags(analyze_cmd, o);

    auto* verify_cmd = app.add_subcommand("verify", "Check locked netlists against their originals");
    verify_cmd->add_option("pairs", o.inputs, "ORIGINAL LOCKED [ORIGINAL LOCKED ...]")->required();
    verify_cmd->add_option("--key", o.key, "Key bitstring (default: KEY header of the locked file)");
    verify_cmd->add_option("--budget", o.budget, "Random vectors when exhaustive simulation is too large");
    verify_cmd->add_option("--seed", o.seed, "Stimulus seed (default: $PROBLOCK_SEED or 0)");
    verify_cmd->add_option("--delay-table", o.delay_table, "Gate delay table file")->check(CLI::ExistingFile);

    auto* attack_cmd = app.add_subcommand("attack", "Brute-force the key of a desk-scale lock");
    attack_cmd->add_option("pairs", o.inputs, "ORIGINAL LOCKED [ORIGINAL LOCKED ...]")->required();
    attack_cmd->add_option("--budget", o.budget, "Random vectors when exhaustive simulation is too large");
    attack_cmd->add_option("--seed", o.seed, "Stimulus seed (default: $PROBLOCK_SEED or 0)");

    auto* report_cmd = app.add_subcommand("report", "Merge *_chain.csv rows into one table");
    report_cmd->add_option("dirs", o.inputs, "Directories holding *_chain.csv files")->required();
    report_cmd->add_option("-o,--output", o.output_file, "Write the table here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lock_cmd->parsed()) return cmd_lock(o);
        if (analyze_cmd->parsed()) return cmd_analyze(o);
        if (verify_cmd->parsed()) return cmd_verify(o);
        if (attack_cmd->parsed()) return cmd_attack(o);
        if (report_cmd->parsed()) return cmd_report(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << describe(e) << '\n';
        return 1;
    }
    return 1;
}
