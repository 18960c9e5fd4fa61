#include "problock/bench_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace problock {

namespace {

using Kind = NetlistError::Kind;

bool is_name_char(char c) {
    return !(c == '(' || c == ')' || c == ',' || c == '=' || c == '#' || c == ' ' || c == '\t' || c == '\r' ||
             c == '\n');
}

/// Cursor over one source line; columns are 1-based.
class LineScanner {
public:
    LineScanner(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    std::size_t column() const { return pos_ + 1; }

    std::string_view name() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
        if (start == pos_) fail("expected a name");
        return text_.substr(start, pos_ - start);
    }
    bool try_consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!try_consume(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& what, Kind kind = Kind::Syntax) const {
        throw NetlistError(kind, what).with_location(line_, column());
    }
    [[noreturn]] void fail_at(std::size_t column, const std::string& what, Kind kind = Kind::Syntax) const {
        throw NetlistError(kind, what).with_location(line_, column);
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

struct KeyHeader {
    std::optional<std::vector<std::string>> inputs;
    std::optional<std::string> bits;
    std::optional<std::vector<std::string>> gates;
    std::size_t line = 0;
};

/// Recognizes `# KEYINPUTS: ...`, `# KEY: ...` and `# KEYGATES: ...`.
void scan_header_comment(std::string_view comment, std::size_t line, KeyHeader& header) {
    auto trimmed = comment.substr(1);
    auto first = trimmed.find_first_not_of(" \t");
    if (first == std::string_view::npos) return;
    trimmed = trimmed.substr(first);
    auto colon = trimmed.find(':');
    if (colon == std::string_view::npos) return;
    auto tag = trimmed.substr(0, colon);
    auto rest = trimmed.substr(colon + 1);
    if (tag == "KEYINPUTS") {
        header.inputs = split_ws(rest);
        header.line = line;
    } else if (tag == "KEY") {
        auto toks = split_ws(rest);
        header.bits = toks.empty() ? std::string{} : toks.front();
    } else if (tag == "KEYGATES") {
        header.gates = split_ws(rest);
    }
}

KeyMetadata decode_key(const KeyHeader& h) {
    KeyMetadata meta;
    const std::string bits = h.bits.value_or("");
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw NetlistError(Kind::KeyMetadata, "KEY header must be a bitstring").with_location(h.line, 0);
        }
        meta.key.push_back(c == '1');
    }
    for (const auto& tok : h.gates.value_or(std::vector<std::string>{})) {
        auto colon = tok.rfind(':');
        if (colon == std::string::npos) {
            throw NetlistError(Kind::KeyMetadata, "KEYGATES entry '" + tok + "' is not <gate-id>:<polarity>")
                .with_location(h.line, 0);
        }
        auto pol = tok.substr(colon + 1);
        KeyGateRecord rec{tok.substr(0, colon), Polarity::Xor};
        if (pol == "XNOR") {
            rec.polarity = Polarity::Xnor;
        } else if (pol != "XOR") {
            throw NetlistError(Kind::KeyMetadata, "unknown key-gate polarity '" + pol + "'").with_location(h.line, 0);
        }
        meta.gates.push_back(std::move(rec));
    }
    return meta;
}

}  // namespace

Netlist parse_bench(std::string_view text, std::string name) {
    NetlistParts parts;
    parts.name = std::move(name);
    KeyHeader header;
    std::vector<std::size_t> gate_lines;
    std::unordered_map<std::string, std::size_t> input_lines;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            scan_header_comment(line.substr(hash), line_no, header);
            line = line.substr(0, hash);
        }
        LineScanner sc(line, line_no);
        if (sc.at_end()) {
            if (end == text.size()) break;
            continue;
        }

        const std::size_t name_col = sc.column();
        std::string first(sc.name());
        if (sc.try_consume('=')) {
            const std::size_t kw_col = sc.column();
            auto keyword = sc.name();
            auto type = gate_type_from_keyword(keyword);
            if (!type) sc.fail_at(kw_col, "unknown gate keyword '" + std::string(keyword) + "'", Kind::UnknownGate);
            sc.expect('(');
            Gate gate{*type, first, {}};
            if (!sc.try_consume(')')) {
                do {
                    gate.inputs.emplace_back(sc.name());
                } while (sc.try_consume(','));
                sc.expect(')');
            }
            if (!sc.at_end()) sc.fail("unexpected trailing text");
            if (!arity_ok(gate.type, gate.inputs.size())) {
                sc.fail_at(kw_col,
                           std::string(to_string(gate.type)) + " gate '" + gate.output + "' has " +
                               std::to_string(gate.inputs.size()) + " input(s)",
                           Kind::Arity);
            }
            parts.gates.push_back(std::move(gate));
            gate_lines.push_back(line_no);
            continue;
        }

        auto directive = gate_type_from_keyword(first);  // guards against `AND(a)` without an lhs
        std::string upper;
        for (char c : first) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        if (upper != "INPUT" && upper != "OUTPUT") {
            sc.fail_at(name_col,
                       directive ? "gate without an output assignment" : "expected INPUT, OUTPUT or an assignment");
        }
        sc.expect('(');
        const std::size_t wire_col = sc.column();
        std::string wire(sc.name());
        sc.expect(')');
        if (!sc.at_end()) sc.fail("unexpected trailing text");
        if (upper == "INPUT") {
            if (!input_lines.emplace(wire, line_no).second) {
                sc.fail_at(wire_col, "input '" + wire + "' declared twice", Kind::DuplicateDriver);
            }
            parts.primary_inputs.push_back(std::move(wire));
        } else {
            parts.primary_outputs.push_back(std::move(wire));
        }
    }

    BuildOptions options;
    if (header.inputs) {
        options.allow_reserved_names = true;
        std::unordered_set<std::string> keys(header.inputs->begin(), header.inputs->end());
        for (const auto& k : *header.inputs) {
            if (!input_lines.contains(k)) {
                throw NetlistError(Kind::KeyMetadata, "key input '" + k + "' is not declared as an INPUT")
                    .with_location(header.line, 0);
            }
        }
        std::erase_if(parts.primary_inputs, [&](const std::string& pi) { return keys.contains(pi); });
        parts.key_inputs = *header.inputs;
        parts.key = decode_key(header);
    }

    try {
        return Netlist::build(std::move(parts), options);
    } catch (const NetlistError& e) {
        if (e.gate_index() && *e.gate_index() < gate_lines.size()) {
            throw e.with_location(gate_lines[*e.gate_index()], 0);
        }
        throw;
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NetlistError(Kind::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Netlist read_bench_file(const std::filesystem::path& path) {
    return parse_bench(read_text_file(path), path.stem().string());
}

std::string write_bench(const Netlist& netlist) {
    std::string out;
    auto line = [&out](std::string_view a, std::string_view b = {}, std::string_view c = {}) {
        out.append(a).append(b).append(c).push_back('\n');
    };
    if (!netlist.name().empty()) line("# ", netlist.name());
    if (const auto& key = netlist.key_metadata()) {
        std::string inputs, bits, gates;
        for (const auto& k : netlist.key_inputs()) (inputs += ' ') += k;
        for (bool b : key->key) bits.push_back(b ? '1' : '0');
        for (const auto& g : key->gates) {
            ((gates += ' ') += g.tapped_wire) += ':';
            gates += to_string(g.polarity);
        }
        line("# KEYINPUTS:", inputs);
        line("# KEY: ", bits);
        line("# KEYGATES:", gates);
    }
    for (const auto& pi : netlist.primary_inputs()) line("INPUT(", pi, ")");
    for (const auto& k : netlist.key_inputs()) line("INPUT(", k, ")");
    for (const auto& po : netlist.primary_outputs()) line("OUTPUT(", po, ")");
    for (const auto& g : netlist.gates()) {
        out.append(g.output).append(" = ").append(to_string(g.type)).push_back('(');
        for (std::size_t i = 0; i < g.inputs.size(); ++i) {
            if (i) out.append(", ");
            out.append(g.inputs[i]);
        }
        out.append(")\n");
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NetlistError(Kind::Io, "cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw NetlistError(Kind::Io, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw NetlistError(Kind::Io, "cannot rename '" + tmp.string() + "': " + ec.message());
}

}  // namespace problock
