#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wirelab/circuit.hpp"

namespace wirelab {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + what),
          line(line),
          column(column) {}

    std::size_t line;
    std::size_t column;
};

namespace io_detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::optional<OpKind> keyword_kind(const std::string& word) {
    static const std::unordered_map<std::string, OpKind> table = {
        {"init", OpKind::Init},    {"measure", OpKind::Measure}, {"x", OpKind::X},
        {"z", OpKind::Z},          {"h", OpKind::H},             {"p", OpKind::P},
        {"pdag", OpKind::Pdag},    {"v", OpKind::V},             {"vdag", OpKind::Vdag},
        {"t", OpKind::T},          {"tdag", OpKind::Tdag},       {"cnot", OpKind::Cnot},
        {"toffoli", OpKind::Toffoli},
    };
    auto it = table.find(word);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

inline std::optional<InitState> state_from_token(const std::string& token) {
    const std::string t = lower(token);
    if (t == "0") return InitState::Zero;
    if (t == "1") return InitState::One;
    if (t == "+") return InitState::Plus;
    if (t == "y") return InitState::Y;
    if (t == "a") return InitState::A;
    return std::nullopt;
}

inline std::optional<MeasBasis> basis_from_token(const std::string& token) {
    const std::string t = lower(token);
    if (t == "z") return MeasBasis::Z;
    if (t == "x") return MeasBasis::X;
    return std::nullopt;
}

struct Token {
    std::string text;
    std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
        tokens.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    return tokens;
}

}  // namespace io_detail

/// Parse the line-oriented circuit format. Operations get single-component
/// ids equal to their position; each distinct wire label gets one diagram
/// root. The per-wire operation pattern is enforced while parsing.
inline Circuit parse_circuit(std::string_view text) {
    using namespace io_detail;
    Circuit c;
    enum class WireState { Headless, Live, Dead };
    std::unordered_map<WireLabel, WireState> wire_state;
    std::unordered_map<WireLabel, NodeHandle> wire_node;

    auto wire_ref = [&](const std::string& label) {
        auto it = wire_node.find(label);
        if (it == wire_node.end()) it = wire_node.emplace(label, c.diagram.add_root(label)).first;
        return it->second;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::uint32_t next_op = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        auto tokens = tokenize(line);
        if (tokens.empty()) continue;

        const std::string keyword = lower(tokens[0].text);
        auto kind = keyword_kind(keyword);
        if (!kind) throw ParseError(line_no, tokens[0].column, "unknown gate kind '" + tokens[0].text + "'");

        const std::size_t wires = arity(*kind);
        const std::size_t expected =
            1 + wires + (*kind == OpKind::Init || *kind == OpKind::Measure ? 1 : 0);
        if (tokens.size() != expected) {
            throw ParseError(line_no, tokens.back().column,
                             std::string(kind_keyword(*kind)) + " expects " + std::to_string(expected - 1) +
                                 " argument(s), got " + std::to_string(tokens.size() - 1));
        }

        Operation op;
        op.id = GateId::single(next_op);
        op.kind = *kind;
        for (std::size_t k = 0; k < wires; ++k) {
            const std::string& label = tokens[1 + k].text;
            for (std::size_t j = 0; j < k; ++j) {
                if (tokens[1 + j].text == label) {
                    throw ParseError(line_no, tokens[1 + k].column, "repeated wire '" + label + "'");
                }
            }
            op.refs.push_back(wire_ref(label));

            auto it = wire_state.find(label);
            WireState current = it == wire_state.end()
                                    ? (op.kind == OpKind::Init ? WireState::Dead : WireState::Headless)
                                    : it->second;
            switch (op.kind) {
                case OpKind::Init:
                    if (it != wire_state.end() && current != WireState::Dead) {
                        throw ParseError(line_no, tokens[1 + k].column,
                                         "init on live wire '" + label + "'");
                    }
                    wire_state[label] = WireState::Live;
                    break;
                case OpKind::Measure:
                    if (current == WireState::Dead && it != wire_state.end()) {
                        throw ParseError(line_no, tokens[1 + k].column,
                                         "measure on already measured wire '" + label + "'");
                    }
                    wire_state[label] = WireState::Dead;
                    break;
                default:
                    if (current == WireState::Dead && it != wire_state.end()) {
                        throw ParseError(line_no, tokens[1 + k].column,
                                         "gate on measured wire '" + label + "'");
                    }
                    if (it == wire_state.end()) wire_state[label] = WireState::Headless;
                    break;
            }
        }
        if (op.kind == OpKind::Init) {
            auto state = state_from_token(tokens.back().text);
            if (!state) {
                throw ParseError(line_no, tokens.back().column,
                                 "unknown state '" + tokens.back().text + "' (want 0, 1, +, Y, A)");
            }
            op.state = *state;
        }
        if (op.kind == OpKind::Measure) {
            auto basis = basis_from_token(tokens.back().text);
            if (!basis) {
                throw ParseError(line_no, tokens.back().column,
                                 "unknown basis '" + tokens.back().text + "' (want Z or X)");
            }
            op.basis = *basis;
        }
        ++next_op;
        c.ops.push_back(std::move(op));
    }
    return c;
}

/// Emit the canonical textual form with fully resolved wire labels, one
/// operation per line. parse(serialize(c)) reproduces the list op for op
/// (ids renumbered 0..n-1).
inline std::string serialize_circuit(const Circuit& c) {
    std::string out;
    for (const Operation& op : c.ops) {
        out += kind_keyword(op.kind);
        for (std::size_t k = 0; k < op.refs.size(); ++k) {
            out += ' ';
            out += c.resolved_label(op, k);
        }
        if (op.kind == OpKind::Init) {
            out += ' ';
            out += state_token(op.state);
        } else if (op.kind == OpKind::Measure) {
            out += ' ';
            out += basis_token(op.basis);
        }
        out += '\n';
    }
    return out;
}

}  // namespace wirelab
