#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wirelab/circuit.hpp"
#include "wirelab/deadline.hpp"
#include "wirelab/io.hpp"

namespace wirelab {

class RewriteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One line of a rewrite template. Operands are placeholders resolved at
/// instantiation time: %old / %anc for single-qubit rules (the rewritten
/// wire and the introduced ancilla), %c1 / %c2 / %t for the Toffoli rule.
struct TemplateOp {
    OpKind kind = OpKind::Init;
    InitState state = InitState::Zero;
    MeasBasis basis = MeasBasis::Z;
    std::vector<std::string> operands;
};

/// A gate-kind rewrite. Rules that introduce an ancilla are teleportations:
/// exactly one Init, one Measure and at least one CNOT, splitting the
/// operated wire in two. Ancilla-free rules only substitute the gate body.
struct RewriteRule {
    OpKind matches = OpKind::H;
    std::vector<TemplateOp> body;
    bool introduces_ancilla = false;
    InitState ancilla_state = InitState::Zero;
    MeasBasis measurement_basis = MeasBasis::Z;
};

/// Default rewrite templates. H (and the Pauli gates) reduce to P/V
/// sequences without ancillae; the remaining single-qubit gates teleport
/// into init + CNOT + measure; Toffoli expands to the ancilla-free
/// 7-T Clifford+T network.
inline constexpr std::string_view kDefaultRulesText = R"(# built-in rewrite templates
rule h
p %old
v %old
p %old
end

rule x
v %old
v %old
end

rule z
p %old
p %old
end

rule p
init %anc Y
cnot %old %anc
measure %old Z
end

rule pdag
init %anc Y
cnot %old %anc
measure %old Z
end

rule t
init %anc A
cnot %old %anc
measure %old Z
end

rule tdag
init %anc A
cnot %old %anc
measure %old Z
end

rule v
init %anc Y
cnot %anc %old
measure %old X
end

rule vdag
init %anc Y
cnot %anc %old
measure %old X
end

rule toffoli
h %t
cnot %c2 %t
tdag %t
cnot %c1 %t
t %t
cnot %c2 %t
tdag %t
cnot %c1 %t
t %c2
t %t
h %t
cnot %c1 %c2
t %c1
tdag %c2
cnot %c1 %c2
end
)";

/// Rewrite rules keyed by the gate kind they replace. Parsed from template
/// text: `rule <gate>` ... `end` blocks whose body lines use the circuit
/// grammar with placeholder wires.
class RuleSet {
public:
    static RuleSet defaults() { return parse(kDefaultRulesText); }

    static RuleSet parse(std::string_view text) {
        using namespace io_detail;
        RuleSet rs;
        RewriteRule current;
        bool in_rule = false;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            std::string_view line =
                text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;

            auto tokens = tokenize(line);
            if (tokens.empty()) continue;
            const std::string head = lower(tokens[0].text);

            if (head == "rule") {
                if (in_rule) throw ParseError(line_no, tokens[0].column, "nested rule block");
                if (tokens.size() != 2) throw ParseError(line_no, tokens[0].column, "rule expects a gate kind");
                auto kind = keyword_kind(lower(tokens[1].text));
                if (!kind || !is_gate(*kind)) {
                    throw ParseError(line_no, tokens[1].column,
                                     "'" + tokens[1].text + "' is not a rewritable gate kind");
                }
                current = RewriteRule{};
                current.matches = *kind;
                in_rule = true;
                continue;
            }
            if (head == "end") {
                if (!in_rule) throw ParseError(line_no, tokens[0].column, "end outside a rule block");
                rs.finish_rule(current, line_no);
                in_rule = false;
                continue;
            }
            if (!in_rule) throw ParseError(line_no, tokens[0].column, "template line outside a rule block");

            auto kind = keyword_kind(head);
            if (!kind) throw ParseError(line_no, tokens[0].column, "unknown gate kind '" + tokens[0].text + "'");
            const std::size_t wires = arity(*kind);
            const std::size_t expected =
                1 + wires + (*kind == OpKind::Init || *kind == OpKind::Measure ? 1 : 0);
            if (tokens.size() != expected) {
                throw ParseError(line_no, tokens[0].column,
                                 std::string(kind_keyword(*kind)) + " expects " +
                                     std::to_string(expected - 1) + " argument(s)");
            }
            TemplateOp top;
            top.kind = *kind;
            for (std::size_t k = 0; k < wires; ++k) {
                const std::string operand = tokens[1 + k].text;
                const bool single = arity(current.matches) == 1;
                const bool valid = single ? (operand == "%old" || operand == "%anc")
                                          : (operand == "%c1" || operand == "%c2" || operand == "%t");
                if (!valid) {
                    throw ParseError(line_no, tokens[1 + k].column,
                                     "unknown placeholder '" + operand + "' for rule " +
                                         kind_keyword(current.matches));
                }
                top.operands.push_back(operand);
            }
            if (*kind == OpKind::Init) {
                auto state = state_from_token(tokens.back().text);
                if (!state) throw ParseError(line_no, tokens.back().column, "unknown state");
                top.state = *state;
            }
            if (*kind == OpKind::Measure) {
                auto basis = basis_from_token(tokens.back().text);
                if (!basis) throw ParseError(line_no, tokens.back().column, "unknown basis");
                top.basis = *basis;
            }
            current.body.push_back(std::move(top));
        }
        if (in_rule) throw ParseError(line_no, 1, "unterminated rule block");
        return rs;
    }

    [[nodiscard]] const RewriteRule* find(OpKind kind) const {
        auto it = rules_.find(kind);
        return it == rules_.end() ? nullptr : &it->second;
    }

    [[nodiscard]] const RewriteRule& at(OpKind kind) const {
        const RewriteRule* rule = find(kind);
        if (!rule) throw RewriteError(std::string("no rewrite rule for ") + kind_keyword(kind));
        return *rule;
    }

private:
    void finish_rule(RewriteRule& rule, std::size_t line_no) {
        if (rule.body.empty()) throw ParseError(line_no, 1, "empty rule body");
        std::size_t inits = 0, measures = 0, cnots = 0;
        for (const TemplateOp& top : rule.body) {
            for (const std::string& operand : top.operands) {
                if (operand == "%anc") rule.introduces_ancilla = true;
            }
        }
        for (const TemplateOp& top : rule.body) {
            if (top.kind == OpKind::Init) {
                ++inits;
                rule.ancilla_state = top.state;
                if (top.operands[0] != "%anc") {
                    throw ParseError(line_no, 1, "teleport init must target %anc");
                }
            }
            if (top.kind == OpKind::Measure) {
                ++measures;
                rule.measurement_basis = top.basis;
                if (top.operands[0] != "%old") {
                    throw ParseError(line_no, 1, "teleport measure must target %old");
                }
            }
            if (top.kind == OpKind::Cnot) ++cnots;
        }
        if (rule.introduces_ancilla && (inits != 1 || measures != 1 || cnots < 1)) {
            throw ParseError(line_no, 1,
                             "an ancilla rule needs exactly one init, one measure and a cnot");
        }
        if (!rule.introduces_ancilla && (inits != 0 || measures != 0)) {
            throw ParseError(line_no, 1, "init/measure require an ancilla rule");
        }
        rules_[rule.matches] = rule;
    }

    std::unordered_map<OpKind, RewriteRule> rules_;
};

namespace rewrite_detail {

/// Append the replacement sequence for `matched`. Inserted operations get
/// ids matched.id.0, matched.id.1, ... and reference their wires directly:
/// an ancilla rule splits the operated wire's leaf at the matched id and
/// hands the children out, so no other operation needs touching.
inline void instantiate_into(Circuit& c, const Operation& matched, const RewriteRule& rule,
                             std::vector<Operation>& out) {
    NodeHandle left = kNoNode;
    NodeHandle right = kNoNode;
    if (rule.introduces_ancilla) {
        NodeHandle leaf = c.diagram.resolve(matched.refs[0], matched.id);
        auto [l, r] = c.diagram.split_fresh(leaf, matched.id);
        left = l;
        right = r;
    }
    std::uint32_t i = 0;
    for (const TemplateOp& top : rule.body) {
        Operation& op = out.emplace_back();
        op.id = matched.id.child(i++);
        op.kind = top.kind;
        op.state = top.state;
        op.basis = top.basis;
        op.refs.reserve(top.operands.size());
        for (const std::string& operand : top.operands) {
            NodeHandle h = kNoNode;
            if (operand == "%old") h = rule.introduces_ancilla ? left : matched.refs[0];
            else if (operand == "%anc") h = right;
            else if (operand == "%c1") h = matched.refs[0];
            else if (operand == "%c2") h = matched.refs[1];
            else if (operand == "%t") h = matched.refs[2];
            op.refs.push_back(h);
            ++c.label_writes;
        }
    }
}

/// One left-to-right sweep replacing every gate of `match` kind. Equivalent
/// to repeated rewrite_gate calls but linear in the list length.
inline std::size_t rewrite_sweep(Circuit& c, OpKind match, const RewriteRule& rule,
                                 const Deadline& deadline) {
    std::size_t matches = 0;
    for (const Operation& op : c.ops) {
        if (op.kind == match) ++matches;
    }
    if (matches == 0) return 0;
    std::size_t fired = 0;
    std::vector<Operation> out;
    out.reserve(c.ops.size() + matches * (rule.body.size() - 1));
    for (Operation& op : c.ops) {
        deadline.poll();
        if (op.kind == match) {
            instantiate_into(c, op, rule, out);
            ++fired;
        } else {
            out.push_back(std::move(op));
        }
    }
    c.ops = std::move(out);
    return fired;
}

}  // namespace rewrite_detail

/// Replace the operation at `op_index` by the rule's template, in place.
/// Only the replaced slot and the diagram change; every other operation is
/// untouched and keeps resolving correctly through the recorded split.
inline void rewrite_gate(Circuit& c, std::size_t op_index, const RewriteRule& rule) {
    if (op_index >= c.ops.size()) throw RewriteError("rewrite_gate: op index out of range");
    if (c.ops[op_index].kind != rule.matches) {
        throw RewriteError(std::string("rewrite_gate: rule for ") + kind_keyword(rule.matches) +
                           " does not match " + kind_keyword(c.ops[op_index].kind));
    }
    Operation matched = std::move(c.ops[op_index]);
    std::vector<Operation> expansion;
    expansion.reserve(rule.body.size());
    rewrite_detail::instantiate_into(c, matched, rule, expansion);
    c.ops.erase(c.ops.begin() + static_cast<std::ptrdiff_t>(op_index));
    c.ops.insert(c.ops.begin() + static_cast<std::ptrdiff_t>(op_index),
                 std::make_move_iterator(expansion.begin()), std::make_move_iterator(expansion.end()));
}

/// Expand every Toffoli into the configured Clifford+T network (no ancillae,
/// wire count unchanged).
inline std::size_t decompose_toffoli(Circuit& c, const RuleSet& rules = RuleSet::defaults(),
                                     const Deadline& deadline = Deadline::never()) {
    return rewrite_detail::rewrite_sweep(c, OpKind::Toffoli, rules.at(OpKind::Toffoli), deadline);
}

/// Rewrite a Clifford+T circuit into ICM form: first the ancilla-free
/// reductions (H, then X, then Z), then one teleportation pass per remaining
/// single-qubit gate kind, in a fixed order. Returns the number of
/// teleportations fired, which equals the number of wires added.
inline std::size_t to_icm(Circuit& c, const RuleSet& rules = RuleSet::defaults(),
                          const Deadline& deadline = Deadline::never()) {
    for (const Operation& op : c.ops) {
        if (op.kind == OpKind::Toffoli) {
            throw RewriteError("to_icm: Toffoli present; run decompose_toffoli first");
        }
    }
    for (OpKind kind : {OpKind::H, OpKind::X, OpKind::Z}) {
        if (const RewriteRule* rule = rules.find(kind)) {
            if (!rule->introduces_ancilla) rewrite_detail::rewrite_sweep(c, kind, *rule, deadline);
        }
    }
    std::size_t teleports = 0;
    for (OpKind kind : {OpKind::P, OpKind::Pdag, OpKind::V, OpKind::Vdag, OpKind::T, OpKind::Tdag,
                        OpKind::H, OpKind::X, OpKind::Z}) {
        const RewriteRule* rule = rules.find(kind);
        if (rule && rule->introduces_ancilla) {
            teleports += rewrite_detail::rewrite_sweep(c, kind, *rule, deadline);
        }
    }
    for (const Operation& op : c.ops) {
        if (!is_icm_op(op.kind)) {
            throw RewriteError(std::string("to_icm: unsupported gate kind present: ") +
                               kind_keyword(op.kind));
        }
    }
    return teleports;
}

/// Wire registry size delta between two stages of the same circuit.
inline long count_ancillae_introduced(const Circuit& before, const Circuit& after) {
    return static_cast<long>(after.wire_count()) - static_cast<long>(before.wire_count());
}

}  // namespace wirelab
