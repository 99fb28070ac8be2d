#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wirelab/gate_id.hpp"

namespace wirelab {

using WireLabel = std::string;
using NodeHandle = std::uint32_t;
using LabelId = std::uint32_t;

inline constexpr NodeHandle kNoNode = std::numeric_limits<NodeHandle>::max();

class DiagramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One node of a wire label reference diagram.
///
/// A leaf (no threshold, no children) names a wire directly. An interior node
/// records a structural decision: operations whose id falls before the
/// threshold resolve into the left child, the rest into the right child.
/// Recycle joins produce nodes with a sentinel threshold and only a right
/// child, so every operation falls through to the joined wire. Labels are
/// interned; the text lives in the owning diagram's label table.
struct DiagramNode {
    LabelId label = 0;
    std::optional<GateId> threshold;
    NodeHandle left = kNoNode;
    NodeHandle right = kNoNode;

    [[nodiscard]] bool is_leaf() const { return !threshold.has_value() && left == kNoNode && right == kNoNode; }
};

/// Arena of diagram nodes plus the wire registry.
///
/// Operations hold NodeHandles rather than labels; handles stay valid across
/// splits and joins, and the label an operation actually refers to is
/// recovered lazily by resolve(). Splits record rewrites that introduced an
/// ancilla, joins record recycling decisions. Retired labels are kept in the
/// arena for diagnostics but leave the live registry.
class Diagram {
public:
    NodeHandle add_root(const WireLabel& label) {
        NodeHandle h = add_node(intern_fresh(label));
        set_live(arena_.back().label, h);
        ++live_count_;
        roots_.push_back(h);
        return h;
    }

    /// Split the wire of a leaf in two, recording `threshold` as the decision
    /// point. Operations before the threshold resolve to the left child, the
    /// rest to the right child. Both child labels must be fresh.
    std::pair<NodeHandle, NodeHandle> split(NodeHandle h, const GateId& threshold,
                                            const WireLabel& left_label,
                                            const WireLabel& right_label) {
        if (left_label == right_label || label_used(left_label) || label_used(right_label)) {
            throw DiagramError("split: duplicate wire label");
        }
        LabelId l = intern_fresh(left_label);
        LabelId r = intern_fresh(right_label);
        return split_ids(h, threshold, l, r);
    }

    /// split() with generated labels; the common path for teleport rewrites.
    std::pair<NodeHandle, NodeHandle> split_fresh(NodeHandle h, const GateId& threshold) {
        LabelId l = fresh_label_id();
        LabelId r = fresh_label_id();
        return split_ids(h, threshold, l, r);
    }

    /// Join the wire of `init_h` onto `target_h`: the recycled wire's
    /// initialisation is placed after the target wire's measurement, so all
    /// its operations must from now on resolve into the target. The sentinel
    /// threshold sends every id to the right child. The joined label retires.
    void join(NodeHandle init_h, NodeHandle target_h) {
        if (init_h == target_h) throw DiagramError("join: cannot join a wire with itself");
        const DiagramNode& init_node = node(init_h);
        if (!init_node.is_leaf()) throw DiagramError("join: '" + label_of(init_h) + "' is not a leaf");
        if (live_node_of(init_node.label) != init_h) {
            throw DiagramError("join: '" + label_of(init_h) + "' is not a live wire");
        }
        (void)node(target_h);  // bounds check
        if (reaches(target_h, init_h)) {
            throw DiagramError("join: would create a cycle through '" + label_of(init_h) + "'");
        }
        DiagramNode& n = arena_[init_h];
        n.threshold = GateId::min();
        n.right = target_h;
        set_live(n.label, kNoNode);
        --live_count_;
    }

    /// Walk from `h` choosing children by threshold until a node with no
    /// threshold or no children is reached. Pure; the arena is not touched.
    [[nodiscard]] NodeHandle resolve(NodeHandle h, const GateId& id) const {
        for (;;) {
            const DiagramNode& n = node(h);
            if (!n.threshold.has_value()) return h;
            if (n.left == kNoNode && n.right == kNoNode) return h;
            NodeHandle next = is_after(id, *n.threshold) ? n.right : n.left;
            if (next == kNoNode) return h;
            h = next;
        }
    }

    [[nodiscard]] const WireLabel& resolve_label(NodeHandle h, const GateId& id) const {
        return labels_[node(resolve(h, id)).label];
    }

    /// Number of edges walked by resolve(); the cost a lazy lookup pays.
    [[nodiscard]] std::size_t resolution_depth(NodeHandle h, const GateId& id) const {
        std::size_t depth = 0;
        for (;;) {
            const DiagramNode& n = node(h);
            if (!n.threshold.has_value()) return depth;
            if (n.left == kNoNode && n.right == kNoNode) return depth;
            NodeHandle next = is_after(id, *n.threshold) ? n.right : n.left;
            if (next == kNoNode) return depth;
            h = next;
            ++depth;
        }
    }

    [[nodiscard]] const DiagramNode& node(NodeHandle h) const {
        if (h >= arena_.size()) throw DiagramError("dangling node handle");
        return arena_[h];
    }

    [[nodiscard]] const WireLabel& label_of(NodeHandle h) const { return labels_[node(h).label]; }

    [[nodiscard]] bool is_live(const WireLabel& label) const {
        auto it = label_index_.find(label);
        return it != label_index_.end() && live_leaf_[it->second] != kNoNode;
    }

    [[nodiscard]] NodeHandle live_node(const WireLabel& label) const {
        auto it = label_index_.find(label);
        if (it == label_index_.end() || live_leaf_[it->second] == kNoNode) {
            throw DiagramError("no live wire named '" + label + "'");
        }
        return live_leaf_[it->second];
    }

    [[nodiscard]] std::size_t live_count() const { return live_count_; }

    [[nodiscard]] bool label_used(const WireLabel& label) const { return label_index_.count(label) != 0; }

    [[nodiscard]] const std::vector<NodeHandle>& roots() const { return roots_; }

    [[nodiscard]] std::size_t size() const { return arena_.size(); }

    /// Deterministic generator of wire labels unused in this diagram.
    WireLabel fresh_label() {
        for (;;) {
            WireLabel candidate = "w" + std::to_string(fresh_counter_++);
            if (!label_index_.count(candidate)) return candidate;
        }
    }

    /// Graphviz dump for debugging; one record per node with its threshold.
    [[nodiscard]] std::string to_dot() const {
        std::string out = "digraph wire_labels {\n  node [shape=record];\n";
        for (NodeHandle h = 0; h < arena_.size(); ++h) {
            const DiagramNode& n = arena_[h];
            out += "  n" + std::to_string(h) + " [label=\"" + labels_[n.label] + " | " +
                   (n.threshold ? n.threshold->str() : "n/a") + "\"];\n";
        }
        for (NodeHandle h = 0; h < arena_.size(); ++h) {
            const DiagramNode& n = arena_[h];
            if (n.left != kNoNode)
                out += "  n" + std::to_string(h) + " -> n" + std::to_string(n.left) + " [label=\"L\"];\n";
            if (n.right != kNoNode)
                out += "  n" + std::to_string(h) + " -> n" + std::to_string(n.right) + " [label=\"R\"];\n";
        }
        out += "}\n";
        return out;
    }

    /// True if `to` is reachable from `from` through child edges. Joins share
    /// subtrees, so the structure is a DAG; this is the acyclicity guard.
    [[nodiscard]] bool reaches(NodeHandle from, NodeHandle to) const {
        if (from == to) return true;
        std::vector<NodeHandle> stack{from};
        std::unordered_set<NodeHandle> seen;
        while (!stack.empty()) {
            NodeHandle h = stack.back();
            stack.pop_back();
            if (!seen.insert(h).second) continue;
            const DiagramNode& n = node(h);
            for (NodeHandle next : {n.left, n.right}) {
                if (next == to) return true;
                if (next != kNoNode) stack.push_back(next);
            }
        }
        return false;
    }

private:
    LabelId intern_fresh(const WireLabel& label) {
        auto [it, inserted] = label_index_.try_emplace(label, static_cast<LabelId>(labels_.size()));
        if (!inserted) throw DiagramError("duplicate wire label '" + label + "'");
        labels_.push_back(label);
        live_leaf_.push_back(kNoNode);
        return it->second;
    }

    LabelId fresh_label_id() {
        for (;;) {
            WireLabel candidate = "w" + std::to_string(fresh_counter_++);
            auto [it, inserted] = label_index_.try_emplace(candidate, static_cast<LabelId>(labels_.size()));
            if (!inserted) continue;
            labels_.push_back(std::move(candidate));
            live_leaf_.push_back(kNoNode);
            return it->second;
        }
    }

    std::pair<NodeHandle, NodeHandle> split_ids(NodeHandle h, const GateId& threshold, LabelId left_label,
                                                LabelId right_label) {
        {
            const DiagramNode& parent = node(h);
            if (!parent.is_leaf()) throw DiagramError("split: node '" + label_of(h) + "' is not a leaf");
        }
        NodeHandle l = add_node(left_label);
        NodeHandle r = add_node(right_label);
        DiagramNode& p = arena_[h];
        p.threshold = threshold;
        p.left = l;
        p.right = r;
        set_live(p.label, kNoNode);
        set_live(left_label, l);
        set_live(right_label, r);
        ++live_count_;  // one wire became two
        return {l, r};
    }

    NodeHandle add_node(LabelId label) {
        arena_.push_back(DiagramNode{label, std::nullopt, kNoNode, kNoNode});
        return static_cast<NodeHandle>(arena_.size() - 1);
    }

    void set_live(LabelId label, NodeHandle h) { live_leaf_[label] = h; }

    [[nodiscard]] NodeHandle live_node_of(LabelId label) const { return live_leaf_[label]; }

    std::vector<DiagramNode> arena_;
    std::vector<NodeHandle> roots_;
    std::vector<WireLabel> labels_;                       // label id -> text
    std::vector<NodeHandle> live_leaf_;                   // label id -> live leaf (or none)
    std::unordered_map<WireLabel, LabelId> label_index_;  // every label ever used
    std::size_t live_count_ = 0;
    std::uint64_t fresh_counter_ = 0;
};

}  // namespace wirelab
