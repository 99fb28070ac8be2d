// Acceptance suite: runs every shipped claim end to end and prints one
// PASS/FAIL line per criterion. Exit code is the number of failed criteria.

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "wirelab/wirelab.hpp"

using namespace wirelab;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[criterion %d] %s - %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct EngineRun {
    PipelineResult fast;
    PipelineResult naive;
    bool equal = false;
};

EngineRun run_both(const Circuit& input) {
    EngineRun r;
    r.fast = run_pipeline(input, Engine::Fast);
    r.naive = run_pipeline(input, Engine::Naive);
    r.equal = r.fast.icm_text == r.naive.icm_text && r.fast.recycled_text == r.naive.recycled_text;
    return r;
}

// ---- criterion 1 + 7 share these runs ------------------------------------

std::vector<EngineRun> g_adder_runs;
std::vector<EngineRun> g_random_runs;

void criterion_1_oracle_equivalence() {
    std::size_t mismatches = 0;
    for (std::size_t n = 4; n <= 20; ++n) {
        g_adder_runs.push_back(run_both(generate_adder(n)));
        if (!g_adder_runs.back().equal) ++mismatches;
    }
    std::mt19937 rng(1001);
    for (int i = 0; i < 1000; ++i) {
        Circuit c = parse_circuit(testutil::random_circuit_text(rng, 64, 256));
        g_random_runs.push_back(run_both(c));
        if (!g_random_runs.back().equal) ++mismatches;
    }
    std::ostringstream detail;
    detail << "fast and naive outputs identical after transform and recycle on add4..add20 and "
           << g_random_runs.size() << " random circuits (" << mismatches << " mismatches)";
    report(1, mismatches == 0, detail.str());
}

void criterion_2_worked_examples() {
    bool pass = true;
    std::string why = "gate lists of the worked examples reproduced";

    // round one: h 0 becomes p 0, v 0, p 0
    Circuit bell = parse_circuit("h 0\ncnot 0 1\n");
    const RuleSet rules = RuleSet::defaults();
    rewrite_gate(bell, 0, rules.at(OpKind::H));
    if (serialize_circuit(bell) != "p 0\nv 0\np 0\ncnot 0 1\n") {
        pass = false;
        why = "h rewrite did not produce [p 0, v 0, p 0, cnot 0 1]";
    }

    // round two: teleporting the first p, compared up to wire renaming
    rewrite_gate(bell, 0, rules.at(OpKind::P));
    const std::string expected_teleport =
        "init n0 Y\ncnot n1 n0\nmeasure n1 Z\nv n0\np n0\ncnot n0 n2\n";
    if (testutil::normalized(bell) != expected_teleport) {
        pass = false;
        why = "p teleport did not produce [init anc, cnot 0 anc, meas 0, v anc, p anc, cnot anc 1]";
    }

    // recycling the cnot chain: qubit 2 moves onto wire 0
    Circuit chain = testutil::example2_circuit();
    ReachMatrix m = analyze(chain);
    RecyclePlan full = plan_recycling(m, chain);
    const bool planned = std::any_of(full.pairs.begin(), full.pairs.end(), [](const RecyclePair& p) {
        return p.init_wire == "2" && p.target_wire == "0";
    });
    RecyclePlan one;
    one.pairs = {{"2", "0"}};
    Circuit rec = chain;
    apply_recycling(rec, one);
    const std::string rec_text = serialize_circuit(flush(rec));
    const std::string expected_recycled =
        "init 0 0\ninit 1 0\ninit 3 0\ncnot 0 1\nmeasure 0 Z\n"
        "init 0 0\ncnot 1 0\ncnot 0 3\nmeasure 0 Z\nmeasure 1 Z\nmeasure 3 Z\n";
    const bool rewrites_ok = rec_text == expected_recycled &&
                             rec_text.find("cnot 1 0") != std::string::npos &&
                             rec_text.find("cnot 0 3") != std::string::npos;
    if (!planned || !rewrites_ok) {
        pass = false;
        why = "recycling the cnot chain did not rewrite the references as published";
    }
    report(2, pass, why);
}

void criterion_3_reachability() {
    std::size_t mismatches = 0;
    std::mt19937 rng(3003);
    for (int i = 0; i < 500; ++i) {
        Circuit c = parse_circuit(testutil::random_circuit_text(rng, 64, 200));
        if (!(analyze(c) == analyze_bruteforce(c))) ++mismatches;
    }

    ReachMatrix m = analyze(testutil::example2_circuit());
    auto row = [&](const char* w) {
        std::set<std::string> out;
        for (std::size_t j : m.row(w).to_set()) out.insert(m.index_to_label[j]);
        return out;
    };
    const bool sets_ok = row("0") == std::set<std::string>{"0", "1", "2", "3"} &&
                         row("1") == std::set<std::string>{"0", "1", "2", "3"} &&
                         row("2") == std::set<std::string>{"1", "2", "3"} &&
                         row("3") == std::set<std::string>{"2", "3"};
    std::ostringstream detail;
    detail << "analyze == brute force on 500 random circuits (" << mismatches
           << " mismatches); cnot-chain reach sets " << (sets_ok ? "exact" : "WRONG");
    report(3, mismatches == 0 && sets_ok, detail.str());
}

void criterion_4_update_counts() {
    Circuit bell = parse_circuit("h 0\ncnot 0 1\n");

    Circuit fast = bell;
    decompose_toffoli(fast);
    to_icm(fast);

    EagerCircuit naive = eager_from_circuit(bell);
    eager_decompose_toffoli(naive);
    eager_to_icm(naive);

    const auto delta = naive.label_writes - fast.label_writes;
    std::ostringstream detail;
    detail << "bell walkthrough label writes: naive " << naive.label_writes << ", fast "
           << fast.label_writes << ", delta " << delta << " (want 12 = 4+2+6)";
    report(4, delta == 12, detail.str());
}

void criterion_5_memory_formula() {
    const std::uint64_t bytes = memory_estimate(100000);
    std::ostringstream detail;
    detail << "memory_estimate(100000) = " << bytes << " bytes (want 1250000000)";
    report(5, bytes == 1250000000ull, detail.str());
}

struct SweepPoint {
    std::size_t n;
    double naive_t;
    double fast_t;
    double impr;
};

bool run_sweep(std::vector<SweepPoint>& points, std::string& why) {
    points.clear();
    std::vector<std::size_t> sizes;
    for (std::size_t n = 4; n <= 20; ++n) sizes.push_back(n);
    sizes.push_back(100);
    sizes.push_back(200);

    BenchOptions opt;
    opt.reps = 3;
    opt.phases = {true, false};  // the timing claim concerns the transform
    opt.timeout_seconds = 0;
    for (std::size_t n : sizes) {
        BenchRow row = bench_circuit("add" + std::to_string(n), generate_adder(n), opt);
        if (!row.naive_t || !row.fast_t) {
            why = "missing timing at add" + std::to_string(n);
            return false;
        }
        points.push_back({n, *row.naive_t, *row.fast_t, *row.naive_t / *row.fast_t});
    }

    bool ok = true;
    double running_max = 0;
    double impr100 = 0;
    for (const SweepPoint& p : points) {
        if (p.fast_t >= p.naive_t) {
            why = "fast did not beat naive at add" + std::to_string(p.n);
            ok = false;
            break;
        }
        // non-decreasing within noise: no point may fall below 0.45x the best so far
        if (running_max > 0 && p.impr < 0.45 * running_max) {
            why = "speedup fell below the noise band at add" + std::to_string(p.n);
            ok = false;
            break;
        }
        running_max = std::max(running_max, p.impr);
        if (p.n == 100) impr100 = p.impr;
    }
    if (ok && impr100 < 5.0) {
        why = "speedup at add100 is " + std::to_string(impr100) + ", want >= 5";
        ok = false;
    }
    return ok;
}

void criterion_6_performance_trend() {
    std::vector<SweepPoint> points;
    std::string why;
    bool ok = run_sweep(points, why);
    int attempts = 1;
    if (!ok) {  // timing on shared hardware can be noisy; one honest re-measure
        std::printf("  (sweep retry after: %s)\n", why.c_str());
        ok = run_sweep(points, why);
        attempts = 2;
    }
    std::ostringstream detail;
    detail << "transform speedups over add4..add20,add100,add200:";
    for (const SweepPoint& p : points) {
        detail << " " << std::to_string(p.impr).substr(0, 5);
    }
    detail << " (median of 3, " << attempts << " attempt" << (attempts > 1 ? "s" : "") << ")";
    if (!ok) detail << " - " << why;
    report(6, ok, detail.str());
}

void criterion_7_structural_arithmetic() {
    std::size_t violations = 0;
    auto check_run = [&](const EngineRun& r) {
        if (r.fast.icm_wires - r.fast.input_wires != r.fast.teleports) ++violations;
        if (r.fast.icm_wires - r.fast.recycled_wires != r.fast.plan_size) ++violations;
        if (r.naive.icm_wires - r.naive.input_wires != r.naive.teleports) ++violations;
        if (r.naive.icm_wires - r.naive.recycled_wires != r.naive.plan_size) ++violations;
    };
    for (const EngineRun& r : g_adder_runs) check_run(r);
    for (const EngineRun& r : g_random_runs) check_run(r);
    std::ostringstream detail;
    detail << "icm_wires - input_wires == teleports and wires removed == plan size on "
           << (g_adder_runs.size() + g_random_runs.size()) << " pipeline runs (" << violations
           << " violations)";
    report(7, violations == 0, detail.str());
}

void criterion_8_invariant_suites() {
    std::size_t failures = 0;

    // gate id total order laws
    {
        std::mt19937 rng(8001);
        std::uniform_int_distribution<std::size_t> len(1, 4);
        std::uniform_int_distribution<std::uint32_t> digit(0, 6);
        auto random_id = [&] {
            GateId id = GateId::min();
            const std::size_t n = len(rng);
            for (std::size_t i = 0; i < n; ++i) id = id.child(digit(rng));
            return id;
        };
        for (int i = 0; i < 1000; ++i) {
            const GateId a = random_id(), b = random_id(), c = random_id();
            const auto ab = a.compare(b), ba = b.compare(a);
            if ((ab == std::strong_ordering::less) != (ba == std::strong_ordering::greater)) ++failures;
            if ((ab == std::strong_ordering::equal) != (a == b)) ++failures;
            if (ab != std::strong_ordering::greater && b.compare(c) != std::strong_ordering::greater &&
                a.compare(c) == std::strong_ordering::greater) {
                ++failures;
            }
        }
    }

    // flush idempotence over manipulated circuits
    {
        std::mt19937 rng(8002);
        for (int i = 0; i < 1000; ++i) {
            Circuit c = parse_circuit(testutil::random_circuit_text(rng, 24, 64));
            decompose_toffoli(c);
            to_icm(c);
            Circuit once = flush(c);
            Circuit twice = flush(once);
            if (serialize_circuit(once) != serialize_circuit(twice)) ++failures;
            if (!is_flushed(once)) ++failures;
        }
    }

    // resolve purity and acyclicity over random split/join sequences
    {
        std::mt19937 rng(8003);
        for (int iter = 0; iter < 1000; ++iter) {
            Diagram d;
            std::vector<WireLabel> live;
            for (int w = 0; w < 4; ++w) {
                live.push_back("q" + std::to_string(w));
                d.add_root(live.back());
            }
            std::vector<std::pair<GateId, NodeHandle>> probes;
            for (int s = 0; s < 16; ++s) {
                const std::size_t i = rng() % live.size();
                if (rng() % 2 == 0) {
                    const WireLabel l = "s" + std::to_string(s) + "L";
                    const WireLabel r = "s" + std::to_string(s) + "R";
                    probes.emplace_back(GateId::single(static_cast<std::uint32_t>(s)),
                                        d.live_node(live[i]));
                    d.split(d.live_node(live[i]), GateId::single(static_cast<std::uint32_t>(s)), l, r);
                    live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
                    live.push_back(l);
                    live.push_back(r);
                } else if (live.size() >= 2) {
                    std::size_t j = rng() % live.size();
                    if (i == j) continue;
                    d.join(d.live_node(live[i]), d.live_node(live[j]));  // throws on any cycle
                    live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
                }
            }
            for (const auto& [id, node] : probes) {
                const WireLabel first = d.resolve_label(node, id);
                const std::size_t arena = d.size();
                if (d.resolve_label(node, id) != first) ++failures;  // purity
                if (d.size() != arena) ++failures;                   // no hidden mutation
            }
            for (const WireLabel& w : live) {
                if (!d.node(d.live_node(w)).is_leaf()) ++failures;  // live wires stay leaves
            }
        }
    }

    // per-qubit order preservation under recycling
    {
        std::mt19937 rng(8004);
        for (int i = 0; i < 1000; ++i) {
            Circuit c = parse_circuit(testutil::random_circuit_text(rng, 24, 96));
            decompose_toffoli(c);
            to_icm(c);
            Circuit icm = flush(c);
            ReachMatrix m = analyze(icm);
            RecyclePlan plan = plan_recycling(m, icm);
            Circuit rec = icm;
            apply_recycling(rec, plan);
            auto reportv = validate_recycled(icm, m, plan, rec);
            if (!reportv.pass) ++failures;
        }
    }

    std::ostringstream detail;
    detail << "gate-id order laws, flush idempotence, resolve purity, recycle order "
              "preservation, join acyclicity: 1000 cases each ("
           << failures << " failures)";
    report(8, failures == 0, detail.str());
}

}  // namespace

int main() {
    std::printf("wirelab acceptance suite\n");
    criterion_1_oracle_equivalence();
    criterion_2_worked_examples();
    criterion_3_reachability();
    criterion_4_update_counts();
    criterion_5_memory_formula();
    criterion_6_performance_trend();
    criterion_7_structural_arithmetic();
    criterion_8_invariant_suites();
    std::printf("%d of 8 criteria passed\n", 8 - g_failures);
    return g_failures;
}
