#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wirelab/adder.hpp"
#include "wirelab/circuit.hpp"
#include "wirelab/deadline.hpp"
#include "wirelab/io.hpp"
#include "wirelab/naive.hpp"
#include "wirelab/reachability.hpp"
#include "wirelab/recycle.hpp"
#include "wirelab/rewrite.hpp"

namespace wirelab {

enum class Engine { Fast, Naive };

inline const char* engine_name(Engine e) { return e == Engine::Fast ? "fast" : "naive"; }

struct PipelinePhases {
    bool transform = true;
    bool recycle = true;
};

/// Result of running transform and/or recycle on one engine. Timing cells
/// are empty when the phase timed out; the serialized circuits are kept so
/// callers can check both engines produced the same thing.
struct PipelineResult {
    Engine engine = Engine::Fast;
    std::size_t input_wires = 0;
    std::size_t input_gates = 0;  // gates only, init/measure not counted
    std::optional<double> transform_s;
    std::optional<double> recycle_s;
    bool transform_timeout = false;
    bool recycle_timeout = false;
    std::size_t icm_wires = 0;
    std::size_t icm_ops = 0;
    std::size_t teleports = 0;
    std::size_t toffolis = 0;
    std::size_t plan_size = 0;
    std::size_t recycled_wires = 0;
    std::uint64_t label_writes = 0;
    std::string icm_text;
    std::string recycled_text;
};

namespace bench_detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline std::size_t count_gates(const Circuit& c) {
    std::size_t n = 0;
    for (const Operation& op : c.ops) {
        if (is_gate(op.kind)) ++n;
    }
    return n;
}

}  // namespace bench_detail

/// Run the ICM transform and/or wire-recycling phase on the chosen engine,
/// wall-clock timing each phase. A timeout leaves the phase's cell empty and
/// skips the rest of the pipeline.
inline PipelineResult run_pipeline(const Circuit& input, Engine engine,
                                   PipelinePhases phases = {},
                                   double timeout_seconds = 0.0,
                                   const RuleSet& rules = RuleSet::defaults()) {
    PipelineResult r;
    r.engine = engine;
    r.input_wires = input.wire_count();
    r.input_gates = bench_detail::count_gates(input);

    auto deadline = [&] {
        return timeout_seconds > 0.0 ? Deadline::in_seconds(timeout_seconds) : Deadline::never();
    };

    if (engine == Engine::Fast) {
        Circuit c = input;
        if (phases.transform) {
            try {
                Deadline dl = deadline();
                auto start = std::chrono::steady_clock::now();
                r.toffolis = decompose_toffoli(c, rules, dl);
                r.teleports = to_icm(c, rules, dl);
                c = flush(c);
                r.transform_s = bench_detail::seconds_since(start);
            } catch (const TimeoutError&) {
                r.transform_timeout = true;
                return r;
            }
            r.icm_wires = c.wire_count();
            r.icm_ops = c.ops.size();
            r.label_writes = c.label_writes;
            r.icm_text = serialize_circuit(c);
        }
        if (phases.recycle) {
            try {
                Deadline dl = deadline();
                auto start = std::chrono::steady_clock::now();
                ReachMatrix m = analyze(c, dl);
                RecyclePlan plan = plan_recycling(m, c);
                apply_recycling(c, plan, dl);
                c = flush(c);
                r.recycle_s = bench_detail::seconds_since(start);
                r.plan_size = plan.pairs.size();
            } catch (const TimeoutError&) {
                r.recycle_timeout = true;
                return r;
            }
            r.recycled_wires = c.wire_count();
            r.label_writes = c.label_writes;
            r.recycled_text = serialize_circuit(c);
        }
        return r;
    }

    EagerCircuit ec = eager_from_circuit(input);
    if (phases.transform) {
        try {
            Deadline dl = deadline();
            auto start = std::chrono::steady_clock::now();
            r.toffolis = eager_decompose_toffoli(ec, rules, dl);
            r.teleports = eager_to_icm(ec, rules, dl);
            r.transform_s = bench_detail::seconds_since(start);
        } catch (const TimeoutError&) {
            r.transform_timeout = true;
            return r;
        }
        r.icm_wires = ec.wire_count();
        r.icm_ops = ec.ops.size();
        r.label_writes = ec.label_writes;
        r.icm_text = eager_serialize(ec);
    }
    if (phases.recycle) {
        try {
            Deadline dl = deadline();
            auto start = std::chrono::steady_clock::now();
            RecyclePlan plan = eager_plan_recycling(ec, dl);
            eager_apply_recycling(ec, plan, dl);
            r.recycle_s = bench_detail::seconds_since(start);
            r.plan_size = plan.pairs.size();
        } catch (const TimeoutError&) {
            r.recycle_timeout = true;
            return r;
        }
        r.recycled_wires = ec.wire_count();
        r.label_writes = ec.label_writes;
        r.recycled_text = eager_serialize(ec);
    }
    return r;
}

/// One line of the benchmark CSV. Empty optionals render as blank cells.
struct BenchRow {
    std::string circuit;
    std::size_t wires = 0;
    std::size_t gates = 0;
    std::optional<double> naive_t;
    std::optional<double> fast_t;
    std::optional<double> impr_t;
    std::size_t icm_wires = 0;
    std::size_t icm_ops = 0;
    std::optional<double> naive_r;
    std::optional<double> fast_r;
    std::optional<double> impr_r;
};

inline constexpr const char* kCsvHeader =
    "circuit,wires,gates,naive_t,fast_t,impr_t,icm_wires,icm_ops,naive_r,fast_r,impr_r";

inline std::string format_csv_row(const BenchRow& row) {
    auto cell = [](const std::optional<double>& v) {
        if (!v) return std::string{};
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", *v);
        return std::string(buf);
    };
    std::string out = row.circuit;
    out += ',' + std::to_string(row.wires);
    out += ',' + std::to_string(row.gates);
    out += ',' + cell(row.naive_t);
    out += ',' + cell(row.fast_t);
    out += ',' + cell(row.impr_t);
    out += ',' + std::to_string(row.icm_wires);
    out += ',' + std::to_string(row.icm_ops);
    out += ',' + cell(row.naive_r);
    out += ',' + cell(row.fast_r);
    out += ',' + cell(row.impr_r);
    return out;
}

inline void emit_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file '" + path + "'");
    out << kCsvHeader << '\n';
    for (const BenchRow& row : rows) out << format_csv_row(row) << '\n';
    if (!out) throw std::runtime_error("I/O failure writing '" + path + "'");
}

/// Adder size specifications: "A..B", "A..B,step" or a single "N".
inline std::vector<std::size_t> parse_adder_range(const std::string& spec) {
    std::vector<std::size_t> sizes;
    const auto dots = spec.find("..");
    if (dots == std::string::npos) {
        sizes.push_back(std::stoul(spec));
        return sizes;
    }
    const std::size_t from = std::stoul(spec.substr(0, dots));
    std::string rest = spec.substr(dots + 2);
    std::size_t step = 1;
    if (const auto comma = rest.find(','); comma != std::string::npos) {
        step = std::stoul(rest.substr(comma + 1));
        rest = rest.substr(0, comma);
    }
    const std::size_t to = std::stoul(rest);
    if (step == 0 || to < from) throw std::invalid_argument("bad adder range '" + spec + "'");
    for (std::size_t n = from; n <= to; n += step) sizes.push_back(n);
    return sizes;
}

struct BenchOptions {
    double timeout_seconds = 2000.0;
    std::size_t reps = 3;          // timed samples, per-phase median taken
    double min_window_s = 0.05;    // sub-window runs are looped and averaged
    bool run_naive = true;
    bool run_fast = true;
    bool check_equal = true;       // compare engine outputs when both ran
    PipelinePhases phases;
};

namespace bench_detail {

struct EngineSamples {
    std::optional<PipelineResult> result;
    std::vector<double> transform_samples;
    std::vector<double> recycle_samples;
    std::size_t iters = 1;
    bool timed_out = false;
};

}  // namespace bench_detail

/// Benchmark one circuit on both engines: transform timings, then recycle
/// timings on the transformed circuit. One discarded calibration run per
/// engine warms caches and sizes the timing window; sub-window circuits are
/// looped inside each sample so scheduler noise averages out, and the
/// engines' samples are interleaved so ambient load hits both alike.
/// Medians over `reps` samples; a timed-out phase leaves its cells blank but
/// the sweep continues.
inline BenchRow bench_circuit(const std::string& name, const Circuit& input,
                              const BenchOptions& opt, std::ostream* log = nullptr,
                              const RuleSet& rules = RuleSet::defaults()) {
    BenchRow row;
    row.circuit = name;
    row.wires = input.wire_count();
    row.gates = bench_detail::count_gates(input);

    bench_detail::EngineSamples samples[2];  // [0]=fast, [1]=naive
    const bool enabled[2] = {opt.run_fast, opt.run_naive};
    const Engine engines[2] = {Engine::Fast, Engine::Naive};

    for (int e = 0; e < 2; ++e) {
        if (!enabled[e]) continue;
        PipelineResult first = run_pipeline(input, engines[e], opt.phases, opt.timeout_seconds, rules);
        if (first.transform_timeout || first.recycle_timeout) {
            samples[e].timed_out = true;
            samples[e].result = std::move(first);
            continue;
        }
        const double total = first.transform_s.value_or(0) + first.recycle_s.value_or(0);
        if (opt.min_window_s > 0 && total < opt.min_window_s) {
            samples[e].iters = std::min<std::size_t>(
                501, 1 + static_cast<std::size_t>(opt.min_window_s / std::max(total, 1e-7)));
        }
        samples[e].result = std::move(first);
    }

    for (std::size_t rep = 0; rep < opt.reps; ++rep) {
        for (int e = 0; e < 2; ++e) {
            if (!enabled[e] || samples[e].timed_out) continue;
            double t_sum = 0, r_sum = 0;
            bool has_t = false, has_r = false;
            for (std::size_t k = 0; k < samples[e].iters; ++k) {
                PipelineResult r = run_pipeline(input, engines[e], opt.phases, opt.timeout_seconds, rules);
                if (r.transform_timeout || r.recycle_timeout) {
                    samples[e].timed_out = true;
                    samples[e].result = std::move(r);
                    break;
                }
                if (r.transform_s) {
                    t_sum += *r.transform_s;
                    has_t = true;
                }
                if (r.recycle_s) {
                    r_sum += *r.recycle_s;
                    has_r = true;
                }
                samples[e].result = std::move(r);
            }
            if (samples[e].timed_out) continue;
            const double iters = static_cast<double>(samples[e].iters);
            if (has_t) samples[e].transform_samples.push_back(t_sum / iters);
            if (has_r) samples[e].recycle_samples.push_back(r_sum / iters);
        }
    }

    auto median_of = [](std::vector<double>& values) -> std::optional<double> {
        if (values.empty()) return std::nullopt;
        std::sort(values.begin(), values.end());
        return values[values.size() / 2];
    };
    std::optional<PipelineResult> fast, naive;
    if (opt.run_fast && samples[0].result) {
        fast = std::move(samples[0].result);
        if (!samples[0].timed_out) {
            fast->transform_s = median_of(samples[0].transform_samples);
            fast->recycle_s = median_of(samples[0].recycle_samples);
        }
        row.fast_t = fast->transform_s;
        row.fast_r = fast->recycle_s;
        row.icm_wires = fast->icm_wires;
        row.icm_ops = fast->icm_ops;
    }
    if (opt.run_naive && samples[1].result) {
        naive = std::move(samples[1].result);
        if (!samples[1].timed_out) {
            naive->transform_s = median_of(samples[1].transform_samples);
            naive->recycle_s = median_of(samples[1].recycle_samples);
        }
        row.naive_t = naive->transform_s;
        row.naive_r = naive->recycle_s;
        if (!opt.run_fast) {
            row.icm_wires = naive->icm_wires;
            row.icm_ops = naive->icm_ops;
        }
    }
    if (row.naive_t && row.fast_t && *row.fast_t > 0) row.impr_t = *row.naive_t / *row.fast_t;
    if (row.naive_r && row.fast_r && *row.fast_r > 0) row.impr_r = *row.naive_r / *row.fast_r;

    if (opt.check_equal && fast && naive && !fast->icm_text.empty() && !naive->icm_text.empty()) {
        if (fast->icm_text != naive->icm_text || fast->recycled_text != naive->recycled_text) {
            throw std::runtime_error("engine outputs differ on circuit '" + name + "'");
        }
    }
    if (log) {
        *log << format_csv_row(row) << '\n';
        log->flush();
    }
    return row;
}

}  // namespace wirelab
