// Command line front end: adder generation, ICM transform, wire recycling
// and the naive-versus-fast benchmark sweep.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wirelab/wirelab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitTimeout = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

wirelab::RuleSet load_rules(const std::string& templates_path) {
    if (templates_path.empty()) return wirelab::RuleSet::defaults();
    return wirelab::RuleSet::parse(read_file(templates_path));
}

wirelab::Engine parse_engine(const std::string& name) {
    if (name == "fast") return wirelab::Engine::Fast;
    if (name == "naive") return wirelab::Engine::Naive;
    throw CLI::ValidationError("--engine", "expected fast or naive");
}

int cmd_gen_adder(std::size_t bits, const std::string& out_path) {
    wirelab::Circuit c = wirelab::generate_adder(bits);
    write_file(out_path, wirelab::serialize_circuit(c));
    std::cerr << "add" << bits << ": " << c.wire_count() << " wires, " << c.ops.size()
              << " ops -> " << out_path << "\n";
    return kExitOk;
}

int cmd_transform(const std::string& in_path, const std::string& engine_name,
                  const std::string& out_path, const std::string& templates_path) {
    const wirelab::RuleSet rules = load_rules(templates_path);
    const wirelab::Engine engine = parse_engine(engine_name);
    wirelab::Circuit input = wirelab::parse_circuit(read_file(in_path));
    wirelab::PipelineResult r =
        wirelab::run_pipeline(input, engine, {true, false}, 0.0, rules);
    write_file(out_path, r.icm_text);
    std::cerr << engine_name << " transform: " << r.icm_wires << " wires, " << r.icm_ops
              << " ops, " << r.teleports << " teleportations, "
              << *r.transform_s << " s -> " << out_path << "\n";
    return kExitOk;
}

int cmd_recycle(const std::string& in_path, const std::string& engine_name,
                const std::string& out_path, std::size_t rounds) {
    const wirelab::Engine engine = parse_engine(engine_name);
    std::string text = read_file(in_path);
    std::size_t removed_total = 0;
    for (std::size_t round = 0; round < rounds; ++round) {
        wirelab::Circuit c = wirelab::parse_circuit(text);
        wirelab::PipelineResult r = wirelab::run_pipeline(c, engine, {false, true});
        if (r.plan_size == 0) break;
        removed_total += r.plan_size;
        text = r.recycled_text;
    }
    write_file(out_path, text);
    std::cerr << engine_name << " recycle: removed " << removed_total << " wires over up to "
              << rounds << " round(s) -> " << out_path << "\n";
    return kExitOk;
}

int cmd_bench(const std::vector<std::string>& adder_specs, const std::vector<std::string>& inputs,
              const std::string& engine_name, double timeout, const std::string& csv_path,
              std::size_t reps) {
    wirelab::BenchOptions opt;
    opt.timeout_seconds = timeout;
    opt.reps = reps;
    opt.run_fast = engine_name != "naive";
    opt.run_naive = engine_name != "fast";

    struct Job {
        std::string name;
        wirelab::Circuit circuit;
    };
    std::vector<Job> jobs;
    for (const std::string& spec : adder_specs) {
        for (std::size_t n : wirelab::parse_adder_range(spec)) {
            jobs.push_back({"add" + std::to_string(n), wirelab::generate_adder(n)});
        }
    }
    for (const std::string& path : inputs) {
        jobs.push_back({path, wirelab::parse_circuit(read_file(path))});
    }
    if (jobs.empty()) throw CLI::ValidationError("bench", "nothing to run: give --adders or --input");

    std::cout << wirelab::kCsvHeader << "\n";
    std::vector<wirelab::BenchRow> rows;
    bool any_timeout = false;
    for (const Job& job : jobs) {
        wirelab::BenchRow row = wirelab::bench_circuit(job.name, job.circuit, opt, &std::cout);
        any_timeout |= (opt.run_naive && (!row.naive_t.has_value() || !row.naive_r.has_value())) ||
                       (opt.run_fast && (!row.fast_t.has_value() || !row.fast_r.has_value()));
        rows.push_back(std::move(row));
    }
    if (!csv_path.empty()) {
        wirelab::emit_csv(rows, csv_path);
        std::cerr << "wrote " << rows.size() << " row(s) to " << csv_path << "\n";
    }
    return any_timeout ? kExitTimeout : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wirelab - fast manipulation of large quantum circuits via lazy wire labels"};
    app.require_subcommand(1);

    // gen-adder
    auto* gen = app.add_subcommand("gen-adder", "generate a Toffoli/CNOT ripple-carry adder");
    std::size_t bits = 4;
    std::string gen_out;
    gen->add_option("--bits", bits, "operand width in bits")->required();
    gen->add_option("--out", gen_out, "output circuit file")->required();

    // transform
    auto* transform = app.add_subcommand("transform", "rewrite a circuit into ICM form");
    std::string t_in, t_out, t_engine = "fast", t_templates;
    transform->add_option("--in", t_in, "input circuit file")->required();
    transform->add_option("--engine", t_engine, "fast|naive")->default_val("fast");
    transform->add_option("--out", t_out, "output circuit file")->required();
    transform->add_option("--templates", t_templates, "rewrite template file (defaults built in)");

    // recycle
    auto* recycle = app.add_subcommand("recycle", "recycle wires of an ICM circuit");
    std::string r_in, r_out, r_engine = "fast";
    std::size_t rounds = 1;
    recycle->add_option("--in", r_in, "input circuit file")->required();
    recycle->add_option("--engine", r_engine, "fast|naive")->default_val("fast");
    recycle->add_option("--out", r_out, "output circuit file")->required();
    recycle->add_option("--rounds", rounds, "recycling rounds (reachability recomputed per round)")
        ->default_val(1);

    // bench
    auto* bench = app.add_subcommand("bench", "time naive vs fast pipelines, emit CSV");
    std::vector<std::string> adder_specs, input_files;
    std::string b_engine = "both", csv_path;
    double timeout = 2000.0;
    std::size_t reps = 3;
    bench->add_option("--adders", adder_specs, "adder sizes, e.g. 4..20 or 4..20,2 or 100")
        ->take_all();
    bench->add_option("--input", input_files, "extra circuit files to benchmark")->take_all();
    bench->add_option("--engine", b_engine, "both|fast|naive")->default_val("both");
    bench->add_option("--timeout", timeout, "per-phase timeout in seconds")->default_val(2000.0);
    bench->add_option("--csv", csv_path, "write rows to this CSV file");
    bench->add_option("--reps", reps, "timed repetitions per phase (median)")->default_val(3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen_adder(bits, gen_out);
        if (transform->parsed()) return cmd_transform(t_in, t_engine, t_out, t_templates);
        if (recycle->parsed()) return cmd_recycle(r_in, r_engine, r_out, rounds);
        if (bench->parsed()) {
            return cmd_bench(adder_specs, input_files, b_engine, timeout, csv_path, reps);
        }
    } catch (const wirelab::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
