// Command-line front end: validate, compile, check and simulate.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "seb.hpp"

namespace {

enum Exit { Ok = 0, Findings = 1, InputError = 2, Budget = 3, Exhausted = 4 };

void print_set(const char* label, const std::set<std::string>& s) {
    std::cout << "  " << label << ":";
    for (const auto& v : s) std::cout << " " << v;
    std::cout << "\n";
}

int cmd_validate(const std::vector<std::string>& files, bool report_vars) {
    int rc = Ok;
    for (const auto& f : files) {
        try {
            auto act = seb::parse_activity_file(f);
            auto diags = seb::validate_well_formed(act);
            for (const auto& d : diags) std::cout << f << ": " << d.to_string() << "\n";
            if (!diags.empty()) {
                rc = std::max(rc, static_cast<int>(Findings));
                continue;
            }
            if (report_vars) {
                auto r = seb::var_report(act);
                std::cout << f << ":\n";
                print_set("all", r.all);
                print_set("binding", r.binding);
                print_set("usage", r.usage);
                print_set("free", r.free);
                for (const auto& d : r.forbidden) std::cout << "  forbidden: " << d.to_string() << "\n";
            } else {
                std::cout << f << ": ok\n";
            }
        } catch (const seb::ParseError& e) {
            std::cerr << f << ":" << e.what() << "\n";
            rc = InputError;
        } catch (const std::runtime_error& e) {
            std::cerr << e.what() << "\n";
            rc = InputError;
        }
    }
    return rc;
}

struct CompileArgs {
    std::string file;
    std::string stage = "min";
    std::string format = "aut";
    std::string output;
    bool check = false;
    bool rtc_before_compress = false;
    bool payloads = false;
    std::size_t max_states = 1000000;
};

int cmd_compile(const CompileArgs& a) {
    seb::Activity act;
    try {
        act = seb::parse_activity_file(a.file);
    } catch (const seb::ParseError& e) {
        std::cerr << a.file << ":" << e.what() << "\n";
        return InputError;
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return InputError;
    }
    auto diags = seb::validate_well_formed(act);
    if (!diags.empty()) {
        for (const auto& d : diags) std::cerr << a.file << ": " << d.to_string() << "\n";
        return Findings;
    }
    const std::vector<std::pair<std::string, seb::Stage>> stages = {{"raw", seb::Stage::Raw},
                                                                    {"prio", seb::Stage::Prio},
                                                                    {"compress", seb::Stage::Compress},
                                                                    {"rtc", seb::Stage::Rtc},
                                                                    {"min", seb::Stage::Min}};
    seb::Stage stage = seb::Stage::Min;
    for (const auto& [n, s] : stages) {
        if (n == a.stage) stage = s;
    }
    seb::Pipeline p;
    try {
        p = seb::run_pipeline(act, {a.max_states, a.rtc_before_compress, a.payloads, false});
    } catch (const seb::ResourceError& e) {
        std::cerr << a.file << ": " << e.what() << "\n";
        return Budget;
    } catch (const seb::PreconditionError& e) {
        std::cerr << a.file << ": " << e.what() << "\n";
        return Findings;
    }
    for (const auto& d : p.raw.notes) std::cerr << a.file << ": note: " << d.to_string() << "\n";
    int rc = Ok;
    if (a.check) {
        auto report = seb::check_raw_properties(p.raw.graph, seb::state_upper_bound(act));
        std::vector<std::string> bad = report.violations;
        for (const auto& [n, s] : stages) {
            auto b = seb::check_stage(s, p.stage(s));
            bad.insert(bad.end(), b.begin(), b.end());
        }
        for (const auto& b : bad) std::cerr << a.file << ": property violated: " << b << "\n";
        if (!bad.empty()) rc = Findings;
    }
    const auto& g = p.stage(stage);
    std::string text = a.format == "dot" ? seb::to_dot(g, a.payloads) : seb::to_aut(g);
    if (a.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(a.output, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << a.output << "\n";
            return InputError;
        }
        out << text;
    }
    return rc;
}

std::optional<seb::Configuration> load_config(const std::string& path) {
    seb::Manifest m;
    try {
        m = seb::load_manifest(path);
    } catch (const seb::ParseError& e) {
        std::cerr << path << ":" << e.what() << "\n";
        return std::nullopt;
    } catch (const std::runtime_error& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return std::nullopt;
    }
    bool bad = false;
    auto check = [&](const std::string& who, const seb::Activity& act) {
        for (const auto& d : seb::validate_well_formed(act)) {
            std::cerr << path << ": " << who << ": " << d.to_string() << "\n";
            bad = true;
        }
    };
    for (const auto& s : m.services) check(s.name, s.act);
    check("client", m.client.act);
    if (bad) return std::nullopt;
    auto init = seb::make_initial_config(m.services, m.client);
    for (const auto& d : init.diagnostics) std::cerr << path << ": " << d.to_string() << "\n";
    return init.config;
}

int cmd_check(const std::string& path, std::size_t max_configs, std::size_t max_queue, bool trace) {
    auto c = load_config(path);
    if (!c) return InputError;
    auto r = seb::explore_safety(*c, {max_configs, max_queue});
    switch (r.verdict) {
        case seb::SafetyResult::Verdict::Verified:
            std::cout << "Verified (" << r.configs << " configurations)\n";
            return Ok;
        case seb::SafetyResult::Verdict::Unsafe:
            std::cout << "UNSAFE: " << (r.witness ? r.witness->to_string() : "fault " + r.fault) << "\n";
            if (trace) std::cout << r.trace_text();
            return Findings;
        case seb::SafetyResult::Verdict::Exhausted:
            std::cout << "Exhausted: " << r.reason << " (" << r.configs << " configurations)\n";
            return Exhausted;
    }
    return Ok;
}

int cmd_simulate(const std::string& path, std::size_t steps, std::uint64_t seed) {
    auto c = load_config(path);
    if (!c) return InputError;
    std::cout << seb::simulate(*c, steps, seed);
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compiler and analyser for sessionized workflow activities"};
    app.require_subcommand(1);

    std::vector<std::string> vfiles;
    bool report_vars = false;
    auto* validate = app.add_subcommand("validate", "Check activities for well-formedness");
    validate->add_option("files", vfiles, "Activity files (.seb)")->required();
    validate->add_flag("--report-vars", report_vars, "Print variable occurrence classes");

    CompileArgs ca;
    auto* compile = app.add_subcommand("compile", "Build the control graph of an activity");
    compile->add_option("file", ca.file, "Activity file (.seb)")->required();
    compile->add_option("--stage", ca.stage, "Pipeline stage to emit")
        ->check(CLI::IsMember({"raw", "prio", "compress", "rtc", "min"}));
    compile->add_option("--format", ca.format, "Output format")->check(CLI::IsMember({"aut", "dot"}));
    compile->add_option("-o,--output", ca.output, "Output path (default: stdout)");
    compile->add_flag("--check-properties", ca.check, "Verify structural properties of every stage");
    compile->add_flag("--rtc-before-compress", ca.rtc_before_compress, "Apply run-to-completion before tau compression");
    compile->add_flag("--payloads", ca.payloads, "Keep link maps and residuals up to the rtc stage (shown in dot)");
    compile->add_option("--max-states", ca.max_states, "State budget for exploration");

    std::string manifest;
    std::size_t max_configs = 100000, max_queue = 16;
    bool trace = false;
    auto* check = app.add_subcommand("check", "Explore a configuration for one-step safety");
    check->add_option("manifest", manifest, "Configuration manifest (.cfg)")->required();
    check->add_option("--max-configs", max_configs, "Configuration budget");
    check->add_option("--max-queue", max_queue, "Queue length bound");
    check->add_flag("--trace", trace, "Print the witness trace");

    std::size_t steps = 100;
    std::uint64_t seed = 0;
    auto* sim = app.add_subcommand("simulate", "Run a seeded random execution");
    sim->add_option("manifest", manifest, "Configuration manifest (.cfg)")->required();
    sim->add_option("--steps", steps, "Maximum number of steps");
    sim->add_option("--seed", seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? Ok : InputError;
    }
    if (validate->parsed()) return cmd_validate(vfiles, report_vars);
    if (compile->parsed()) return cmd_compile(ca);
    if (check->parsed()) return cmd_check(manifest, max_configs, max_queue, trace);
    return cmd_simulate(manifest, steps, seed);
}
