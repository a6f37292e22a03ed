// Command-line front end: degree / factorize / graph / validate.
// Exit codes: 0 ok, 2 invalid input, 3 cap exceeded, 4 unsupported construction.

#include <CLI11.hpp>

#include <iostream>

#include "sarkisov/io.hpp"

using namespace sarkisov;

namespace {

int exit_code_for(const EngineError& e) {
    switch (e.kind()) {
        case ErrorKind::StepCapExceeded:
        case ErrorKind::CapExceeded:
            return 3;
        case ErrorKind::UnsupportedInput:
        case ErrorKind::ImpossibleInDim2:
            return 4;
        case ErrorKind::InternalInvariantViolation:
        case ErrorKind::MonotonicityViolation:
            return 1;
        default:
            return 2;
    }
}

struct CliOptions {
    std::string input;
    std::string policy = "first";
    std::string weight = "alpha:1/2,closure:minus";
    std::string format = "text";
    int max_steps = 64;
    int max_depth = 16;
    long height_bound = 0; // informational guard for enumeration-heavy runs
};

Policy parse_policy(const std::string& text) {
    Policy p;
    if (text == "first") {
        p.kind = Policy::Kind::First;
    } else if (text == "scaling") {
        p.kind = Policy::Kind::Scaling;
    } else if (text.rfind("index:", 0) == 0) {
        p.kind = Policy::Kind::Index;
        p.index = std::stoi(text.substr(6));
    } else {
        fail(ErrorKind::InvalidInput, "unknown policy: " + text);
    }
    return p;
}

WeightFunction parse_weight(const std::string& text) {
    Rat alpha(1, 2);
    bool closed = true;
    std::string rest = text;
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string tok = rest.substr(0, comma);
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
        if (tok.rfind("alpha:", 0) == 0) alpha = Rat::parse(tok.substr(6));
        else if (tok == "closure:minus") closed = true;
        else if (tok == "closure:plus") closed = false;
        else if (!tok.empty()) fail(ErrorKind::InvalidInput, "unknown weight option: " + tok);
    }
    return make_weight(alpha, closed);
}

void require_desk_scale(const Job& job) {
    if (job.map.source.total.fan.dim > 3 || job.map.target.total.fan.dim > 3)
        fail(ErrorKind::UnsupportedInput,
             "untwisting is supported up to dimension 3; higher-dimensional runs need "
             "flip-termination input that is out of scope");
}

int cmd_degree(const CliOptions& o) {
    Job job = load_job(o.input);
    DegreeData dd = analyze_map(job.map, job.h_target);
    if (o.format == "structured") {
        Json j;
        j["degree"] = degree_to_json(dd.degree);
        j["augmented"] = augmented_to_json(dd.augmented);
        j["case"] = nfi_case_name(dd.nfi);
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "degree: mu=" << dd.degree.mu.str() << " c=" << dd.degree.c.str()
                  << " e=" << dd.degree.e.str() << "\n";
        std::cout << "augmented: mu=" << dd.augmented.mu.str() << " b=" << dd.augmented.b
                  << " rho=" << dd.augmented.rho.str() << " d=" << dd.augmented.d.str()
                  << " c'=" << dd.augmented.c_prime.str() << " e'=" << dd.augmented.e_prime.str()
                  << "\n";
        std::cout << "case: " << nfi_case_name(dd.nfi) << "\n";
    }
    return 0;
}

int cmd_factorize(const CliOptions& o) {
    Job job = load_job(o.input);
    require_desk_scale(job);
    Policy policy = parse_policy(o.policy);
    policy.step_cap = o.max_steps;
    UntwistingSequence seq = factorize(job.map, job.h_target, policy, o.max_steps);
    WeightFunction w = parse_weight(o.weight);
    MonotonicityReport rep = check_monotonic(seq, w);
    if (o.format == "structured") {
        Json j;
        j["trace"] = sequence_to_json(seq);
        j["monotonicity"] = monotonicity_to_json(rep);
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "links: " << seq.links.size() << "\n";
        for (size_t i = 0; i < seq.links.size(); ++i) {
            const SarkisovLink& l = seq.links[i];
            std::cout << "  link " << i << ": type " << link_kind_name(l.kind);
            if (l.subtype) std::cout << l.subtype;
            if (l.extraction) std::cout << " extraction " << vec_str(*l.extraction);
            std::cout << " steps " << l.steps.size() << "\n";
        }
        for (size_t i = 0; i < seq.ledger.size(); ++i) {
            const DegreeLedgerEntry& e = seq.ledger[i];
            std::cout << "  stage " << i << ": (" << e.degree.mu.str() << ", "
                      << e.degree.c.str() << ", " << e.degree.e.str() << ") "
                      << nfi_case_name(e.nfi) << "\n";
        }
        for (const MonotonicityRow& row : rep.rows)
            std::cout << "  row " << row.link << " [" << row.case_label << "] "
                      << (row.pass ? "pass" : "FAIL " + row.note) << " " << row.movement << "\n";
        std::cout << "monotonic: " << (rep.pass ? "pass" : "FAIL") << "\n";
        std::cout << "terminated: " << (seq.terminated ? "yes" : "no") << "\n";
    }
    if (!seq.terminated)
        fail(ErrorKind::StepCapExceeded, "factorization exceeded the link cap");
    if (!rep.pass) fail(ErrorKind::MonotonicityViolation, rep.violation);
    return 0;
}

int cmd_graph(const CliOptions& o) {
    Job job = load_job(o.input);
    require_desk_scale(job);
    GraphCaps caps;
    caps.max_depth = o.max_depth;
    caps.step_cap = o.max_steps;
    SarkisovGraph g = build_graph(job.map, job.h_target, caps);
    if (o.format == "dot")
        std::cout << export_graph_dot(g);
    else if (o.format == "structured")
        std::cout << export_graph_structured(g) << "\n";
    else {
        std::cout << "vertices: " << g.vertices.size() << "\n";
        std::cout << "edges: " << g.edges.size() << "\n";
        GraphReport rep = verify_graph(g, job.map, job.h_target, caps);
        for (const std::string& line : rep.lines) std::cout << line << "\n";
        std::cout << "paths: " << rep.path_count << "\n";
        if (!rep.pass) fail(ErrorKind::InternalInvariantViolation, "graph verification failed");
    }
    if (!g.complete)
        fail(ErrorKind::CapExceeded, "graph exploration hit a cap: " + g.diagnostic);
    return 0;
}

int cmd_validate(const CliOptions& o) {
    Json j = load_json_file(o.input);
    bool all = true;
    auto print = [&](const InvariantCheck& c) {
        std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
        std::cout << "\n";
        if (!c.pass) all = false;
    };
    auto validate_fan_doc = [&](const Json& doc) {
        Fan f = fan_from_json(doc);
        std::string why;
        print({"fan_valid", fan_is_valid(f, &why), why});
        print({"complete", fan_is_complete(f), ""});
        bool simp = fan_is_simplicial(f);
        print({"q_factorial", simp, simp ? "" : "non-simplicial maximal cone"});
        if (simp) {
            print({"smooth", fan_is_smooth(f), ""});
            print({"terminal", fan_is_terminal(f), ""});
        }
    };
    auto validate_mfs_doc = [&](const Json& doc) {
        if (!doc.contains("projection")) {
            std::cout << "[FAIL] projection (missing)\n";
            all = false;
            validate_fan_doc(doc.at("total"));
            return;
        }
        ToricMoriFibreSpace x = mfs_from_json(doc);
        for (const InvariantCheck& c : check_mfs(x)) print(c);
    };
    if (j.contains("map")) {
        std::cout << "source:\n";
        validate_mfs_doc(j.at("map").at("source"));
        std::cout << "target:\n";
        validate_mfs_doc(j.at("map").at("target"));
    } else if (j.contains("total")) {
        validate_mfs_doc(j);
    } else if (j.contains("lattice_dim")) {
        validate_fan_doc(j);
    } else {
        fail(ErrorKind::InvalidInput, "unrecognized document; expected a fan, model or job");
    }
    std::cout << (all ? "validation: pass" : "validation: FAIL") << "\n";
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sarkisov: exact 2-ray games, Sarkisov degrees and untwisting graphs on toric Mori fibre spaces"};
    app.require_subcommand(1);

    CliOptions o;
    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        cmd->add_option("--input", o.input, "input job/fan/model file")->required(needs_input);
        cmd->add_option("--policy", o.policy, "first | index:k | scaling");
        cmd->add_option("--weight", o.weight, "alpha:p/q,closure:minus|plus");
        cmd->add_option("--max-steps", o.max_steps, "step and link cap");
        cmd->add_option("--max-depth", o.max_depth, "graph depth cap");
        cmd->add_option("--format", o.format, "text | dot | structured");
        cmd->add_option("--height-bound", o.height_bound, "enumeration guard for oracle-style runs");
    };

    CLI::App* degree = app.add_subcommand("degree", "Sarkisov degree and NFI case of a job");
    add_common(degree);
    CLI::App* fact = app.add_subcommand("factorize", "untwist a map into Sarkisov links");
    add_common(fact);
    CLI::App* graph = app.add_subcommand("graph", "build and export the untwisting graph");
    add_common(graph);
    CLI::App* validate = app.add_subcommand("validate", "check model invariants of an input file");
    add_common(validate);

    CLI11_PARSE(app, argc, argv);

    try {
        if (degree->parsed()) return cmd_degree(o);
        if (fact->parsed()) return cmd_factorize(o);
        if (graph->parsed()) return cmd_graph(o);
        if (validate->parsed()) return cmd_validate(o);
    } catch (const EngineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
