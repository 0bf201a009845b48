// Copyright 2026 The QHL Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qhl/cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhl/checker/checker.hpp"
#include "qhl/checker/proof.hpp"
#include "qhl/error.hpp"
#include "qhl/syntax/parser.hpp"
#include "qhl/syntax/printer.hpp"

namespace qhl {

namespace {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

// Bad file names, unknown section names and similar input mistakes.
class InputError : public QhlError {
  public:
    using QhlError::QhlError;
};

struct Options {
    std::string file;
    std::string name;
    std::string text;
    std::string state;
    std::uint64_t seed = 42;
    std::size_t suite_size = 50;
    int depth_k = 64;
    int depth_n = 64;
    int split_depth = 2;
    double atol = 1e-9;
    std::string format = "text";
    long max_while_iters = 10000;
    std::string method = "both";
    std::string measure_form = "linear";
    std::size_t max_chars = 1'000'000;
};

bool color_enabled() {
    const char* v = std::getenv("QHL_COLOR");
    if (!v)
        return false;
    const std::string s(v);
    return s == "1" || s == "always" || s == "true" || s == "yes";
}

std::string paint(const std::string& text, const char* code) {
    return color_enabled() ? std::string("\x1b[") + code + "m" + text + "\x1b[0m" : text;
}

std::string status_text(Status s) {
    switch (s) {
    case Status::kValidOnSuite:
        return paint(to_string(s), "32");
    case Status::kInvalid:
        return paint(to_string(s), "31");
    case Status::kDepthBounded:
        return paint(to_string(s), "33");
    }
    return to_string(s);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string complex_text(const Complex& c) {
    if (c.imag() == 0.0)
        return format_double(c.real());
    if (c.real() == 0.0)
        return format_double(c.imag()) + "i";
    const std::string im = format_double(std::abs(c.imag())) + "i";
    return format_double(c.real()) + (c.imag() < 0 ? "-" : "+") + im;
}

std::string store_text(const Store& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [x, v] : s) {
        out += (first ? "" : ", ") + x + "=" + std::to_string(v);
        first = false;
    }
    return out + "}";
}

std::string pure_text(const PureCqState& s) {
    std::string out = store_text(s.classical) + " [";
    for (Eigen::Index k = 0; k < s.quantum.size(); ++k)
        out += (k ? ", " : "") + complex_text(s.quantum(k));
    return out + "]";
}

json pure_json(const PureCqState& s) {
    json amps = json::array();
    for (Eigen::Index k = 0; k < s.quantum.size(); ++k)
        amps.push_back({s.quantum(k).real(), s.quantum(k).imag()});
    json store = json::object();
    for (const auto& [x, v] : s.classical)
        store[x] = v;
    return {{"store", store}, {"amplitudes", amps}};
}

json mixed_json(const MixedCqState& m) {
    json supports = json::array();
    for (const auto& [s, mass] : m.entries()) {
        json j = pure_json(s);
        j["mass"] = mass;
        supports.push_back(std::move(j));
    }
    return {{"total_mass", m.mass()}, {"supports", supports}};
}

void print_mixed(std::ostream& out, const MixedCqState& m, const std::string& indent) {
    if (m.empty())
        out << indent << "(no mass)\n";
    for (const auto& [s, mass] : m.entries())
        out << indent << "mass " << format_double(mass) << ": " << pure_text(s) << "\n";
}

CheckConfig make_config(const Options& o) {
    CheckConfig c;
    c.sat.atol = o.atol;
    c.exec.max_while_iters = o.max_while_iters;
    c.depth.wp_while_depth = o.depth_k;
    c.depth.pt_while_terms = o.depth_n;
    c.depth.pt_split_depth = o.split_depth;
    c.depth.measure_form = o.measure_form == "product" ? MeasurePreterm::kProduct : MeasurePreterm::kLinear;
    return c;
}

SpecFile load(const Options& o) { return parse_spec(read_file(o.file)); }

// Declared states, then states satisfying the precondition, then plain
// random states; mixed states for probabilistic triples.
StateSuite build_suite(const SpecFile& spec, const TriplePair& conds, const Options& o,
                       const std::vector<NamedInterp>& interps) {
    SuiteParams p;
    p.count = o.suite_size;
    p.seed = o.seed;
    p.num_qubits = spec.decls.num_qubits;
    p.vars = spec.decls.vars;
    StateSuite suite = declared_states(spec);
    suite.append(sample_satisfying(conds, p, interps.front().interp, conds.probabilistic));
    p.seed = o.seed + 1;
    suite.append(sample_states(p, conds.probabilistic));
    return suite;
}

json labels_json(const Verdict& v) {
    return {{"range_bounded", v.labels.range_bounded},
            {"depth_bounded", v.labels.depth_bounded},
            {"vacuous_box_proj", v.labels.vacuous_box_proj},
            {"checked_on_suite", v.checked_on_suite}};
}

std::string labels_text(const Verdict& v) {
    std::vector<std::string> ls;
    if (v.labels.range_bounded)
        ls.push_back("range-bounded");
    if (v.labels.depth_bounded)
        ls.push_back("depth-bounded");
    if (v.labels.vacuous_box_proj)
        ls.push_back("vacuous-box-proj");
    if (v.checked_on_suite)
        ls.push_back("checked-on-suite");
    std::string s;
    for (const auto& l : ls)
        s += (s.empty() ? "" : ", ") + l;
    return s;
}

json counterexample_json(const Counterexample& c) {
    json obs = json::array();
    for (const auto& [what, value] : c.observed)
        obs.push_back({{"what", what}, {"value", value}});
    json failing = json::array();
    for (const auto& s : c.failing_supports)
        failing.push_back(pure_json(s));
    return {{"state_index", c.state_index}, {"state_name", c.state_name}, {"interpretation", c.interp_name},
            {"method", c.method},           {"input", mixed_json(c.input)},  {"output", mixed_json(c.output)},
            {"failing_supports", failing},  {"observed", obs}};
}

json verdict_json(const Verdict& v) {
    json states = json::array();
    for (const auto& l : v.log) {
        json s = {{"index", l.state_index},
                  {"name", l.state_name},
                  {"interpretation", l.interp_name},
                  {"pre", l.pre_holds},
                  {"residual_mass", l.residual_mass}};
        s["semantic"] = l.semantic ? json(*l.semantic) : json(nullptr);
        s["wp"] = l.wp ? json(*l.wp) : json(nullptr);
        states.push_back(std::move(s));
    }
    json j = {{"method", v.method},
              {"status", to_string(v.status)},
              {"states_checked", v.states_checked},
              {"disagreements", v.disagreements},
              {"labels", labels_json(v)},
              {"diagnostics", v.diagnostics},
              {"states", states}};
    j["counterexample"] = v.counterexample ? counterexample_json(*v.counterexample) : json(nullptr);
    return j;
}

void print_counterexample(std::ostream& out, const Counterexample& c) {
    out << "  counterexample (" << c.method << ") on state " << c.state_name << " under " << c.interp_name
        << ":\n    input:\n";
    print_mixed(out, c.input, "      ");
    if (c.method != "cons") {
        out << "    output:\n";
        print_mixed(out, c.output, "      ");
    }
    const char* side = c.method == "wp" ? "input support failing wp" : "output support failing post";
    for (std::size_t k = 0; k < c.failing_supports.size(); ++k)
        out << "    " << side << " " << k + 1 << ": " << pure_text(c.failing_supports[k]) << "\n";
    for (const auto& [what, value] : c.observed)
        out << "    " << what << " = " << format_double(value) << "\n";
}

void print_verdict(std::ostream& out, const std::string& what, const Verdict& v, std::size_t suite_size) {
    out << what << " [" << v.method << "]: " << status_text(v.status) << " on " << suite_size << " states ("
        << v.states_checked << " satisfy the precondition)\n";
    const std::string ls = labels_text(v);
    if (!ls.empty())
        out << "  labels: " << ls << "\n";
    if (v.disagreements)
        out << "  wp and execution disagree on " << v.disagreements << " state(s)\n";
    for (const auto& d : v.diagnostics)
        out << "  " << d << "\n";
    if (v.counterexample)
        print_counterexample(out, *v.counterexample);
}

int exit_for(const std::vector<Verdict>& vs) {
    int code = kExitValid;
    for (const auto& v : vs) {
        if (v.status == Status::kInvalid)
            return kExitInvalid;
        if (v.status == Status::kDepthBounded)
            code = kExitDepthBounded;
    }
    return code;
}

// Fragment errors name the argument instead of the spec file.
template <class F>
auto parse_arg(const char* what, F parse) {
    try {
        return parse();
    } catch (const ParseError& e) {
        throw InputError(std::string(what) + ":" + e.what());
    }
}

// -- subcommands ------------------------------------------------------------

MixedCqState initial_state(const SpecFile& spec, const std::string& name) {
    StateSuite declared = declared_states(spec);
    if (!name.empty()) {
        for (const auto& e : declared.entries)
            if (e.name == name)
                return e.state;
        throw InputError("unknown state '" + name + "'");
    }
    if (!declared.entries.empty())
        return declared.entries.front().state;
    PureCqState s;
    for (const auto& x : spec.decls.vars)
        s.classical[x] = 0;
    s.quantum = Amplitudes::Zero(Eigen::Index{1} << spec.decls.num_qubits);
    s.quantum(0) = 1.0;
    return point_dist(s);
}

CmdPtr program(const SpecFile& spec, const std::string& name_or_text) {
    auto it = spec.decls.programs.find(name_or_text);
    if (it != spec.decls.programs.end())
        return it->second;
    return parse_arg("program", [&] { return parse_command(name_or_text, spec.decls); });
}

int cmd_run(const Options& o, std::ostream& out) {
    const SpecFile spec = load(o);
    auto it = spec.decls.programs.find(o.name);
    if (it == spec.decls.programs.end())
        throw InputError("unknown program '" + o.name + "'");
    const MixedCqState in = initial_state(spec, o.state);
    const CheckConfig cfg = make_config(o);
    const ExecResult r = exec(it->second, in, cfg.exec);
    const bool bounded = r.residual_mass > cfg.residual_tol;
    if (o.format == "json") {
        json j = {{"schema_version", kSchemaVersion},
                  {"command", "run"},
                  {"program", o.name},
                  {"input", mixed_json(in)},
                  {"output", mixed_json(r.out)},
                  {"residual_mass", r.residual_mass},
                  {"iterations", r.iterations_used},
                  {"depth_bounded", bounded}};
        out << j.dump(2) << "\n";
        return kExitValid;
    }
    out << "program " << o.name << "\n";
    print_mixed(out, r.out, "  ");
    out << "residual_mass " << format_double(r.residual_mass) << "\n";
    out << "iterations " << r.iterations_used << "\n";
    if (bounded)
        out << paint("depth-bounded", "33") << ": the loop cap of " << o.max_while_iters << " iterations was reached\n";
    return kExitValid;
}

int cmd_check(const Options& o, std::ostream& out) {
    const SpecFile spec = load(o);
    const TripleDecl* td = spec.find_triple(o.name);
    if (!td)
        throw InputError("unknown triple '" + o.name + "'");
    const Triple t{td->name, td->command, td->conds};
    const auto interps = interpretations(spec);
    const StateSuite suite = build_suite(spec, t.conds, o, interps);
    CheckConfig cfg = make_config(o);
    cfg.depth.num_qubits = spec.decls.num_qubits;
    std::vector<Verdict> vs;
    if (o.method == "semantic" || o.method == "both")
        vs.push_back(check_semantic(t, suite, interps, cfg));
    if (o.method == "wp" || o.method == "both")
        vs.push_back(check_wp(t, suite, interps, cfg));
    const int code = exit_for(vs);
    if (o.format == "json") {
        json checks = json::array();
        for (const auto& v : vs)
            checks.push_back(verdict_json(v));
        json j = {{"schema_version", kSchemaVersion},
                  {"command", "check"},
                  {"triple", t.name},
                  {"sort", t.conds.probabilistic ? "probabilistic" : "deterministic"},
                  {"seed", o.seed},
                  {"suite_size", suite.size()},
                  {"checks", checks},
                  {"exit_code", code}};
        out << j.dump(2) << "\n";
        return code;
    }
    for (const auto& v : vs)
        print_verdict(out, "triple " + t.name, v, suite.size());
    return code;
}

// Tries both sorts and reports the error that got further.
template <class A, class B>
auto parse_either(const std::string& text, A first, B second) {
    try {
        return std::make_pair(first(text), decltype(second(text)){});
    } catch (const ParseError& e1) {
        try {
            return std::make_pair(decltype(first(text)){}, second(text));
        } catch (const ParseError& e2) {
            const auto a = e1.pos();
            const auto b = e2.pos();
            if (a.line > b.line || (a.line == b.line && a.column >= b.column))
                throw e1;
            throw;
        }
    }
}

int print_transformed(const Options& o, std::ostream& out, const char* command, const std::string& result) {
    if (o.format == "json") {
        json j = {{"schema_version", kSchemaVersion}, {"command", command}, {"input", o.text}, {"result", result}};
        out << j.dump(2) << "\n";
    } else {
        out << result << "\n";
    }
    return kExitValid;
}

int cmd_wp(const Options& o, std::ostream& out) {
    const SpecFile spec = load(o);
    const CmdPtr c = program(spec, o.name);
    CheckConfig cfg = make_config(o);
    cfg.depth.num_qubits = spec.decls.num_qubits;
    const auto [a, f] = parse_arg("postcondition", [&] {
        return parse_either(
            o.text, [&](const std::string& s) { return parse_assertion(s, spec.decls); },
            [&](const std::string& s) { return parse_formula(s, spec.decls); });
    });
    const std::string result =
        a ? pretty(wp_det(c, a, cfg.depth), o.max_chars) : pretty(wp_prob(c, f, cfg.depth), o.max_chars);
    return print_transformed(o, out, "wp", result);
}

int cmd_pt(const Options& o, std::ostream& out) {
    const SpecFile spec = load(o);
    const CmdPtr c = program(spec, o.name);
    CheckConfig cfg = make_config(o);
    cfg.depth.num_qubits = spec.decls.num_qubits;
    const RealPtr r = parse_arg("term", [&] { return parse_real(o.text, spec.decls); });
    return print_transformed(o, out, "pt", pretty(preterm(c, r, cfg.depth), o.max_chars));
}

int cmd_prove_check(const Options& o, std::ostream& out) {
    const SpecFile spec = load(o);
    const ProofDecl* pd = spec.find_proof(o.name);
    if (!pd)
        throw InputError("unknown proof '" + o.name + "'");
    std::optional<Triple> target;
    if (!pd->triple.empty()) {
        const TripleDecl* td = spec.find_triple(pd->triple);
        target = Triple{td->name, td->command, td->conds};
    }
    const TriplePair& conds = target ? target->conds : pd->steps.back().conds;
    const auto interps = interpretations(spec);
    const StateSuite suite = build_suite(spec, conds, o, interps);
    CheckConfig cfg = make_config(o);
    cfg.depth.num_qubits = spec.decls.num_qubits;
    const Verdict v = check_proof(*pd, suite, interps, cfg, target ? &*target : nullptr);
    const int code = v.valid() ? kExitValid : kExitInvalid;
    if (o.format == "json") {
        json j = {{"schema_version", kSchemaVersion},
                  {"command", "prove-check"},
                  {"proof", pd->name},
                  {"seed", o.seed},
                  {"suite_size", suite.size()},
                  {"verdict", verdict_json(v)},
                  {"exit_code", code}};
        j["triple"] = target ? json(target->name) : json(nullptr);
        out << j.dump(2) << "\n";
        return code;
    }
    out << "proof " << pd->name << ": " << status_text(v.status);
    const std::string ls = labels_text(v);
    if (!ls.empty())
        out << " (" << ls << ")";
    out << "\n";
    for (const auto& d : v.diagnostics)
        out << "  " << d << "\n";
    if (v.counterexample)
        print_counterexample(out, *v.counterexample);
    return code;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--format", o.format, "Output format")->capture_default_str()->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--max-while-iters", o.max_while_iters, "Loop iteration cap during execution")->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--depth-k", o.depth_k, "Members of the bounded conjunction for while in wp")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--depth-n", o.depth_n, "Terms of the while series in preterms")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--split-depth", o.split_depth, "Exit-time classes per while preterm")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--atol", o.atol, "Slack of real comparisons")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--measure-form", o.measure_form, "Measurement preterm form")->capture_default_str()
        ->check(CLI::IsMember({"linear", "product"}));
}

void add_suite(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, "Seed of the random state suite")->capture_default_str();
    sub->add_option("--suite-size", o.suite_size, "Random states per suite part")->capture_default_str()->check(CLI::PositiveNumber);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Checks quantum-classical programs against Hoare triples", "qhl"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "Execute a program and print the output distribution");
    run->add_option("file", o.file, "Spec file")->required();
    run->add_option("program", o.name, "Program name")->required();
    run->add_option("--state", o.state, "Declared state or mixture to start from");
    add_common(run, o);

    auto* check = app.add_subcommand("check", "Check a triple on a state suite");
    check->add_option("file", o.file, "Spec file")->required();
    check->add_option("triple", o.name, "Triple name")->required();
    check->add_option("--method", o.method, "Checker to use")->check(CLI::IsMember({"semantic", "wp", "both"}));
    add_common(check, o);
    add_suite(check, o);

    auto* wp = app.add_subcommand("wp", "Print the weakest precondition of an assertion or formula");
    wp->add_option("file", o.file, "Spec file")->required();
    wp->add_option("program", o.name, "Program name or command text")->required();
    wp->add_option("post", o.text, "Postcondition text")->required();
    wp->add_option("--max-chars", o.max_chars, "Longest output printed");
    add_common(wp, o);

    auto* pt = app.add_subcommand("pt", "Print the weakest preterm of a real expression");
    pt->add_option("file", o.file, "Spec file")->required();
    pt->add_option("program", o.name, "Program name or command text")->required();
    pt->add_option("term", o.text, "Real expression text")->required();
    pt->add_option("--max-chars", o.max_chars, "Longest output printed");
    add_common(pt, o);

    auto* prove = app.add_subcommand("prove-check", "Check a proof script");
    prove->add_option("file", o.file, "Spec file")->required();
    prove->add_option("proof", o.name, "Proof name")->required();
    add_common(prove, o);
    add_suite(prove, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitValid : kExitParseError;
    }

    try {
        if (run->parsed())
            return cmd_run(o, out);
        if (check->parsed())
            return cmd_check(o, out);
        if (wp->parsed())
            return cmd_wp(o, out);
        if (pt->parsed())
            return cmd_pt(o, out);
        return cmd_prove_check(o, out);
    } catch (const ParseError& e) {
        err << o.file << (e.pos().line > 0 ? ":" : ": ") << e.what() << "\n";
        return kExitParseError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const QhlError& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}

} // namespace qhl
