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

// Acceptance criteria 1-10. Prints one line per criterion and exits
// nonzero when any of them fails.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qhl/checker/checker.hpp"
#include "qhl/checker/proof.hpp"
#include "qhl/cli/cli.hpp"
#include "qhl/cqstate/quantum.hpp"
#include "qhl/syntax/parser.hpp"
#include "support/random_ast.hpp"

using namespace qhl;
using json = nlohmann::json;

namespace {

std::string prog(const std::string& file) { return std::string(QHL_PROGRAMS_DIR) + "/" + file; }

SpecFile load(const std::string& file) {
    std::ifstream in(prog(file));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

struct Cli {
    int code = 0;
    json out;
};

Cli cli(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    Cli r;
    r.code = code;
    r.out = out.str().empty() ? json() : json::parse(out.str());
    return r;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Both checkers valid on the default suite, which starts with the declared
// states and includes at least 50 precondition-satisfying samples.
bool check_both(const std::string& file, const std::string& triple, std::string& why) {
    const Cli r = cli({"check", prog(file), triple, "--method", "both"});
    if (r.code != 0) {
        why = triple + " exited with " + std::to_string(r.code);
        return false;
    }
    const json& checks = r.out.at("checks");
    if (checks.size() != 2) {
        why = triple + ": expected two checks";
        return false;
    }
    for (const json& c : checks) {
        if (c.at("status") != "VALID_ON_SUITE" || c.at("states_checked").get<int>() < 51 ||
            c.at("disagreements").get<int>() != 0) {
            why = triple + ": " + c.at("method").get<std::string>() + " check failed";
            return false;
        }
    }
    if (checks[0].at("states").at(0).at("name").get<std::string>().rfind("sat#", 0) == 0) {
        why = triple + ": declared state missing from the suite";
        return false;
    }
    return true;
}

double run_mass(const std::string& file, const std::string& program, const std::string& var, std::int64_t value) {
    const Cli r = cli({"run", prog(file), program});
    double mass = 0.0;
    for (const json& s : r.out.at("output").at("supports"))
        if (s.at("store").at(var).get<std::int64_t>() == value)
            mass += s.at("mass").get<double>();
    return mass;
}

using Criterion = std::function<bool(std::string&)>;

bool deutsch(const std::vector<std::pair<std::string, std::string>>& cases, std::int64_t outcome, std::string& why) {
    for (const auto& [triple, program] : cases) {
        if (!check_both("deutsch.qhl", triple, why))
            return false;
        const double p = run_mass("deutsch.qhl", program, "X", outcome);
        if (std::abs(p - 1.0) > 1e-9) {
            why = program + ": P[X=" + std::to_string(outcome) + "] = " + std::to_string(p);
            return false;
        }
    }
    return true;
}

bool criterion1(std::string& why) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!deutsch({{"const_f0", "deutsch_f0"}, {"const_f1", "deutsch_f1"}}, 0, why))
        return false;
    const double t = elapsed(t0);
    why = "both constant oracles valid, " + std::to_string(t) + " s";
    return t < 1.0;
}

bool criterion2(std::string& why) {
    if (!deutsch({{"balanced_fid", "deutsch_fid"}, {"balanced_fneg", "deutsch_fneg"}}, 1, why))
        return false;
    why = "both balanced oracles valid";
    return true;
}

// <psi| rho_3 |psi> with rho_3 the reduced state of the last qubit.
double overlap_last(const MixedCqState& m, const Amplitudes& psi) {
    double total = 0.0;
    for (const auto& [s, mass] : m.entries()) {
        const Amplitudes& v = s.quantum;
        const Eigen::Index half = v.size() / 2;
        Complex a00 = 0.0, a01 = 0.0, a11 = 0.0;
        for (Eigen::Index k = 0; k < half; ++k) {
            const Complex x0 = v(2 * k), x1 = v(2 * k + 1);
            a00 += x0 * std::conj(x0);
            a01 += x0 * std::conj(x1);
            a11 += x1 * std::conj(x1);
        }
        const Complex p0 = psi(0), p1 = psi(1);
        const Complex e = std::conj(p0) * a00 * p0 + std::conj(p0) * a01 * p1 + std::conj(p1) * std::conj(a01) * p0 +
                          std::conj(p1) * a11 * p1;
        total += mass * e.real();
    }
    return total;
}

bool criterion3(std::string& why) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!check_both("teleport.qhl", "tele_zero", why))
        return false;
    const SpecFile spec = load("teleport.qhl");
    const CmdPtr tele = spec.decls.programs.at("tele");
    std::mt19937_64 rng(2026);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        Amplitudes psi(2);
        psi << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
        psi.normalize();
        PureCqState s;
        s.classical = {{"M1", 0}, {"M2", 0}};
        s.quantum = Amplitudes::Zero(8);
        s.quantum(0) = psi(0);
        s.quantum(4) = psi(1);
        const ExecResult r = exec_pure(tele, s);
        worst = std::max(worst, std::abs(overlap_last(r.out, psi) - 1.0));
    }
    const double t = elapsed(t0);
    why = "max overlap error " + std::to_string(worst) + ", " + std::to_string(t) + " s";
    return worst < 1e-7 && t < 2.0;
}

// Runs `cases` random trials; each trial gets a generator over 1 or 2 qubits.
template <typename Trial>
bool random_cases(int cases, std::uint64_t seed, double limit_s, Trial trial, std::string& why) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 seeds(seed);
    int failures = 0;
    std::string first;
    for (int i = 0; i < cases; ++i) {
        testing::RandomAst gen(seeds(), static_cast<int>(seeds() % 2) + 1);
        std::string detail;
        if (!trial(gen, detail)) {
            if (failures++ == 0)
                first = "case " + std::to_string(i) + ": " + detail;
        }
    }
    const double t = elapsed(t0);
    why = std::to_string(cases - failures) + "/" + std::to_string(cases) + " agree, " + std::to_string(t) + " s";
    if (failures)
        why += "; " + first;
    return failures == 0 && (limit_s <= 0 || t < limit_s);
}

DepthConfig depth_for(const testing::RandomAst& gen) {
    DepthConfig d;
    d.num_qubits = gen.num_qubits();
    return d;
}

bool criterion4(std::string& why) {
    const Interpretation in = testing::test_interp();
    int holds = 0;
    const bool ok = random_cases(
        500, 4, 30.0,
        [&](testing::RandomAst& gen, std::string& detail) {
            const CmdPtr c = gen.command(5);
            const AssertPtr phi = gen.assertion(2);
            const PureCqState s = gen.pure_state();
            const bool a = sat_pure(wp_det(c, phi, depth_for(gen)), s, in);
            const bool b = sat_mixed(phi, exec_pure(c, s).out, in);
            holds += b ? 1 : 0;
            detail = a ? "wp holds, post fails" : "wp fails, post holds";
            return a == b;
        },
        why);
    why += ", postcondition held in " + std::to_string(holds);
    return ok;
}

bool criterion5(std::string& why) {
    const Interpretation in = testing::test_interp();
    return random_cases(
        500, 5, 0,
        [&](testing::RandomAst& gen, std::string& detail) {
            const CmdPtr c = gen.command(5);
            const RealPtr r = gen.coin(0.3) ? gen.atom(1) : gen.real(2);
            const MixedCqState m = gen.mixed_state();
            const double a = eval_real(preterm(c, r, depth_for(gen)), m, in);
            const double b = eval_real(r, exec(c, m).out, in);
            detail = std::to_string(a) + " vs " + std::to_string(b);
            return std::abs(a - b) < 1e-7;
        },
        why);
}

bool criterion6(std::string& why) {
    const Interpretation in = testing::test_interp();
    return random_cases(
        500, 6, 0,
        [&](testing::RandomAst& gen, std::string& detail) {
            const RealPtr r = gen.real(2);
            const AssertPtr b = gen.guard(1);
            const MixedCqState m = gen.mixed_state();
            const double x = eval_real(cond_term(r, b), m, in);
            const double y = eval_real(r, restrict(m, b), in);
            detail = std::to_string(x) + " vs " + std::to_string(y);
            return std::abs(x - y) <= 1e-9;
        },
        why);
}

bool criterion7(std::string& why) {
    const Interpretation in = testing::test_interp();
    int holds = 0;
    const bool ok = random_cases(
        300, 7, 0,
        [&](testing::RandomAst& gen, std::string& detail) {
            const CmdPtr c = gen.command(5);
            const FormulaPtr f = gen.formula(2);
            const MixedCqState m = gen.mixed_state();
            const bool a = sat_prob(wp_prob(c, f, depth_for(gen)), m, in);
            const bool b = sat_prob(f, exec(c, m).out, in);
            holds += b ? 1 : 0;
            detail = a ? "WP holds, post fails" : "WP fails, post holds";
            return a == b;
        },
        why);
    why += ", postcondition held in " + std::to_string(holds);
    return ok;
}

bool criterion8(std::string& why) {
    Declarations d;
    d.num_qubits = 1;
    d.vars = {"X"};
    const CmdPtr loop = parse_command("while X > 0 do (X <- X - 1; H[q1])", d);
    const CmdPtr step = parse_command("if X > 0 then (X <- X - 1; H[q1]) else skip", d);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int x = 0; x <= 5; ++x) {
        for (int k = 0; k < 4; ++k) {
            PureCqState s;
            s.classical = {{"X", x}};
            s.quantum = Amplitudes(2);
            s.quantum << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
            s.quantum.normalize();
            const MixedCqState a = exec_pure(loop, s).out;
            const MixedCqState b = exec_pure(repeat(step, x), s).out;
            worst = std::max(worst, max_mass_difference(a, b, 1e-9));
        }
    }
    why = "max mass difference " + std::to_string(worst);
    return worst <= 1e-9;
}

bool criterion9(std::string& why) {
    int failures = 0;
    std::string first;
    auto note = [&](bool ok, const std::string& what) {
        if (!ok && failures++ == 0)
            first = what;
    };
    std::mt19937_64 seeds(9);
    for (int i = 0; i < 1000; ++i) {
        testing::RandomAst gen(seeds(), static_cast<int>(seeds() % 2) + 1);
        switch (i % 3) {
        case 0: {
            const CmdPtr c = gen.command(5);
            const MixedCqState m = gen.mixed_state();
            const ExecResult r = exec(c, m);
            note(std::abs(r.out.mass() - m.mass()) <= 1e-9, "mass changed in case " + std::to_string(i));
            break;
        }
        case 1: {
            const PureCqState s = gen.pure_state();
            const int j = gen.uniform(1, gen.num_qubits());
            const auto br = measure_qubit(s.quantum, j);
            note(std::abs(br[0].prob + br[1].prob - 1.0) <= 1e-9, "branch sum in case " + std::to_string(i));
            break;
        }
        default: {
            const PureCqState s = gen.pure_state();
            const double e = expect_projector(s.quantum, *gen.mask());
            note(e >= -1e-12 && e <= 1.0 + 1e-12, "expectation out of [0,1] in case " + std::to_string(i));
            break;
        }
        }
    }
    why = std::to_string(1000 - failures) + "/1000 conserved";
    if (failures)
        why += "; " + first;
    return failures == 0;
}

bool criterion10(std::string& why) {
    const Cli ok = cli({"prove-check", prog("deutsch.qhl"), "deutsch_f0_proof"});
    if (ok.code != 0) {
        why = "golden proof rejected";
        return false;
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli({"prove-check", prog("deutsch.qhl"), "deutsch_f0_swapped"}, out, err);
    if (code != 1 || out.str().find("rule mismatch") == std::string::npos) {
        why = "mutated proof not rejected with a rule mismatch";
        return false;
    }
    why = "golden proof accepted, mutation rejected";
    return true;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                          criterion6, criterion7, criterion8, criterion9, criterion10};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string why;
        bool ok = false;
        try {
            ok = criteria[i](why);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        std::cout << "criterion " << i + 1 << ": " << (ok ? "PASS" : "FAIL") << " (" << why << ")" << std::endl;
        failed += ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
