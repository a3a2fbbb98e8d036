// Command-line front end: interprets star expressions, checks LEE and
// LLEE-witnesses, decides bisimilarity, collapses witnesses, extracts
// expressions, and produces or checks equational proof certificates.
//
// Exit codes: 0 success, 1 negative verdict, 2 usage or format errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bbp/bisim.hpp"
#include "bbp/collapse.hpp"
#include "bbp/extract.hpp"
#include "bbp/gen.hpp"
#include "bbp/interp.hpp"
#include "bbp/llee.hpp"
#include "bbp/proof.hpp"

namespace {

using namespace bbp;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        spit(path, text);
}

LoadedChart load_file(const std::string& path) { return load_chart(slurp(path)); }

LabeledChart require_labeled(const LoadedChart& lc, const std::string& path) {
    if (!lc.levels) throw std::runtime_error(path + ": expected a labeled chart (level column)");
    return LabeledChart{lc.chart, *lc.levels};
}

const char* cond_name(PairKind k) {
    switch (k) {
        case PairKind::C1: return "C1";
        case PairKind::C2: return "C2";
        default: return "C3";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bisimilarity prover for 1-free star expressions"};
    app.require_subcommand(1);

    std::string expr_text, out_path, in_path, in_path2, cert_path, trace_dir;
    std::string e1_text, e2_text, suite_name = "llee-witness", strategy_name = "eager";
    bool do_simplify = false, constructive = false;
    std::uint64_t seed = 1;
    unsigned cases = 100, max_size = 12, alphabet = 3;

    auto* c_interp = app.add_subcommand("interpret", "chart interpretation of an expression");
    c_interp->add_option("-e,--expr", expr_text, "star expression")->required();
    c_interp->add_option("-o,--out", out_path, "output chart file");

    auto* c_labeled = app.add_subcommand("labeled", "entry/body-labeled interpretation");
    c_labeled->add_option("-e,--expr", expr_text, "star expression")->required();
    c_labeled->add_option("-o,--out", out_path, "output labeled chart file");

    auto* c_lee = app.add_subcommand("lee", "loop elimination verdict and trace");
    c_lee->add_option("file", in_path, "chart file")->required();
    c_lee->add_option("--strategy", strategy_name, "eager | lazy | lazy-reverse")
        ->check(CLI::IsMember({"eager", "lazy", "lazy-reverse"}));
    c_lee->add_option("-o,--out", out_path, "write the recorded witness here");

    auto* c_check_w = app.add_subcommand("llee-check", "check a labeled chart for the witness conditions");
    c_check_w->add_option("file", in_path, "labeled chart file")->required();

    auto* c_bisim = app.add_subcommand("bisim", "largest bisimulation between two charts");
    c_bisim->add_option("a", in_path, "first chart file")->required();
    c_bisim->add_option("b", in_path2, "second chart file")->required();

    auto* c_collapse = app.add_subcommand("collapse", "LLEE-preserving bisimulation collapse");
    c_collapse->add_option("file", in_path, "labeled chart file")->required();
    c_collapse->add_option("-o,--out", out_path, "output labeled chart file");
    c_collapse->add_option("--trace", trace_dir, "write one labeled chart per step here");
    c_collapse->add_flag("--constructive", constructive, "use the constructive pair search");

    auto* c_extract = app.add_subcommand("extract", "extract an expression from a witness");
    c_extract->add_option("file", in_path, "labeled chart file")->required();
    c_extract->add_flag("--simplify", do_simplify, "apply the zero laws");

    auto* c_prove = app.add_subcommand("prove", "prove two expressions equal");
    c_prove->add_option("--e1", e1_text, "first expression")->required();
    c_prove->add_option("--e2", e2_text, "second expression")->required();
    c_prove->add_option("-o,--out", cert_path, "certificate output file");

    auto* c_check = app.add_subcommand("check", "check a proof certificate");
    c_check->add_option("file", in_path, "certificate file")->required();

    auto* c_dot = app.add_subcommand("dot", "DOT rendering of a chart file");
    c_dot->add_option("file", in_path, "chart file")->required();
    c_dot->add_option("-o,--out", out_path, "output file");

    auto* c_test = app.add_subcommand("test", "run a property suite");
    c_test->add_option("suite", suite_name, "suite name")->required();
    c_test->add_option("--seed", seed, "generator seed");
    c_test->add_option("--cases", cases, "number of cases");
    c_test->add_option("--max-size", max_size, "expression size bound");
    c_test->add_option("--alphabet", alphabet, "alphabet size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_interp) {
            Interpretation in = interpret(parse_expr(expr_text));
            emit(out_path, save_chart(in.chart));
            return 0;
        }
        if (*c_labeled) {
            LabeledInterpretation li = interpret_labeled(parse_expr(expr_text));
            emit(out_path, save_chart(li.labeled.chart, li.labeled.levels));
            return 0;
        }
        if (*c_lee) {
            LoadedChart lc = load_file(in_path);
            EliminationStrategy st = strategy_name == "lazy" ? EliminationStrategy::Lazy
                                     : strategy_name == "lazy-reverse"
                                         ? EliminationStrategy::LazyReverse
                                         : EliminationStrategy::Eager;
            EliminationResult res = loop_elimination(lc.chart, st);
            for (const EliminationStep& step : res.trace) {
                std::cout << "step " << step.step << ": vertex " << step.vertex << ", entries";
                for (const Transition& t : step.entries)
                    std::cout << " (" << t.src << " " << t.act.name << " " << t.tgt << ")";
                std::cout << "\n";
            }
            if (!out_path.empty()) spit(out_path, save_chart(res.witness.chart, res.witness.levels));
            if (res.lee) {
                std::cout << "LEE holds (" << res.trace.size() << " eliminations)\n";
                return 0;
            }
            std::cout << "LEE fails: " << res.diagnosis << " (after " << res.trace.size()
                      << " eliminations)\n";
            return 1;
        }
        if (*c_check_w) {
            LabeledChart lc = require_labeled(load_file(in_path), in_path);
            WitnessReport rep = check_llee_witness(lc);
            if (rep.ok) {
                std::cout << "valid LLEE-witness\n";
                return 0;
            }
            for (const Violation& v : rep.violations) {
                const char* kind = v.kind == ViolationKind::W1      ? "W1"
                                   : v.kind == ViolationKind::W2aL1 ? "W2a-L1"
                                   : v.kind == ViolationKind::W2aL2 ? "W2a-L2"
                                   : v.kind == ViolationKind::W2aL3 ? "W2a-L3"
                                                                    : "W2b";
                std::cout << kind << ": " << v.detail << "\n";
            }
            return 1;
        }
        if (*c_bisim) {
            LoadedChart a = load_file(in_path);
            LoadedChart b = load_file(in_path2);
            auto bis = largest_bisimulation(a.chart, b.chart);
            if (!bis) {
                std::cout << "not bisimilar\n";
                return 1;
            }
            std::cout << "bisimilar; largest bisimulation:\n";
            for (auto& [v, w] : bis->pairs) std::cout << "  " << v << " ~ " << w << "\n";
            return 0;
        }
        if (*c_collapse) {
            LabeledChart lc = require_labeled(load_file(in_path), in_path);
            std::ofstream manifest;
            if (!trace_dir.empty()) {
                std::filesystem::create_directories(trace_dir);
                manifest.open(trace_dir + "/manifest.txt");
            }
            CollapseObserver obs;
            if (!trace_dir.empty()) {
                obs = [&](const CollapseStep& st) {
                    std::string name = "step" + std::to_string(st.step) + ".chart";
                    spit(trace_dir + "/" + name, save_chart(st.after.chart, st.after.levels));
                    manifest << st.step << " " << st.w1 << " " << st.w2 << " "
                             << cond_name(st.kind) << " " << name << "\n";
                };
            }
            CollapseResult res = collapse_llee(
                lc, constructive ? PairStrategy::Constructive : PairStrategy::Exhaustive, obs);
            emit(out_path, save_chart(res.witness.chart, res.witness.levels));
            std::cerr << res.steps.size() << " transformation steps\n";
            return 0;
        }
        if (*c_extract) {
            LabeledChart lc = require_labeled(load_file(in_path), in_path);
            ExprPtr e = extract_solution(lc, lc.chart.start());
            if (do_simplify) e = simplify(e).first;
            std::cout << format_expr(e) << "\n";
            return 0;
        }
        if (*c_prove) {
            auto cert = prove_equal(parse_expr(e1_text), parse_expr(e2_text));
            if (!cert) {
                std::cout << "not bisimilar\n";
                return 1;
            }
            CheckResult res = check_certificate(*cert);
            if (!res.ok) throw std::logic_error("generated certificate failed: " + res.reason);
            emit(cert_path, save_certificate(*cert));
            std::cerr << cert->steps.size() << " proof steps\n";
            return 0;
        }
        if (*c_check) {
            std::string text = slurp(in_path);
            Certificate cert;
            try {
                cert = load_certificate(text);
            } catch (const std::exception& e) {
                std::cout << "certificate invalid: " << e.what() << "\n";
                return 1;
            }
            CheckResult res = check_certificate(cert);
            if (res.ok) {
                std::cout << "certificate ok (" << cert.steps.size() << " steps)\n";
                return 0;
            }
            std::cout << "certificate invalid at step " << res.failed_step << ": " << res.reason
                      << "\n";
            return 1;
        }
        if (*c_dot) {
            LoadedChart lc = load_file(in_path);
            emit(out_path,
                 lc.levels ? to_dot(lc.chart, *lc.levels) : to_dot(lc.chart));
            return 0;
        }
        if (*c_test) {
            ExprGen cfg{seed, max_size, alphabet};
            SuiteResult res = run_suite(suite_name, cfg, cases);
            std::cout << "suite " << res.name << ": " << res.cases << " cases, " << res.failures
                      << " failures\n";
            for (const std::string& ce : res.counterexamples)
                std::cout << "  counterexample: " << ce << "\n";
            return res.ok() ? 0 : 1;
        }
    } catch (const ParseError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return 2;
    } catch (const ChartError& e) {
        std::cerr << "chart error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
