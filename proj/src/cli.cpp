#include "confound/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "confound/errors.hpp"
#include "confound/format.hpp"
#include "confound/intervention.hpp"
#include "confound/latent.hpp"
#include "confound/model_file.hpp"

namespace confound::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw PreconditionError("empty entry in list '" + s + "'");
        out.push_back(item);
    }
    return out;
}

Assignment parse_assignment(const std::string& s) {
    Assignment a;
    for (const auto& item : split_list(s)) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
            throw PreconditionError("expected VAR=state, got '" + item + "'");
        auto name = item.substr(0, eq);
        if (!a.emplace(name, item.substr(eq + 1)).second)
            throw PreconditionError("variable '" + name + "' assigned twice");
    }
    return a;
}

std::string describe(const Assignment& a) {
    std::string out;
    for (const auto& [k, v] : a) out += (out.empty() ? "" : ", ") + k + "=" + v;
    return out;
}

std::string braces(const NodeSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + s[i];
    return out + "}";
}

// Rows of a distribution factor: variables sorted by name, configurations in state order.
void print_distribution(std::ostream& out, const Factor& f, const std::string& condition) {
    std::vector<std::string> names;
    for (const auto& v : f.scope()) names.push_back(v.name);
    std::sort(names.begin(), names.end());
    Factor g = reorder(f, names);
    std::vector<std::size_t> config;
    for (std::size_t k = 0; k < g.size(); ++k) {
        g.decode(k, config);
        std::string lhs;
        for (std::size_t i = 0; i < names.size(); ++i)
            lhs += (i ? ", " : "") + names[i] + "=" + g.scope()[i].states[config[i]];
        out << "P(" << lhs << (condition.empty() ? "" : " | " + condition) << ") = "
            << format_number(g.values()[k]) << '\n';
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot write '" + path + "'");
    return f;
}

std::optional<std::vector<double>> no_values() { return std::nullopt; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact causal-effect and confounding-bias computations on discrete Bayesian networks",
                 "confound"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string model_path, target, given, do_str, treatment, outcome, covariate, set_str, a_str, b_str,
        mode = "graph", metric = "sum", z1, z0, tmpl, out_path, orientation = "t_high";
    double tolerance = tol::kDistributional, py = 0, pyp = 0, lo = 0, hi = 0, margin = 0.05, r1 = 0, r2 = 0,
           r3 = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool with_mi = false;
    std::vector<std::string> params;

    auto* query_cmd = app.add_subcommand("query", "Conditional distribution P(target | given)");
    query_cmd->add_option("model", model_path, "Model file")->required();
    query_cmd->add_option("--target", target, "Target variable(s), comma separated")->required();
    query_cmd->add_option("--given", given, "Evidence A=s,B=t");

    auto* do_cmd = app.add_subcommand("do", "Interventional distribution P(target | do(...))");
    do_cmd->add_option("model", model_path, "Model file")->required();
    do_cmd->add_option("--target", target, "Target variable")->required();
    do_cmd->add_option("--do", do_str, "Interventions A=s,B=t")->required();

    auto* ace_cmd = app.add_subcommand("ace", "Average causal effect E[Y|do(z1)] - E[Y|do(z0)]");
    auto* adjust_cmd = app.add_subcommand("adjust", "Adjustment-formula estimate compared with do()");
    auto* bias_cmd = app.add_subcommand("bias", "Bias from conditioning on a single covariate");
    auto* select_cmd = app.add_subcommand("select", "Two-stage sufficient confounder selection");
    for (auto* c : {ace_cmd, adjust_cmd, bias_cmd, select_cmd}) {
        c->add_option("model", model_path, "Model file")->required();
        c->add_option("--treatment", treatment, "Treatment variable")->required();
        c->add_option("--outcome", outcome, "Outcome variable")->required();
    }
    for (auto* c : {ace_cmd, bias_cmd}) {
        c->add_option("--z1", z1, "Treatment level (default: last state)");
        c->add_option("--z0", z0, "Control level (default: first state)");
    }
    adjust_cmd->add_option("--set", set_str, "Adjustment set A,B (empty string for none)")->required();
    bias_cmd->add_option("--covariate", covariate, "Covariate conditioned on")->required();
    select_cmd->add_option("--mode", mode, "graph or dist")->check(CLI::IsMember({"graph", "dist"}));
    select_cmd->add_option("--tol", tolerance, "Distributional-mode tolerance");
    select_cmd->add_option("--metric", metric, "Subset size: sum or product of state counts")
        ->check(CLI::IsMember({"sum", "product"}));

    auto* dsep_cmd = app.add_subcommand("dsep", "d-separation test (exit 0 true, 1 false)");
    dsep_cmd->add_option("model", model_path, "Model file")->required();
    dsep_cmd->add_option("--a", a_str, "First node set")->required();
    dsep_cmd->add_option("--b", b_str, "Second node set")->required();
    dsep_cmd->add_option("--given", given, "Conditioning set");

    auto* backdoor_cmd = app.add_subcommand("backdoor", "Back-door criterion (exit 0 true, 1 false)");
    backdoor_cmd->add_option("model", model_path, "Model file")->required();
    backdoor_cmd->add_option("--treatment", treatment, "Treatment variable")->required();
    backdoor_cmd->add_option("--outcome", outcome, "Outcome variable")->required();
    backdoor_cmd->add_option("--set", set_str, "Adjustment set A,B (empty string for none)")->required();

    auto* scan_cmd = app.add_subcommand("scan", "Exact bias scan over a template parameter grid");
    scan_cmd->add_option("--template", tmpl, "modelB, modelC, modelD, ...")->required();
    scan_cmd->add_option("--param", params, "NAME=a:b:step, NAME=v1,v2 or NAME=v (repeatable)");
    scan_cmd->add_option("--out", out_path, "CSV output file")->required();
    scan_cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
    scan_cmd->add_flag("--mi", with_mi, "Append mutual-information columns");

    auto* scenario_cmd = app.add_subcommand("scenario", "Write a template model file");
    scenario_cmd->add_option("--template", tmpl, "Template name")->required();
    scenario_cmd->add_option("--param", params, "NAME=v overrides (repeatable)");
    scenario_cmd->add_option("--out", out_path, "Output file (default: stdout)");

    auto* decompose_cmd = app.add_subcommand("decompose", "Common-cause decomposition of p(x|y), p(x|y')");
    decompose_cmd->add_option("--py", py, "p(x|y)")->required();
    decompose_cmd->add_option("--pyp", pyp, "p(x|y')")->required();
    auto* lo_opt = decompose_cmd->add_option("--lo", lo, "Lower endpoint");
    auto* hi_opt = decompose_cmd->add_option("--hi", hi, "Upper endpoint");
    lo_opt->needs(hi_opt);
    hi_opt->needs(lo_opt);
    decompose_cmd->add_option("--margin", margin, "Endpoint margin when --lo/--hi are omitted");
    decompose_cmd->add_option("--orientation", orientation, "t_high or t_low")
        ->check(CLI::IsMember({"t_high", "t_low"}));

    auto* corr_cmd = app.add_subcommand("corr", "Feasible range of a third correlation");
    corr_cmd->add_option("--r1", r1, "Correlation r_ac")->required();
    corr_cmd->add_option("--r2", r2, "Correlation r_bc")->required();
    auto* r3_opt = corr_cmd->add_option("--r3", r3, "Candidate r_ab (exit 0 feasible, 1 infeasible)");

    auto* sample_cmd = app.add_subcommand("sample", "Seeded ancestral sampling to CSV");
    sample_cmd->add_option("model", model_path, "Model file")->required();
    sample_cmd->add_option("-n", n, "Number of rows")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", seed, "Random seed")->required();
    sample_cmd->add_option("--out", out_path, "CSV output file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (*query_cmd) {
            auto net = load_model(model_path);
            auto evidence = parse_assignment(given);
            print_distribution(out, query(net, split_list(target), evidence), describe(evidence));
        } else if (*do_cmd) {
            auto net = load_model(model_path);
            auto interventions = parse_assignment(do_str);
            auto dist = interventional_distribution(net, {target, interventions});
            print_distribution(out, dist, "do(" + describe(interventions) + ")");
        } else if (*ace_cmd) {
            auto net = load_model(model_path);
            const auto& z = net.variable(treatment);
            if (z1.empty()) z1 = z.states.back();
            if (z0.empty()) z0 = z.states.front();
            out << "ACE(" << treatment << ": " << z1 << " vs " << z0 << " -> " << outcome
                << ") = " << format_number(ace(net, treatment, outcome, z1, z0, no_values())) << '\n';
        } else if (*adjust_cmd) {
            auto net = load_model(model_path);
            auto set = split_list(set_str);
            Factor adj = adjusted_estimate(net, treatment, outcome, set);
            Factor truth = interventional_table(net, treatment, outcome);
            const auto& zv = net.variable(treatment);
            const auto& yv = net.variable(outcome);
            out << "adjustment set: " << braces(set) << '\n';
            out << "backdoor admissible: " << (backdoor_admissible(net.dag(), treatment, outcome, set) ? "true" : "false")
                << '\n';
            out << treatment << '\t' << outcome << "\tadjusted\tdo\tdifference\n";
            for (std::size_t z = 0; z < zv.cardinality(); ++z)
                for (std::size_t y = 0; y < yv.cardinality(); ++y) {
                    const double a = adj.values()[z * yv.cardinality() + y];
                    const double t = truth.values()[z * yv.cardinality() + y];
                    out << zv.states[z] << '\t' << yv.states[y] << '\t' << format_number(a) << '\t'
                        << format_number(t) << '\t' << format_number(a - t) << '\n';
                }
            out << "max |adjusted - do| = " << format_number(max_abs_difference(adj, truth)) << '\n';
        } else if (*bias_cmd) {
            auto net = load_model(model_path);
            const auto& zv = net.variable(treatment);
            if (z1.empty()) z1 = zv.states.back();
            if (z0.empty()) z0 = zv.states.front();
            auto report = effect_report(net, treatment, outcome, {{covariate}}, z1, z0);
            const auto& adj = report.adjusted.front();
            out << "conditioning bias (" << covariate << ") = "
                << format_number(conditioning_bias(net, treatment, outcome, covariate, z1, z0)) << '\n';
            out << "ACE true = " << format_number(report.ace_true) << '\n';
            out << "ACE adjusted = " << format_number(adj.ace) << '\n';
            out << "ACE unadjusted = " << format_number(report.ace_unadjusted) << '\n';
            out << "level\terr_adjusted\terr_unadjusted\n";
            for (std::size_t z = 0; z < zv.cardinality(); ++z)
                out << treatment << "=" << zv.states[z] << '\t' << format_number(adj.level_errors[z]) << '\t'
                    << format_number(report.unadjusted_level_errors[z]) << '\n';
            out << "ACE\t" << format_number(adj.ace_error) << '\t' << format_number(report.unadjusted_ace_error)
                << '\n';
        } else if (*select_cmd) {
            auto net = load_model(model_path);
            SelectionOptions opts;
            opts.mode = mode == "graph" ? SelectionMode::graphical : SelectionMode::distributional;
            opts.tolerance = tolerance;
            opts.metric = metric == "sum" ? SizeMetric::sum : SizeMetric::product;
            auto sel = select_sufficient_confounders(net, treatment, outcome, opts);
            out << "selected: " << braces(sel.chosen) << '\n';
            out << "pool: " << braces(sel.pool) << '\n';
            out << "stage 1: " << braces(sel.stage1) << '\n';
            out << "audit:\n";
            for (const auto& e : sel.audit) {
                out << "  stage " << e.stage << "  " << braces(e.subset) << "  cost=" << format_number(e.cost)
                    << "  " << (e.accepted ? "accepted" : "rejected");
                if (opts.mode == SelectionMode::distributional) out << "  gap=" << format_number(e.discrepancy);
                out << '\n';
            }
        } else if (*dsep_cmd) {
            auto net = load_model(model_path);
            bool sep = d_separated(net.dag(), split_list(a_str), split_list(b_str), split_list(given));
            out << "d-separated: " << (sep ? "true" : "false") << '\n';
            return sep ? kOk : kFalse;
        } else if (*backdoor_cmd) {
            auto net = load_model(model_path);
            bool ok = backdoor_admissible(net.dag(), treatment, outcome, split_list(set_str));
            out << "backdoor admissible: " << (ok ? "true" : "false") << '\n';
            return ok ? kOk : kFalse;
        } else if (*scan_cmd) {
            ScenarioParams base = default_scenario(parse_template(tmpl));
            std::vector<GridAxis> grid;
            for (const auto& p : params) grid.push_back(parse_axis(p));
            ScanOptions opts;
            opts.threads = threads;
            auto rows = bias_scan(base, grid, opts);
            auto file = open_output(out_path);
            write_scan_csv(file, rows, with_mi);
            write_scan_summary(out, summarize_scan(rows));
        } else if (*scenario_cmd) {
            ScenarioParams sp = default_scenario(parse_template(tmpl));
            for (const auto& p : params) {
                auto axis = parse_axis(p);
                if (axis.values.size() != 1) throw PreconditionError("scenario takes single values: '" + p + "'");
                sp.parameters[axis.name] = axis.values.front();
            }
            auto text = serialize_model(build_scenario(sp));
            if (out_path.empty()) {
                out << text;
            } else {
                auto file = open_output(out_path);
                file << text;
            }
        } else if (*decompose_cmd) {
            const Orientation o = orientation == "t_high" ? Orientation::t_high : Orientation::t_low;
            auto d = lo_opt->count() ? decompose_common_cause(py, pyp, lo, hi, o)
                                     : decompose_common_cause_auto(py, pyp, margin, o);
            auto res = identity_residuals(d);
            out << "p(x|t) = " << format_number(d.p_x_given_t) << '\n';
            out << "p(x|t') = " << format_number(d.p_x_given_tprime) << '\n';
            out << "p(t|y) = " << format_number(d.p_t_given_y) << '\n';
            out << "p(t'|y) = " << format_number(1.0 - d.p_t_given_y) << '\n';
            out << "p(t|y') = " << format_number(d.p_t_given_yprime) << '\n';
            out << "p(t'|y') = " << format_number(1.0 - d.p_t_given_yprime) << '\n';
            out << "reconstruction residual (y, y') = " << format_number(res.reconstruction_y) << ", "
                << format_number(res.reconstruction_yprime) << '\n';
            out << "ratio residual (y, y') = " << format_number(res.ratio_y) << ", "
                << format_number(res.ratio_yprime) << '\n';
            out << "identities: " << (res.max_abs() <= tol::kArithmetic ? "hold" : "FAIL") << '\n';
        } else if (*corr_cmd) {
            auto iv = third_correlation_interval(r1, r2);
            out << "interval: [" << format_number(iv.lo) << ", " << format_number(iv.hi) << "]\n";
            out << "0 " << (iv.contains(0.0) ? "included" : "excluded") << '\n';
            if (r3_opt->count()) {
                bool ok = correlation_feasible(r3, r1, r2);
                out << "r3 = " << format_number(r3) << ": " << (ok ? "feasible" : "infeasible") << '\n';
                return ok ? kOk : kFalse;
            }
        } else if (*sample_cmd) {
            auto net = load_model(model_path);
            auto data = forward_sample(net, n, seed);
            auto file = open_output(out_path);
            write_csv(file, data);
            out << "wrote " << data.rows() << " rows to " << out_path << '\n';
        }
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return kModel;
    } catch (const MathError& e) {
        err << "error: " << e.what() << '\n';
        return kMath;
    }
    return kOk;
}

}  // namespace confound::cli
