#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "confound/errors.hpp"
#include "confound/intervention.hpp"
#include "confound/latent.hpp"
#include "confound/model_file.hpp"

namespace py = pybind11;
using namespace confound;

namespace {

// Factor -> {state: p} for one variable, {(s1, s2, ...): p} otherwise.
py::dict factor_to_dict(const Factor& f) {
    py::dict d;
    std::vector<std::size_t> config;
    for (std::size_t k = 0; k < f.size(); ++k) {
        f.decode(k, config);
        if (f.scope().size() == 1) {
            d[py::str(f.scope()[0].states[config[0]])] = f.values()[k];
            continue;
        }
        py::tuple key(config.size());
        for (std::size_t i = 0; i < config.size(); ++i) key[i] = py::str(f.scope()[i].states[config[i]]);
        d[key] = f.values()[k];
    }
    return d;
}

// {treatment, outcome} table -> {z: {y: p}}.
py::dict table_to_dict(const Factor& f) {
    py::dict d;
    const auto& z = f.scope()[0];
    const auto& y = f.scope()[1];
    for (std::size_t i = 0; i < z.cardinality(); ++i) {
        py::dict row;
        for (std::size_t j = 0; j < y.cardinality(); ++j) row[py::str(y.states[j])] = f.values()[i * y.cardinality() + j];
        d[py::str(z.states[i])] = row;
    }
    return d;
}

SelectionMode parse_mode(const std::string& m) {
    if (m == "graph") return SelectionMode::graphical;
    if (m == "dist") return SelectionMode::distributional;
    throw PreconditionError("mode must be 'graph' or 'dist'");
}

SizeMetric parse_metric(const std::string& m) {
    if (m == "sum") return SizeMetric::sum;
    if (m == "product") return SizeMetric::product;
    throw PreconditionError("metric must be 'sum' or 'product'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact causal-effect computations on discrete Bayesian networks";

    auto base = py::register_exception<Error>(m, "ConfoundError", PyExc_RuntimeError);
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    auto model = py::register_exception<ModelError>(m, "ModelError", base.ptr());
    auto math = py::register_exception<MathError>(m, "MathError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", model.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", model.ptr());
    py::register_exception<PositivityViolation>(m, "PositivityViolation", math.ptr());
    py::register_exception<InfeasibleEndpoints>(m, "InfeasibleEndpoints", math.ptr());

    py::class_<DiscreteBayesNet>(m, "BayesNet")
        .def_property_readonly("nodes", [](const DiscreteBayesNet& n) { return n.dag().nodes(); })
        .def("states", [](const DiscreteBayesNet& n, const std::string& v) { return n.variable(v).states; })
        .def("parents", [](const DiscreteBayesNet& n, const std::string& v) { return n.cpt(v).parents; })
        .def("table", [](const DiscreteBayesNet& n, const std::string& v) { return n.cpt(v).table; })
        .def("serialize", &serialize_model)
        .def("__repr__", [](const DiscreteBayesNet& n) {
            std::string s = "<BayesNet";
            for (const auto& v : n.dag().nodes()) s += " " + v;
            return s + ">";
        });

    m.def("parse_model", &parse_model, py::arg("text"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def("scenario", [](const std::string& tmpl, const std::map<std::string, double>& overrides) {
        auto sp = default_scenario(parse_template(tmpl));
        for (const auto& [k, v] : overrides) sp.parameters[k] = v;
        return build_scenario(sp);
    }, py::arg("template"), py::arg("params") = std::map<std::string, double>{});
    m.def("template_parameters", [](const std::string& t) { return template_parameters(parse_template(t)); });

    m.def("query", [](const DiscreteBayesNet& net, const std::vector<std::string>& targets, const Assignment& given) {
        return factor_to_dict(query(net, targets, given));
    }, py::arg("net"), py::arg("targets"), py::arg("given") = Assignment{});
    m.def("do", [](const DiscreteBayesNet& net, const std::string& target, const Assignment& interventions) {
        return factor_to_dict(interventional_distribution(net, {target, interventions}));
    }, py::arg("net"), py::arg("target"), py::arg("interventions"));
    m.def("ace", [](const DiscreteBayesNet& net, const std::string& z, const std::string& y,
                    std::optional<std::string> z1, std::optional<std::string> z0) {
        const auto& states = net.variable(z).states;
        return ace(net, z, y, z1.value_or(states.back()), z0.value_or(states.front()));
    }, py::arg("net"), py::arg("treatment"), py::arg("outcome"), py::arg("z1") = py::none(), py::arg("z0") = py::none());
    m.def("interventional_table", [](const DiscreteBayesNet& net, const std::string& z, const std::string& y) {
        return table_to_dict(interventional_table(net, z, y));
    }, py::arg("net"), py::arg("treatment"), py::arg("outcome"));
    m.def("adjusted_estimate", [](const DiscreteBayesNet& net, const std::string& z, const std::string& y,
                                  const NodeSet& s) { return table_to_dict(adjusted_estimate(net, z, y, s)); },
          py::arg("net"), py::arg("treatment"), py::arg("outcome"), py::arg("adjustment"));
    m.def("unadjusted_estimate", [](const DiscreteBayesNet& net, const std::string& z, const std::string& y) {
        return table_to_dict(unadjusted_estimate(net, z, y));
    }, py::arg("net"), py::arg("treatment"), py::arg("outcome"));
    m.def("conditioning_bias", [](const DiscreteBayesNet& net, const std::string& z, const std::string& y,
                                  const std::string& x) {
        const auto& states = net.variable(z).states;
        return conditioning_bias(net, z, y, x, states.back(), states.front());
    }, py::arg("net"), py::arg("treatment"), py::arg("outcome"), py::arg("covariate"));

    m.def("d_separated", [](const DiscreteBayesNet& net, const NodeSet& a, const NodeSet& b, const NodeSet& s) {
        return d_separated(net.dag(), a, b, s);
    }, py::arg("net"), py::arg("a"), py::arg("b"), py::arg("given") = NodeSet{});
    m.def("backdoor_admissible", [](const DiscreteBayesNet& net, const std::string& z, const std::string& y,
                                    const NodeSet& s) { return backdoor_admissible(net.dag(), z, y, s); },
          py::arg("net"), py::arg("treatment"), py::arg("outcome"), py::arg("adjustment"));
    m.def("select_confounders", [](const DiscreteBayesNet& net, const std::string& z, const std::string& y,
                                   const std::string& mode, const std::string& metric, double tolerance) {
        return select_sufficient_confounders(net, z, y, {parse_mode(mode), tolerance, parse_metric(metric)}).chosen;
    }, py::arg("net"), py::arg("treatment"), py::arg("outcome"), py::arg("mode") = "graph",
          py::arg("metric") = "sum", py::arg("tolerance") = tol::kDistributional);

    m.def("third_correlation_interval", [](double r_ac, double r_bc) {
        auto iv = third_correlation_interval(r_ac, r_bc);
        return std::make_pair(iv.lo, iv.hi);
    }, py::arg("r_ac"), py::arg("r_bc"));
    m.def("correlation_feasible", &correlation_feasible, py::arg("r_ab"), py::arg("r_ac"), py::arg("r_bc"));
    m.def("decompose_common_cause", [](double py_, double pyp, double lo, double hi, const std::string& o) {
        if (o != "t_high" && o != "t_low") throw PreconditionError("orientation must be 't_high' or 't_low'");
        auto d = decompose_common_cause(py_, pyp, lo, hi, o == "t_high" ? Orientation::t_high : Orientation::t_low);
        py::dict r;
        r["p_x_given_t"] = d.p_x_given_t;
        r["p_x_given_tprime"] = d.p_x_given_tprime;
        r["p_t_given_y"] = d.p_t_given_y;
        r["p_t_given_yprime"] = d.p_t_given_yprime;
        r["max_residual"] = identity_residuals(d).max_abs();
        return r;
    }, py::arg("p_x_given_y"), py::arg("p_x_given_yprime"), py::arg("lo"), py::arg("hi"),
          py::arg("orientation") = "t_high");
    m.def("classify_interaction", [](const DiscreteBayesNet& net, const std::string& u, const std::string& w,
                                     const std::string& x) { return std::string(to_string(classify_interaction(net, u, w, x))); },
          py::arg("net"), py::arg("u"), py::arg("w"), py::arg("x"));

    m.def("scan_csv", [](const std::string& tmpl, const std::vector<std::string>& axes, unsigned threads, bool mi) {
        std::vector<GridAxis> grid;
        for (const auto& a : axes) grid.push_back(parse_axis(a));
        std::vector<ScanResult> rows;
        {
            py::gil_scoped_release release;
            rows = bias_scan(default_scenario(parse_template(tmpl)), grid, {"Z", "Y", "X", threads});
        }
        std::ostringstream out;
        write_scan_csv(out, rows, mi);
        return out.str();
    }, py::arg("template"), py::arg("axes"), py::arg("threads") = 1, py::arg("mi") = false);

    m.def("sample_csv", [](const DiscreteBayesNet& net, std::size_t n, std::uint64_t seed) {
        std::ostringstream out;
        write_csv(out, forward_sample(net, n, seed));
        return out.str();
    }, py::arg("net"), py::arg("n"), py::arg("seed"));
}
