#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "confound/errors.hpp"
#include "confound/latent.hpp"

namespace confound {

namespace {

// 1 - p rounded to 15 significant digits, so 0.8 yields 0.2 rather than
// 0.19999999999999996 in written model files.
double complement(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", 1.0 - p);
    return std::strtod(buf, nullptr);
}

struct Node {
    std::string name;
    std::vector<std::string> parents;
};

std::vector<Node> structure(Template t) {
    switch (t) {
        case Template::model1_fig1:
            return {{"X", {}}, {"Z", {"X"}}, {"Y", {"Z", "X"}}};
        case Template::model2_fig1:
            return {{"X", {}}, {"Z", {}}, {"Y", {"Z", "X"}}};
        case Template::model1_fig2:
            return {{"U", {}}, {"W", {}}, {"X", {"U", "W"}}, {"Z", {"U", "X"}}, {"Y", {"Z", "X", "W"}}};
        case Template::model2_fig2:
            return {{"U", {}}, {"W", {"U"}}, {"X", {"U", "W"}}, {"Z", {"U", "X"}}, {"Y", {"Z", "X", "W"}}};
        case Template::modelA:
            return {{"Z", {}}, {"X", {"Z"}}, {"Y", {"Z", "X"}}};
        case Template::modelB:
            return {{"U", {}}, {"W", {}}, {"X", {"U", "W"}}, {"Z", {"U"}}, {"Y", {"Z", "W"}}};
        case Template::modelC:
            return {{"V", {}}, {"X", {"V"}}, {"Z", {"V"}}, {"Y", {"Z", "V"}}};
        case Template::modelD:
            return {{"U", {}}, {"W", {"U"}}, {"X", {"U", "W"}}, {"Z", {"U"}}, {"Y", {"Z", "W"}}};
    }
    throw PreconditionError("unknown template");
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Parameter names for one node, one per parent configuration (first parent slowest).
std::vector<std::string> node_parameters(const Node& n) {
    std::vector<std::string> out;
    if (n.parents.empty()) return {lower(n.name)};
    const std::size_t rows = std::size_t{1} << n.parents.size();
    for (std::size_t r = 0; r < rows; ++r) {
        std::string name = lower(n.name) + "_";
        for (std::size_t j = 0; j < n.parents.size(); ++j) {
            const std::size_t bit = (r >> (n.parents.size() - 1 - j)) & 1u;
            name += lower(n.parents[j]) + std::to_string(bit);
        }
        out.push_back(name);
    }
    return out;
}

std::map<std::string, double> zip(Template t, const std::vector<double>& values) {
    auto names = template_parameters(t);
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = values.at(i);
    return out;
}

const std::vector<double> kModelBValues = {
    0.4,                      // u
    0.6,                      // w
    0.1, 0.7, 0.6, 0.95,      // x_u?w?
    0.3, 0.8,                 // z_u?
    0.2, 0.5, 0.4, 0.9,       // y_z?w?
};

}  // namespace

std::string_view to_string(Template t) {
    switch (t) {
        case Template::model1_fig1: return "model1_fig1";
        case Template::model2_fig1: return "model2_fig1";
        case Template::model1_fig2: return "model1_fig2";
        case Template::model2_fig2: return "model2_fig2";
        case Template::modelA: return "modelA";
        case Template::modelB: return "modelB";
        case Template::modelC: return "modelC";
        case Template::modelD: return "modelD";
    }
    return "?";
}

std::vector<Template> all_templates() {
    return {Template::model1_fig1, Template::model2_fig1, Template::model1_fig2, Template::model2_fig2,
            Template::modelA,      Template::modelB,      Template::modelC,      Template::modelD};
}

Template parse_template(std::string_view name) {
    for (auto t : all_templates())
        if (to_string(t) == name) return t;
    throw PreconditionError("unknown template '" + std::string(name) + "'");
}

std::vector<std::string> template_parameters(Template t) {
    std::vector<std::string> out;
    for (const auto& n : structure(t)) {
        auto ps = node_parameters(n);
        out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
}

ScenarioParams default_scenario(Template t) {
    switch (t) {
        case Template::model1_fig1:
            return {t, zip(t, {0.5, 0.2, 0.8, 0.1, 0.5, 0.6, 0.9})};
        case Template::model2_fig1:
            return {t, zip(t, {0.5, 0.5, 0.1, 0.5, 0.6, 0.9})};
        case Template::model1_fig2:
            return {t, zip(t, {0.5, 0.4,                       // u, w
                               0.1, 0.6, 0.5, 0.9,             // x_u?w?
                               0.2, 0.6, 0.5, 0.85,            // z_u?x?
                               0.1, 0.4, 0.3, 0.6, 0.3, 0.7, 0.5, 0.9})};
        case Template::model2_fig2:
            return {t, zip(t, {0.5, 0.3, 0.7,                  // u, w_u?
                               0.1, 0.6, 0.5, 0.9,
                               0.2, 0.6, 0.5, 0.85,
                               0.1, 0.4, 0.3, 0.6, 0.3, 0.7, 0.5, 0.9})};
        case Template::modelA: {
            // The observed (Z, X, Y) margin of the reference M-structure.
            Factor m = marginal(joint(build_scenario(default_scenario(Template::modelB))), {"X", "Z", "Y"});
            m = reorder(m, {"Z", "X", "Y"});
            auto p = [&](std::size_t z, std::size_t x, std::size_t y) { return m.values()[z * 4 + x * 2 + y]; };
            std::vector<double> v;
            double pz1 = 0.0;
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y) pz1 += p(1, x, y);
            v.push_back(pz1);
            for (std::size_t z = 0; z < 2; ++z) {
                double pz = p(z, 0, 0) + p(z, 0, 1) + p(z, 1, 0) + p(z, 1, 1);
                v.push_back((p(z, 1, 0) + p(z, 1, 1)) / pz);
            }
            for (std::size_t z = 0; z < 2; ++z)
                for (std::size_t x = 0; x < 2; ++x) v.push_back(p(z, x, 1) / (p(z, x, 0) + p(z, x, 1)));
            return {t, zip(t, v)};
        }
        case Template::modelB:
            return {t, zip(t, kModelBValues)};
        case Template::modelC:
            return {t, zip(t, {0.5,                           // v
                               0.1, 0.9,                      // x_v?
                               0.2, 0.8,                      // z_v?
                               0.1, 0.6, 0.4, 0.9})};         // y_z?v?
        case Template::modelD:
            return {t, zip(t, {0.4,                           // u
                               0.3, 0.8,                      // w_u?
                               0.1, 0.7, 0.6, 0.95,           // x_u?w?
                               0.3, 0.8,                      // z_u?
                               0.2, 0.5, 0.4, 0.9})};         // y_z?w?
    }
    throw PreconditionError("unknown template");
}

DiscreteBayesNet build_scenario(const ScenarioParams& sp) {
    const auto schema = template_parameters(sp.tmpl);
    for (const auto& name : schema)
        if (!sp.parameters.count(name))
            throw ValidationError("parameter schema: '" + name + "' missing for " +
                                  std::string(to_string(sp.tmpl)));
    for (const auto& [name, value] : sp.parameters) {
        if (std::find(schema.begin(), schema.end(), name) == schema.end())
            throw ValidationError("parameter schema: '" + name + "' is not a parameter of " +
                                  std::string(to_string(sp.tmpl)));
        if (!(value >= 0.0 && value <= 1.0))
            throw ValidationError("parameter range: '" + name + "' = " + std::to_string(value) +
                                  " is outside [0,1]");
    }

    std::vector<Variable> vars;
    std::vector<Cpt> cpts;
    for (const auto& n : structure(sp.tmpl)) {
        vars.push_back({n.name, {"0", "1"}});
        Cpt cpt{n.name, n.parents, {}};
        for (const auto& p : node_parameters(n)) {
            const double one = sp.parameters.at(p);
            cpt.table.push_back({complement(one), one});
        }
        cpts.push_back(std::move(cpt));
    }
    return DiscreteBayesNet::from_cpts(std::move(vars), std::move(cpts));
}

}  // namespace confound
