#include "confound/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include "confound/errors.hpp"

namespace confound {

DiscreteBayesNet::DiscreteBayesNet(Dag dag, std::vector<Variable> variables, std::vector<Cpt> cpts)
    : dag_(std::move(dag)) {
    for (auto& v : variables) {
        auto name = v.name;
        if (!variables_.emplace(name, std::move(v)).second)
            throw ValidationError("duplicate variable: '" + name + "'");
    }
    for (auto& c : cpts) {
        auto name = c.child;
        if (!cpts_.emplace(name, std::move(c)).second)
            throw ValidationError("duplicate CPT: '" + name + "'");
    }
}

DiscreteBayesNet DiscreteBayesNet::from_cpts(std::vector<Variable> variables, std::vector<Cpt> cpts) {
    std::vector<std::string> names;
    for (const auto& v : variables) names.push_back(v.name);
    std::map<std::string, NodeSet> parents;
    for (const auto& c : cpts) parents[c.child] = c.parents;
    DiscreteBayesNet net(Dag(names, parents), std::move(variables), std::move(cpts));
    validate(net);
    return net;
}

std::vector<Variable> DiscreteBayesNet::variables() const {
    std::vector<Variable> out;
    for (const auto& n : dag_.nodes()) out.push_back(variable(n));
    return out;
}

const Variable& DiscreteBayesNet::variable(const std::string& name) const {
    auto it = variables_.find(name);
    if (it == variables_.end()) throw UnknownVariable("unknown variable '" + name + "'");
    return it->second;
}

const Cpt& DiscreteBayesNet::cpt(const std::string& name) const {
    auto it = cpts_.find(name);
    if (it == cpts_.end()) throw UnknownVariable("no CPT for '" + name + "'");
    return it->second;
}

void validate(const DiscreteBayesNet& net) {
    const Dag& dag = net.dag();
    for (const auto& [name, _] : net.variable_map())
        if (!dag.contains(name)) throw ValidationError("extra variable: '" + name + "' is not a node");
    for (const auto& [name, _] : net.cpt_map())
        if (!dag.contains(name)) throw ValidationError("extra CPT: '" + name + "' is not a node");

    for (const auto& node : dag.nodes()) {
        if (!net.has_variable(node)) throw ValidationError("missing variable: '" + node + "'");
        const Variable& v = net.variable(node);
        if (v.states.size() < 2)
            throw ValidationError("state count: '" + node + "' needs at least two states");
        std::set<std::string> labels(v.states.begin(), v.states.end());
        if (labels.size() != v.states.size())
            throw ValidationError("state labels: '" + node + "' has duplicate state labels");
        for (const auto& s : v.states)
            if (s.empty()) throw ValidationError("state labels: '" + node + "' has an empty label");
    }

    for (const auto& node : dag.nodes()) {
        if (!net.has_cpt(node)) throw ValidationError("missing CPT: '" + node + "'");
        const Cpt& cpt = net.cpt(node);
        if (cpt.parents != dag.parents(node))
            throw ValidationError("parent mismatch: CPT '" + node +
                                  "' parents differ from the graph's parent list");
        std::size_t rows = 1;
        for (const auto& p : cpt.parents) rows *= net.variable(p).cardinality();
        if (cpt.table.size() != rows)
            throw ValidationError("row count: CPT '" + node + "' has " +
                                  std::to_string(cpt.table.size()) + " rows, expected " +
                                  std::to_string(rows));
        const std::size_t cols = net.variable(node).cardinality();
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& row = cpt.table[r];
            if (row.size() != cols)
                throw ValidationError("column count: CPT '" + node + "' row " + std::to_string(r) +
                                      " has " + std::to_string(row.size()) + " entries, expected " +
                                      std::to_string(cols));
            double total = 0.0;
            for (double p : row) {
                if (!(p >= 0.0 && p <= 1.0))
                    throw ValidationError("entry range: CPT '" + node + "' row " +
                                          std::to_string(r) + " has an entry outside [0,1]");
                total += p;
            }
            if (std::abs(total - 1.0) > tol::kRowSum)
                throw ValidationError("row sum: CPT '" + node + "' row " + std::to_string(r) +
                                      " sums to " + std::to_string(total));
        }
    }
}

namespace {

// Flattened CPTs indexed by node position for tight loops.
struct CompiledNet {
    std::vector<std::size_t> card;
    std::vector<std::vector<std::size_t>> parents;
    std::vector<std::vector<double>> table;  // row-major [parent config][child state]

    explicit CompiledNet(const DiscreteBayesNet& net) {
        const Dag& dag = net.dag();
        for (std::size_t i = 0; i < dag.size(); ++i) {
            const auto& name = dag.nodes()[i];
            card.push_back(net.variable(name).cardinality());
            parents.push_back(dag.parent_indices(i));
            std::vector<double> flat;
            for (const auto& row : net.cpt(name).table) flat.insert(flat.end(), row.begin(), row.end());
            table.push_back(std::move(flat));
        }
    }

    std::size_t row_of(std::size_t node, const std::vector<std::size_t>& config) const {
        std::size_t r = 0;
        for (auto p : parents[node]) r = r * card[p] + config[p];
        return r;
    }

    double prob(std::size_t node, const std::vector<std::size_t>& config) const {
        return table[node][row_of(node, config) * card[node] + config[node]];
    }
};

}  // namespace

Factor joint(const DiscreteBayesNet& net, std::size_t cap) {
    validate(net);
    auto vars = net.variables();
    const std::size_t total = configuration_count(vars, cap);
    CompiledNet compiled(net);
    std::vector<double> values(total);
    std::vector<std::size_t> config(vars.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
        double p = 1.0;
        for (std::size_t i = 0; i < vars.size() && p != 0.0; ++i) p *= compiled.prob(i, config);
        values[k] = p;
        // Odometer increment, last variable fastest.
        for (std::size_t i = vars.size(); i-- > 0;) {
            if (++config[i] < vars[i].cardinality()) break;
            config[i] = 0;
        }
    }
    return Factor(std::move(vars), std::move(values));
}

Factor query(const DiscreteBayesNet& net, const std::vector<std::string>& targets,
             const Assignment& evidence, std::size_t cap) {
    if (targets.empty()) throw PreconditionError("query needs at least one target");
    std::set<std::string> seen;
    for (const auto& t : targets) {
        net.variable(t);
        if (!seen.insert(t).second) throw PreconditionError("target '" + t + "' repeated");
        if (evidence.count(t)) throw PreconditionError("target '" + t + "' is also evidence");
    }
    std::vector<std::string> keep = targets;
    for (const auto& [name, label] : evidence) {
        net.variable(name).state_index(label);
        keep.push_back(name);
    }
    Factor f = condition(marginal(joint(net, cap), keep), evidence);
    return reorder(f, targets);
}

Dataset forward_sample(const DiscreteBayesNet& net, std::size_t n, std::uint64_t seed) {
    validate(net);
    if (n == 0) throw PreconditionError("sample size must be at least 1");
    CompiledNet compiled(net);
    Dataset data{net.variables(), {}};
    const std::size_t k = data.variables.size();
    data.cells.resize(n * k);

    std::mt19937_64 gen(seed);
    const auto& order = net.dag().topological_indices();
    std::vector<std::size_t> config(k, 0);
    for (std::size_t row = 0; row < n; ++row) {
        for (auto i : order) {
            const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            const double* probs = &compiled.table[i][compiled.row_of(i, config) * compiled.card[i]];
            std::size_t state = compiled.card[i];
            double cumulative = 0.0;
            for (std::size_t s = 0; s < compiled.card[i]; ++s) {
                cumulative += probs[s];
                if (u < cumulative) {
                    state = s;
                    break;
                }
            }
            if (state == compiled.card[i]) {
                state = compiled.card[i] - 1;
                while (state > 0 && probs[state] == 0.0) --state;
            }
            config[i] = state;
        }
        for (std::size_t c = 0; c < k; ++c) data.cells[row * k + c] = static_cast<std::uint32_t>(config[c]);
    }
    return data;
}

Factor empirical_joint(const Dataset& data) {
    if (data.variables.empty() || data.rows() == 0) throw EmptyDataset("dataset has no rows");
    if (data.cells.size() % data.columns() != 0)
        throw PreconditionError("dataset cells do not fill whole rows");
    Factor f = Factor::zeros(data.variables);
    std::vector<std::size_t> config(data.columns());
    const double weight = 1.0 / static_cast<double>(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.columns(); ++c) {
            config[c] = data.at(r, c);
            if (config[c] >= data.variables[c].cardinality())
                throw PreconditionError("dataset cell out of range for '" + data.variables[c].name + "'");
        }
        f.mutable_values()[f.flat_index(config)] += weight;
    }
    return f;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const Dataset& data) {
    std::string line;
    for (std::size_t c = 0; c < data.columns(); ++c) {
        if (c) line += ',';
        line += csv_field(data.variables[c].name);
    }
    out << line << '\n';
    std::vector<std::vector<std::string>> labels;
    for (const auto& v : data.variables) {
        std::vector<std::string> l;
        for (const auto& s : v.states) l.push_back(csv_field(s));
        labels.push_back(std::move(l));
    }
    for (std::size_t r = 0; r < data.rows(); ++r) {
        line.clear();
        for (std::size_t c = 0; c < data.columns(); ++c) {
            if (c) line += ',';
            line += labels[c][data.at(r, c)];
        }
        line += '\n';
        out << line;
    }
}

}  // namespace confound
