#include "confound/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "confound/errors.hpp"

namespace confound {

std::size_t Variable::state_index(const std::string& label) const {
    auto it = std::find(states.begin(), states.end(), label);
    if (it == states.end())
        throw UnknownVariable("variable '" + name + "' has no state '" + label + "'");
    return static_cast<std::size_t>(it - states.begin());
}

std::size_t configuration_count(std::span<const Variable> scope, std::size_t cap) {
    std::size_t n = 1;
    for (const auto& v : scope) {
        if (v.cardinality() == 0) return 0;
        if (n > cap / v.cardinality())
            throw SizeCapExceeded("configuration count exceeds cap of " + std::to_string(cap));
        n *= v.cardinality();
    }
    if (n > cap)
        throw SizeCapExceeded("configuration count exceeds cap of " + std::to_string(cap));
    return n;
}

Factor::Factor(std::vector<Variable> scope, std::vector<double> values)
    : scope_(std::move(scope)), values_(std::move(values)) {
    strides_.assign(scope_.size(), 1);
    std::size_t n = 1;
    for (std::size_t i = scope_.size(); i-- > 0;) {
        strides_[i] = n;
        n *= scope_[i].cardinality();
    }
    if (values_.size() != n)
        throw PreconditionError("factor has " + std::to_string(values_.size()) +
                                " values, scope needs " + std::to_string(n));
    for (std::size_t i = 0; i < scope_.size(); ++i)
        for (std::size_t j = i + 1; j < scope_.size(); ++j)
            if (scope_[i].name == scope_[j].name)
                throw PreconditionError("variable '" + scope_[i].name + "' repeated in scope");
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw PreconditionError("factor values must be finite and nonnegative");
}

Factor Factor::zeros(std::vector<Variable> scope) {
    std::size_t n = 1;
    for (const auto& v : scope) n *= v.cardinality();
    return Factor(std::move(scope), std::vector<double>(n, 0.0));
}

bool Factor::has(const std::string& name) const {
    return std::any_of(scope_.begin(), scope_.end(),
                       [&](const Variable& v) { return v.name == name; });
}

std::size_t Factor::position(const std::string& name) const {
    for (std::size_t i = 0; i < scope_.size(); ++i)
        if (scope_[i].name == name) return i;
    throw UnknownVariable("variable '" + name + "' not in factor scope");
}

std::size_t Factor::flat_index(std::span<const std::size_t> config) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < strides_.size(); ++i) flat += config[i] * strides_[i];
    return flat;
}

void Factor::decode(std::size_t flat, std::vector<std::size_t>& config) const {
    config.resize(scope_.size());
    for (std::size_t i = 0; i < scope_.size(); ++i) {
        config[i] = flat / strides_[i];
        flat %= strides_[i];
    }
}

double Factor::operator()(const Assignment& a) const {
    std::vector<std::size_t> config(scope_.size());
    for (std::size_t i = 0; i < scope_.size(); ++i) {
        auto it = a.find(scope_[i].name);
        if (it == a.end())
            throw PreconditionError("assignment missing variable '" + scope_[i].name + "'");
        config[i] = scope_[i].state_index(it->second);
    }
    return at(config);
}

double Factor::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Factor Factor::normalized() const {
    double total = sum();
    if (!(total > 0.0)) throw ZeroProbabilityEvidence("cannot normalize a zero-mass factor");
    Factor out = *this;
    for (auto& v : out.values_) v /= total;
    return out;
}

namespace {

// Position of each `names` entry inside f's scope.
std::vector<std::size_t> positions(const Factor& f, const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(f.position(n));
    return out;
}

}  // namespace

Factor marginal(const Factor& f, const std::vector<std::string>& keep) {
    std::vector<bool> kept(f.scope().size(), false);
    for (auto p : positions(f, keep)) kept[p] = true;
    std::vector<Variable> scope;
    std::vector<std::size_t> src;
    for (std::size_t i = 0; i < f.scope().size(); ++i)
        if (kept[i]) {
            scope.push_back(f.scope()[i]);
            src.push_back(i);
        }
    Factor out = Factor::zeros(scope);
    std::vector<std::size_t> config, sub(src.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f.decode(k, config);
        for (std::size_t j = 0; j < src.size(); ++j) sub[j] = config[src[j]];
        out.mutable_values()[out.flat_index(sub)] += f.values()[k];
    }
    return out;
}

Factor condition(const Factor& f, const Assignment& evidence) {
    std::vector<long> fixed(f.scope().size(), -1);
    for (const auto& [name, label] : evidence) {
        auto p = f.position(name);
        fixed[p] = static_cast<long>(f.scope()[p].state_index(label));
    }
    std::vector<Variable> scope;
    std::vector<std::size_t> src;
    for (std::size_t i = 0; i < f.scope().size(); ++i)
        if (fixed[i] < 0) {
            scope.push_back(f.scope()[i]);
            src.push_back(i);
        }
    Factor out = Factor::zeros(scope);
    std::vector<std::size_t> config, sub(src.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f.decode(k, config);
        bool match = true;
        for (std::size_t i = 0; i < config.size() && match; ++i)
            if (fixed[i] >= 0 && config[i] != static_cast<std::size_t>(fixed[i])) match = false;
        if (!match) continue;
        for (std::size_t j = 0; j < src.size(); ++j) sub[j] = config[src[j]];
        out.mutable_values()[out.flat_index(sub)] += f.values()[k];
    }
    if (!(out.sum() > 0.0)) {
        std::string desc;
        for (const auto& [name, label] : evidence)
            desc += (desc.empty() ? "" : ", ") + name + "=" + label;
        throw ZeroProbabilityEvidence("evidence {" + desc + "} has probability zero");
    }
    return out.normalized();
}

Factor conditional_table(const Factor& f, const std::vector<std::string>& targets,
                         const std::vector<std::string>& given) {
    std::vector<std::string> order = given;
    order.insert(order.end(), targets.begin(), targets.end());
    Factor joint = reorder(marginal(f, order), order);
    std::size_t block = 1;
    for (std::size_t i = given.size(); i < order.size(); ++i)
        block *= joint.scope()[i].cardinality();
    auto& v = joint.mutable_values();
    for (std::size_t start = 0; start < v.size(); start += block) {
        double mass = 0.0;
        for (std::size_t j = 0; j < block; ++j) mass += v[start + j];
        if (mass > 0.0)
            for (std::size_t j = 0; j < block; ++j) v[start + j] /= mass;
    }
    return joint;
}

Factor reorder(const Factor& f, const std::vector<std::string>& order) {
    if (order.size() != f.scope().size())
        throw PreconditionError("reorder needs a permutation of the factor scope");
    auto src = positions(f, order);
    std::vector<Variable> scope;
    for (auto p : src) scope.push_back(f.scope()[p]);
    Factor out = Factor::zeros(scope);
    std::vector<std::size_t> config, sub(src.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f.decode(k, config);
        for (std::size_t j = 0; j < src.size(); ++j) sub[j] = config[src[j]];
        out.mutable_values()[out.flat_index(sub)] = f.values()[k];
    }
    return out;
}

double max_abs_difference(const Factor& a, const Factor& b) {
    std::vector<std::string> names;
    for (const auto& v : a.scope()) names.push_back(v.name);
    Factor bb = reorder(b, names);
    if (a.size() != bb.size()) throw PreconditionError("factor shapes differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.values()[i] - bb.values()[i]));
    return worst;
}

double total_variation(const Factor& a, const Factor& b) {
    std::vector<std::string> names;
    for (const auto& v : a.scope()) names.push_back(v.name);
    Factor bb = reorder(b, names);
    if (a.size() != bb.size()) throw PreconditionError("factor shapes differ");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a.values()[i] - bb.values()[i]);
    return 0.5 * total;
}

}  // namespace confound
