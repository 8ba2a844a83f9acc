#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace confound {

/// A discrete variable with ordered, unique state labels (at least two).
struct Variable {
    std::string name;
    std::vector<std::string> states;

    std::size_t cardinality() const noexcept { return states.size(); }
    /// Throws UnknownVariable if `label` is not a state of this variable.
    std::size_t state_index(const std::string& label) const;

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Variable name -> state label.
using Assignment = std::map<std::string, std::string>;

/// Nonnegative table over an ordered scope.
///
/// Values are row-major with the first scope variable varying slowest.
class Factor {
public:
    Factor() = default;
    Factor(std::vector<Variable> scope, std::vector<double> values);

    static Factor zeros(std::vector<Variable> scope);

    const std::vector<Variable>& scope() const noexcept { return scope_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& mutable_values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool has(const std::string& name) const;
    std::size_t position(const std::string& name) const;  // throws UnknownVariable
    const Variable& variable(const std::string& name) const { return scope_[position(name)]; }

    std::size_t flat_index(std::span<const std::size_t> config) const;
    void decode(std::size_t flat, std::vector<std::size_t>& config) const;

    double at(std::span<const std::size_t> config) const { return values_[flat_index(config)]; }
    /// Value at a full assignment of the scope (extra entries are ignored).
    double operator()(const Assignment& a) const;

    double sum() const;
    /// Divides by the total mass; throws ZeroProbabilityEvidence on zero mass.
    Factor normalized() const;

private:
    std::vector<Variable> scope_;
    std::vector<std::size_t> strides_;
    std::vector<double> values_;
};

/// Configuration count of a scope; throws SizeCapExceeded when above `cap`.
std::size_t configuration_count(std::span<const Variable> scope, std::size_t cap);

/// Sums out everything not in `keep`. Result scope follows the order of `f`.
Factor marginal(const Factor& f, const std::vector<std::string>& keep);

/// Restricts to `evidence` and renormalizes. The evidence variables leave the scope.
/// Throws ZeroProbabilityEvidence when the evidence has zero mass.
Factor condition(const Factor& f, const Assignment& evidence);

/// p(targets | given) laid out over `given` followed by `targets`; every given
/// slice with positive mass sums to one, zero-mass slices stay zero.
Factor conditional_table(const Factor& f, const std::vector<std::string>& targets,
                         const std::vector<std::string>& given);

/// Reorders the scope of `f` to `order` (a permutation of its variable names).
Factor reorder(const Factor& f, const std::vector<std::string>& order);

/// Largest absolute entrywise difference; scopes must match by name (any order).
double max_abs_difference(const Factor& a, const Factor& b);

/// Total-variation distance between two distributions over the same scope.
double total_variation(const Factor& a, const Factor& b);

}  // namespace confound
