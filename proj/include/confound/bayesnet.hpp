#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "confound/factor.hpp"
#include "confound/graph.hpp"
#include "confound/tolerances.hpp"

namespace confound {

/// Conditional probability table p(child | parents).
///
/// One row per parent configuration (first parent slowest), one column per
/// child state.
struct Cpt {
    std::string child;
    std::vector<std::string> parents;
    std::vector<std::vector<double>> table;

    friend bool operator==(const Cpt&, const Cpt&) = default;
};

class DiscreteBayesNet {
public:
    DiscreteBayesNet() = default;
    /// Stores the parts as given; call validate() (or use from_cpts) before inference.
    DiscreteBayesNet(Dag dag, std::vector<Variable> variables, std::vector<Cpt> cpts);

    /// Builds the Dag from the CPT parent lists, in the order of `variables`,
    /// and validates the result.
    static DiscreteBayesNet from_cpts(std::vector<Variable> variables, std::vector<Cpt> cpts);

    const Dag& dag() const noexcept { return dag_; }
    /// Variables in declaration order.
    std::vector<Variable> variables() const;
    const Variable& variable(const std::string& name) const;
    const Cpt& cpt(const std::string& name) const;
    bool has_variable(const std::string& name) const { return variables_.count(name) != 0; }
    bool has_cpt(const std::string& name) const { return cpts_.count(name) != 0; }
    const std::map<std::string, Variable>& variable_map() const noexcept { return variables_; }
    const std::map<std::string, Cpt>& cpt_map() const noexcept { return cpts_; }

    friend bool operator==(const DiscreteBayesNet&, const DiscreteBayesNet&) = default;

private:
    Dag dag_;
    std::map<std::string, Variable> variables_;
    std::map<std::string, Cpt> cpts_;
};

/// Throws ValidationError whose message starts with the violated invariant.
void validate(const DiscreteBayesNet& net);

/// Full joint p(x) = prod_i p(x_i | pa_i) over the variables in declaration order.
Factor joint(const DiscreteBayesNet& net, std::size_t cap = tol::kDefaultJointCap);

/// p(targets | evidence), scope ordered as `targets`.
Factor query(const DiscreteBayesNet& net, const std::vector<std::string>& targets,
             const Assignment& evidence, std::size_t cap = tol::kDefaultJointCap);

/// Rows of joint assignments stored as state indices, row-major.
struct Dataset {
    std::vector<Variable> variables;
    std::vector<std::uint32_t> cells;

    std::size_t columns() const noexcept { return variables.size(); }
    std::size_t rows() const noexcept { return variables.empty() ? 0 : cells.size() / variables.size(); }
    std::uint32_t at(std::size_t row, std::size_t col) const { return cells[row * columns() + col]; }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Ancestral sampling in topological order.
///
/// The generator is std::mt19937_64 seeded with `seed`. Each node draw takes
/// one 64-bit output g and forms u = (g >> 11) * 2^-53 in [0, 1); the sampled
/// state is the first state k (in declared order) whose cumulative CPT mass
/// exceeds u, falling back to the last state with positive mass when
/// rounding leaves u above the final cumulative sum. Columns follow
/// declaration order.
Dataset forward_sample(const DiscreteBayesNet& net, std::size_t n, std::uint64_t seed);

/// Relative-frequency factor over the dataset's variables.
Factor empirical_joint(const Dataset& data);

/// CSV: header of variable names, one state label per cell, LF endings.
void write_csv(std::ostream& out, const Dataset& data);

}  // namespace confound
