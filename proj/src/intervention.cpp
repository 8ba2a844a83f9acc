#include "confound/intervention.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "confound/errors.hpp"

namespace confound {

Factor interventional_distribution(const DiscreteBayesNet& net, const InterventionQuery& q,
                                   std::size_t cap) {
    validate(net);
    const Dag& dag = net.dag();
    const std::size_t target = dag.contains(q.target)
                                   ? dag.index_of(q.target)
                                   : throw UnknownVariable("unknown variable '" + q.target + "'");
    if (q.do_assignments.count(q.target))
        throw PreconditionError("target '" + q.target + "' is also intervened on");

    const auto vars = net.variables();
    const std::size_t n = vars.size();
    std::vector<long> clamp(n, -1);
    for (const auto& [name, label] : q.do_assignments) {
        if (!dag.contains(name)) throw UnknownVariable("unknown variable '" + name + "'");
        auto i = dag.index_of(name);
        clamp[i] = static_cast<long>(vars[i].state_index(label));
    }

    std::vector<Variable> free_vars;
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < n; ++i)
        if (clamp[i] < 0) {
            free_vars.push_back(vars[i]);
            free_idx.push_back(i);
        }
    const std::size_t total = configuration_count(free_vars, cap);

    std::vector<std::vector<double>> tables(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& row : net.cpt(vars[i].name).table)
            tables[i].insert(tables[i].end(), row.begin(), row.end());

    std::vector<double> out(vars[target].cardinality(), 0.0);
    std::vector<std::size_t> config(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (clamp[i] >= 0) config[i] = static_cast<std::size_t>(clamp[i]);

    for (std::size_t k = 0; k < total; ++k) {
        double p = 1.0;
        for (std::size_t i = 0; i < n && p != 0.0; ++i) {
            if (clamp[i] >= 0) continue;  // factor removed by the intervention
            std::size_t row = 0;
            for (auto pi : dag.parent_indices(i)) row = row * vars[pi].cardinality() + config[pi];
            p *= tables[i][row * vars[i].cardinality() + config[i]];
        }
        out[config[target]] += p;
        for (std::size_t j = free_idx.size(); j-- > 0;) {
            auto i = free_idx[j];
            if (++config[i] < vars[i].cardinality()) break;
            config[i] = 0;
        }
    }
    return Factor({vars[target]}, std::move(out)).normalized();
}

std::vector<double> default_outcome_values(const Variable& outcome) {
    std::vector<double> values;
    for (const auto& label : outcome.states) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), v);
        if (ec != std::errc() || ptr != label.data() + label.size() || !std::isfinite(v)) {
            values.clear();
            break;
        }
        values.push_back(v);
    }
    if (values.size() == outcome.states.size()) return values;
    values.clear();
    for (std::size_t i = 0; i < outcome.states.size(); ++i) values.push_back(static_cast<double>(i));
    return values;
}

namespace {

void check_pair(const DiscreteBayesNet& net, const std::string& treatment, const std::string& outcome) {
    net.variable(treatment);
    net.variable(outcome);
    if (treatment == outcome) throw PreconditionError("treatment and outcome must differ");
}

void check_adjustment(const DiscreteBayesNet& net, const std::string& treatment,
                      const std::string& outcome, const NodeSet& s) {
    std::set<std::string> seen;
    for (const auto& v : s) {
        net.variable(v);
        if (v == treatment || v == outcome)
            throw PreconditionError("adjustment set must exclude treatment and outcome");
        if (!seen.insert(v).second) throw PreconditionError("'" + v + "' repeated in adjustment set");
    }
}

std::vector<double> resolve_values(const DiscreteBayesNet& net, const std::string& outcome,
                                   const std::optional<std::vector<double>>& given) {
    const Variable& y = net.variable(outcome);
    if (!given) return default_outcome_values(y);
    if (given->size() != y.cardinality())
        throw PreconditionError("outcome value map needs one value per state of '" + outcome + "'");
    return *given;
}

std::string describe(const Factor& f, const std::vector<std::size_t>& config, std::size_t count) {
    std::string out;
    for (std::size_t i = 0; i < count; ++i)
        out += (i ? ", " : "") + f.scope()[i].name + "=" + f.scope()[i].states[config[i]];
    return out;
}

}  // namespace

Factor interventional_table(const DiscreteBayesNet& net, const std::string& treatment,
                            const std::string& outcome) {
    check_pair(net, treatment, outcome);
    const Variable& z = net.variable(treatment);
    const Variable& y = net.variable(outcome);
    Factor table = Factor::zeros({z, y});
    for (std::size_t level = 0; level < z.cardinality(); ++level) {
        Factor d = interventional_distribution(net, {outcome, {{treatment, z.states[level]}}});
        for (std::size_t s = 0; s < y.cardinality(); ++s)
            table.mutable_values()[level * y.cardinality() + s] = d.values()[s];
    }
    return table;
}

Factor adjusted_estimate(const DiscreteBayesNet& net, const std::string& treatment,
                         const std::string& outcome, const NodeSet& adjustment) {
    check_pair(net, treatment, outcome);
    check_adjustment(net, treatment, outcome, adjustment);

    std::vector<std::string> order = adjustment;
    order.push_back(treatment);
    order.push_back(outcome);
    Factor m = reorder(marginal(joint(net), order), order);

    const Variable& z = net.variable(treatment);
    const Variable& y = net.variable(outcome);
    const std::size_t zc = z.cardinality(), yc = y.cardinality();
    const std::size_t block = zc * yc;
    Factor out = Factor::zeros({z, y});
    std::vector<std::size_t> config;

    for (std::size_t start = 0; start < m.size(); start += block) {
        double p_s = 0.0;
        for (std::size_t j = 0; j < block; ++j) p_s += m.values()[start + j];
        if (!(p_s > 0.0)) continue;
        for (std::size_t level = 0; level < zc; ++level) {
            const double* row = &m.values()[start + level * yc];
            double p_zs = 0.0;
            for (std::size_t s = 0; s < yc; ++s) p_zs += row[s];
            if (!(p_zs > 0.0)) {
                m.decode(start, config);
                std::string cell = describe(m, config, adjustment.size());
                throw PositivityViolation("p(" + treatment + "=" + z.states[level] +
                                          (cell.empty() ? "" : ", " + cell) +
                                          ") = 0 while the stratum has positive probability");
            }
            for (std::size_t s = 0; s < yc; ++s)
                out.mutable_values()[level * yc + s] += row[s] / p_zs * p_s;
        }
    }
    return out;
}

Factor unadjusted_estimate(const DiscreteBayesNet& net, const std::string& treatment,
                           const std::string& outcome) {
    check_pair(net, treatment, outcome);
    Factor m = reorder(marginal(joint(net), {treatment, outcome}), {treatment, outcome});
    const Variable& z = net.variable(treatment);
    const std::size_t yc = net.variable(outcome).cardinality();
    for (std::size_t level = 0; level < z.cardinality(); ++level) {
        double p_z = 0.0;
        for (std::size_t s = 0; s < yc; ++s) p_z += m.values()[level * yc + s];
        if (!(p_z > 0.0))
            throw ZeroProbabilityEvidence("p(" + treatment + "=" + z.states[level] + ") = 0");
        for (std::size_t s = 0; s < yc; ++s) m.mutable_values()[level * yc + s] /= p_z;
    }
    return m;
}

double expected_outcome(const Factor& table, std::size_t level, const std::vector<double>& values) {
    const std::size_t yc = table.scope().at(1).cardinality();
    double e = 0.0;
    for (std::size_t s = 0; s < yc; ++s) e += values.at(s) * table.values()[level * yc + s];
    return e;
}

double ace(const DiscreteBayesNet& net, const std::string& treatment, const std::string& outcome,
           const std::string& level1, const std::string& level0,
           const std::optional<std::vector<double>>& outcome_values) {
    check_pair(net, treatment, outcome);
    const auto values = resolve_values(net, outcome, outcome_values);
    const Variable& z = net.variable(treatment);
    auto expect = [&](const std::string& level) {
        Factor d = interventional_distribution(net, {outcome, {{treatment, level}}});
        double e = 0.0;
        for (std::size_t s = 0; s < values.size(); ++s) e += values[s] * d.values()[s];
        return e;
    };
    z.state_index(level1);
    z.state_index(level0);
    return expect(level1) - expect(level0);
}

double conditioning_bias(const DiscreteBayesNet& net, const std::string& treatment,
                         const std::string& outcome, const std::string& covariate,
                         const std::string& level1, const std::string& level0,
                         const std::optional<std::vector<double>>& outcome_values) {
    check_pair(net, treatment, outcome);
    check_adjustment(net, treatment, outcome, {covariate});
    const auto values = resolve_values(net, outcome, outcome_values);
    const Variable& zv = net.variable(treatment);
    const std::size_t z1 = zv.state_index(level1), z0 = zv.state_index(level0);

    Factor m = reorder(marginal(joint(net), {treatment, covariate, outcome}),
                       {treatment, covariate, outcome});
    const std::size_t zc = zv.cardinality();
    const std::size_t xc = net.variable(covariate).cardinality();
    const std::size_t yc = values.size();
    auto p = [&](std::size_t z, std::size_t x, std::size_t y) { return m.values()[(z * xc + x) * yc + y]; };

    std::vector<double> p_x(xc, 0.0), p_z(zc, 0.0);
    std::vector<std::vector<double>> p_zx(zc, std::vector<double>(xc, 0.0));
    for (std::size_t z = 0; z < zc; ++z)
        for (std::size_t x = 0; x < xc; ++x)
            for (std::size_t y = 0; y < yc; ++y) {
                p_zx[z][x] += p(z, x, y);
                p_x[x] += p(z, x, y);
                p_z[z] += p(z, x, y);
            }

    auto level_term = [&](std::size_t z) {
        if (!(p_z[z] > 0.0))
            throw PositivityViolation("p(" + treatment + "=" + zv.states[z] + ") = 0");
        double term = 0.0;
        for (std::size_t x = 0; x < xc; ++x) {
            if (!(p_x[x] > 0.0)) continue;
            if (!(p_zx[z][x] > 0.0))
                throw PositivityViolation("p(" + treatment + "=" + zv.states[z] + ", " + covariate +
                                          "=" + net.variable(covariate).states[x] +
                                          ") = 0 while the stratum has positive probability");
            const double gap = p_x[x] - p_zx[z][x] / p_z[z];
            for (std::size_t y = 0; y < yc; ++y) term += values[y] * (p(z, x, y) / p_zx[z][x]) * gap;
        }
        return term;
    };
    return level_term(z1) - level_term(z0);
}

namespace {

struct Candidate {
    NodeSet members;  // declaration order
    NodeSet sorted;
    double cost;
};

std::vector<Candidate> ranked_subsets(const DiscreteBayesNet& net, const NodeSet& base,
                                      SizeMetric metric) {
    std::vector<Candidate> out;
    const std::size_t n = base.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Candidate c;
        c.cost = metric == SizeMetric::sum ? 0.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) {
                c.members.push_back(base[i]);
                const double card = static_cast<double>(net.variable(base[i]).cardinality());
                c.cost = metric == SizeMetric::sum ? c.cost + card : c.cost * card;
            }
        c.sorted = c.members;
        std::sort(c.sorted.begin(), c.sorted.end());
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.cost != b.cost) return a.cost < b.cost;
        return a.sorted < b.sorted;
    });
    return out;
}

NodeSet minus(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    for (const auto& x : a)
        if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
    return out;
}

// max |p(t | full) - p(t | sub)| over configurations with p(full) > 0.
double conditional_gap(const Factor& m, const NodeSet& targets, const NodeSet& full, const NodeSet& sub) {
    Factor f = conditional_table(m, targets, full);
    Factor s = conditional_table(m, targets, sub);
    Factor mass = reorder(marginal(m, full), full);
    std::vector<std::size_t> sub_pos;
    for (const auto& v : s.scope()) sub_pos.push_back(f.position(v.name));

    double worst = 0.0;
    std::vector<std::size_t> config, sub_config(sub_pos.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f.decode(k, config);
        std::span<const std::size_t> given(config.data(), full.size());
        if (!(mass.at(given) > 0.0)) continue;
        for (std::size_t j = 0; j < sub_pos.size(); ++j) sub_config[j] = config[sub_pos[j]];
        worst = std::max(worst, std::abs(f.values()[k] - s.at(sub_config)));
    }
    return worst;
}

NodeSet with(NodeSet a, const NodeSet& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

Selection select_sufficient_confounders(const DiscreteBayesNet& net, const std::string& treatment,
                                        const std::string& outcome, const SelectionOptions& options) {
    validate(net);
    check_pair(net, treatment, outcome);
    const Dag& dag = net.dag();
    const NodeSet post = dag.descendants(treatment);

    Selection result;
    for (const auto& v : dag.nodes())
        if (v != treatment && v != outcome && std::find(post.begin(), post.end(), v) == post.end())
            result.pool.push_back(v);
    if (result.pool.size() > tol::kMaxSelectionPool)
        throw SizeCapExceeded("candidate pool of " + std::to_string(result.pool.size()) +
                              " variables exceeds the subset-enumeration cap of " +
                              std::to_string(tol::kMaxSelectionPool));

    const bool graphical = options.mode == SelectionMode::graphical;
    Factor m;
    if (!graphical) {
        NodeSet keep = with(with({treatment}, result.pool), {outcome});
        m = marginal(joint(net), keep);
    }

    // Stage 1: P(Y | Z, pool) = P(Y | Z, X').
    for (const auto& c : ranked_subsets(net, result.pool, options.metric)) {
        AuditEntry e{1, c.members, c.cost, false};
        const NodeSet dropped = minus(result.pool, c.members);
        if (graphical) {
            e.accepted = dropped.empty() || d_separated(dag, {outcome}, dropped, with({treatment}, c.members));
        } else {
            e.discrepancy = conditional_gap(m, {outcome}, with({treatment}, result.pool),
                                            with({treatment}, c.members));
            e.accepted = e.discrepancy <= options.tolerance;
        }
        result.audit.push_back(e);
        if (e.accepted) {
            result.stage1 = c.members;
            break;
        }
    }

    // Stage 2: P(Z | X') = P(Z | X).
    for (const auto& c : ranked_subsets(net, result.stage1, options.metric)) {
        AuditEntry e{2, c.members, c.cost, false};
        const NodeSet dropped = minus(result.stage1, c.members);
        if (graphical) {
            e.accepted = dropped.empty() || d_separated(dag, {treatment}, dropped, c.members);
        } else {
            e.discrepancy = conditional_gap(m, {treatment}, result.stage1, c.members);
            e.accepted = e.discrepancy <= options.tolerance;
        }
        result.audit.push_back(e);
        if (e.accepted) {
            result.chosen = c.members;
            break;
        }
    }
    return result;
}

EffectReport effect_report(const DiscreteBayesNet& net, const std::string& treatment,
                           const std::string& outcome, const std::vector<NodeSet>& covariate_sets,
                           std::optional<std::string> level1, std::optional<std::string> level0) {
    check_pair(net, treatment, outcome);
    const Variable& z = net.variable(treatment);
    EffectReport r;
    r.treatment = treatment;
    r.outcome = outcome;
    r.level1 = level1.value_or(z.states.back());
    r.level0 = level0.value_or(z.states.front());
    const std::size_t l1 = z.state_index(r.level1), l0 = z.state_index(r.level0);
    r.outcome_values = default_outcome_values(net.variable(outcome));

    r.true_dist = interventional_table(net, treatment, outcome);
    r.unadjusted_dist = unadjusted_estimate(net, treatment, outcome);

    auto ace_of = [&](const Factor& t) {
        return expected_outcome(t, l1, r.outcome_values) - expected_outcome(t, l0, r.outcome_values);
    };
    auto level_errors = [&](const Factor& t) {
        std::vector<double> errs;
        for (std::size_t level = 0; level < z.cardinality(); ++level)
            errs.push_back(expected_outcome(t, level, r.outcome_values) -
                           expected_outcome(r.true_dist, level, r.outcome_values));
        return errs;
    };

    r.ace_true = ace_of(r.true_dist);
    r.ace_unadjusted = ace_of(r.unadjusted_dist);
    r.unadjusted_level_errors = level_errors(r.unadjusted_dist);
    r.unadjusted_ace_error = r.ace_unadjusted - r.ace_true;

    for (const auto& s : covariate_sets) {
        AdjustedEntry e;
        e.set = s;
        e.dist = adjusted_estimate(net, treatment, outcome, s);
        e.ace = ace_of(e.dist);
        e.level_errors = level_errors(e.dist);
        e.ace_error = e.ace - r.ace_true;
        r.adjusted.push_back(std::move(e));
    }

    const std::size_t yc = net.variable(outcome).cardinality();
    auto check_rows = [&](const Factor& t, const char* what) {
        for (std::size_t level = 0; level < z.cardinality(); ++level) {
            double total = 0.0;
            for (std::size_t s = 0; s < yc; ++s) total += t.values()[level * yc + s];
            if (std::abs(total - 1.0) > tol::kRowSum)
                throw std::logic_error(std::string(what) + " row is not normalized");
        }
    };
    check_rows(r.true_dist, "interventional");
    check_rows(r.unadjusted_dist, "unadjusted");
    for (const auto& e : r.adjusted) check_rows(e.dist, "adjusted");
    return r;
}

}  // namespace confound
