#include <algorithm>
#include <cmath>

#include "confound/errors.hpp"
#include "confound/latent.hpp"

namespace confound {

namespace {

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(std::string(what) + " must lie in [0,1]");
}

void require_correlation(double r, const char* what) {
    if (!(r >= -1.0 && r <= 1.0))
        throw DomainError(std::string(what) + " must lie in [-1,1]");
}

}  // namespace

CommonCauseDecomposition decompose_common_cause(double p_x_given_y, double p_x_given_yprime,
                                                double endpoint_lo, double endpoint_hi,
                                                Orientation orientation) {
    require_probability(p_x_given_y, "p(x|y)");
    require_probability(p_x_given_yprime, "p(x|y')");
    require_probability(endpoint_lo, "lower endpoint");
    require_probability(endpoint_hi, "upper endpoint");

    const double lo_in = std::min(p_x_given_y, p_x_given_yprime);
    const double hi_in = std::max(p_x_given_y, p_x_given_yprime);

    CommonCauseDecomposition d;
    d.p_x_given_y = p_x_given_y;
    d.p_x_given_yprime = p_x_given_yprime;
    const bool t_high = orientation == Orientation::t_high;
    d.p_x_given_t = t_high ? endpoint_hi : endpoint_lo;
    d.p_x_given_tprime = t_high ? endpoint_lo : endpoint_hi;

    if (endpoint_lo == endpoint_hi) {
        if (lo_in != hi_in)
            throw DegenerateEndpoints("endpoints coincide but p(x|y) and p(x|y') differ");
        if (lo_in != endpoint_lo)
            throw InfeasibleEndpoints("endpoints do not bracket p(x|y) and p(x|y')");
        d.p_t_given_y = d.p_t_given_yprime = 0.5;
        return d;
    }
    if (!(endpoint_lo <= lo_in && hi_in <= endpoint_hi))
        throw InfeasibleEndpoints("endpoints [" + std::to_string(endpoint_lo) + ", " +
                                  std::to_string(endpoint_hi) + "] do not bracket p(x|y) = " +
                                  std::to_string(p_x_given_y) + " and p(x|y') = " +
                                  std::to_string(p_x_given_yprime));

    const double span = d.p_x_given_t - d.p_x_given_tprime;
    d.p_t_given_y = (p_x_given_y - d.p_x_given_tprime) / span;
    d.p_t_given_yprime = (p_x_given_yprime - d.p_x_given_tprime) / span;
    return d;
}

CommonCauseDecomposition decompose_common_cause_auto(double p_x_given_y, double p_x_given_yprime,
                                                     double margin, Orientation orientation) {
    if (!(margin >= 0.0)) throw DomainError("margin must be nonnegative");
    require_probability(p_x_given_y, "p(x|y)");
    require_probability(p_x_given_yprime, "p(x|y')");
    const double lo = std::max(0.0, std::min(p_x_given_y, p_x_given_yprime) - margin);
    const double hi = std::min(1.0, std::max(p_x_given_y, p_x_given_yprime) + margin);
    return decompose_common_cause(p_x_given_y, p_x_given_yprime, lo, hi, orientation);
}

double IdentityResiduals::max_abs() const {
    return std::max({std::abs(reconstruction_y), std::abs(reconstruction_yprime), std::abs(ratio_y),
                     std::abs(ratio_yprime)});
}

IdentityResiduals identity_residuals(const CommonCauseDecomposition& d) {
    auto recon = [&](double p_x, double w) {
        return (1.0 - w) * d.p_x_given_tprime + w * d.p_x_given_t - p_x;
    };
    auto ratio = [&](double p_x, double w) {
        return w * (d.p_x_given_t - p_x) - (1.0 - w) * (p_x - d.p_x_given_tprime);
    };
    return {recon(d.p_x_given_y, d.p_t_given_y), recon(d.p_x_given_yprime, d.p_t_given_yprime),
            ratio(d.p_x_given_y, d.p_t_given_y), ratio(d.p_x_given_yprime, d.p_t_given_yprime)};
}

Interval third_correlation_interval(double r_ac, double r_bc) {
    require_correlation(r_ac, "r_ac");
    require_correlation(r_bc, "r_bc");
    const double center = r_ac * r_bc;
    const double radius = std::sqrt(std::max(0.0, (1.0 - r_ac * r_ac) * (1.0 - r_bc * r_bc)));
    return {std::clamp(center - radius, -1.0, 1.0), std::clamp(center + radius, -1.0, 1.0)};
}

bool correlation_feasible(double r_ab, double r_ac, double r_bc) {
    require_correlation(r_ab, "r_ab");
    require_correlation(r_ac, "r_ac");
    require_correlation(r_bc, "r_bc");
    const double lhs = r_ac * r_ac + r_bc * r_bc + r_ab * r_ab;
    const double rhs = 1.0 + 2.0 * r_ab * r_ac * r_bc;
    return lhs <= rhs + tol::kArithmetic;
}

std::string_view to_string(Interaction i) {
    switch (i) {
        case Interaction::monotonic: return "monotonic";
        case Interaction::explaining_away: return "explaining_away";
        case Interaction::none: return "none";
        case Interaction::mixed: return "mixed";
    }
    return "?";
}

double interaction_delta(const DiscreteBayesNet& net, const std::string& u, const std::string& w,
                         const std::string& x) {
    const auto& parents = net.dag().parents(x);
    auto is_parent = [&](const std::string& v) {
        return std::find(parents.begin(), parents.end(), v) != parents.end();
    };
    if (u == w || !is_parent(u) || !is_parent(w))
        throw StructureError("'" + u + "' and '" + w + "' must be distinct parents of '" + x + "'");
    for (const auto& v : {u, w, x})
        if (net.variable(v).cardinality() != 2)
            throw PreconditionError("interaction classification needs binary '" + v + "'");

    const auto& one_u = net.variable(u).states[1];
    const auto& zero_u = net.variable(u).states[0];
    const auto& one_x = net.variable(x).states[1];
    Factor given_u1 = query(net, {w}, {{x, one_x}, {u, one_u}});
    Factor given_u0 = query(net, {w}, {{x, one_x}, {u, zero_u}});
    return given_u1.values()[1] - given_u0.values()[1];
}

Interaction classify_interaction(const DiscreteBayesNet& net, const std::string& u,
                                 const std::string& w, const std::string& x) {
    const double delta = interaction_delta(net, u, w, x);
    if (delta < -tol::kDecision) return Interaction::explaining_away;
    if (delta > tol::kDecision) return Interaction::monotonic;
    return Interaction::none;
}

}  // namespace confound
