#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <ostream>
#include <thread>

#include "confound/errors.hpp"
#include "confound/format.hpp"
#include "confound/intervention.hpp"
#include "confound/latent.hpp"

namespace confound {

namespace {

double parse_double(std::string_view text, std::string_view context) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw PreconditionError("bad number '" + std::string(text) + "' in '" + std::string(context) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Max-norm gap between p(x | other) and p(x) plus mutual information, from a
// two-way table over (other, x).
struct Dependence {
    double max_gap = 0.0;
    double mutual_information = 0.0;
};

Dependence dependence(const Factor& joint, const std::string& other, const std::string& x) {
    Factor m = reorder(marginal(joint, {other, x}), {other, x});
    const std::size_t oc = m.scope()[0].cardinality(), xc = m.scope()[1].cardinality();
    std::vector<double> p_o(oc, 0.0), p_x(xc, 0.0);
    for (std::size_t o = 0; o < oc; ++o)
        for (std::size_t k = 0; k < xc; ++k) {
            p_o[o] += m.values()[o * xc + k];
            p_x[k] += m.values()[o * xc + k];
        }
    Dependence d;
    for (std::size_t o = 0; o < oc; ++o) {
        if (!(p_o[o] > 0.0)) continue;
        for (std::size_t k = 0; k < xc; ++k) {
            const double p_ox = m.values()[o * xc + k];
            d.max_gap = std::max(d.max_gap, std::abs(p_ox / p_o[o] - p_x[k]));
            if (p_ox > 0.0) d.mutual_information += p_ox * std::log(p_ox / (p_o[o] * p_x[k]));
        }
    }
    d.mutual_information = std::max(0.0, d.mutual_information);
    return d;
}

Interaction scan_interaction(const DiscreteBayesNet& net, const std::string& covariate) {
    const auto& parents = net.dag().parents(covariate);
    auto has = [&](const char* v) { return std::find(parents.begin(), parents.end(), v) != parents.end(); };
    if (has("U") && has("W")) return classify_interaction(net, "U", "W", covariate);
    return Interaction::none;
}

}  // namespace

GridAxis parse_axis(std::string_view spec) {
    auto eq = spec.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw PreconditionError("grid axis '" + std::string(spec) + "' must look like NAME=a:b:step");
    GridAxis axis{std::string(spec.substr(0, eq)), {}};
    auto body = spec.substr(eq + 1);
    if (body.find(':') != std::string_view::npos) {
        auto parts = split(body, ':');
        if (parts.size() != 3)
            throw PreconditionError("range '" + std::string(body) + "' must be a:b:step");
        const double a = parse_double(parts[0], spec);
        const double b = parse_double(parts[1], spec);
        const double step = parse_double(parts[2], spec);
        if (!(step > 0.0) || b < a)
            throw PreconditionError("range '" + std::string(body) + "' needs step > 0 and b >= a");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) axis.values.push_back(a + static_cast<double>(i) * step);
    } else {
        for (auto part : split(body, ',')) axis.values.push_back(parse_double(part, spec));
    }
    return axis;
}

std::string_view to_string(Winner w) {
    switch (w) {
        case Winner::condition: return "condition";
        case Winner::ignore: return "ignore";
        case Winner::tie: return "tie";
        case Winner::failed: return "failed";
    }
    return "?";
}

ScanResult evaluate_cell(const ScenarioParams& sp, const ScanOptions& options) {
    ScanResult r;
    try {
        DiscreteBayesNet net = build_scenario(sp);
        const Factor full = joint(net);
        const auto dzx = dependence(full, options.treatment, options.covariate);
        const auto dxy = dependence(full, options.outcome, options.covariate);
        r.dep_zx = dzx.max_gap;
        r.dep_xy = dxy.max_gap;
        r.mi_zx = dzx.mutual_information;
        r.mi_xy = dxy.mutual_information;

        EffectReport report = effect_report(net, options.treatment, options.outcome, {{options.covariate}});
        const auto& adj = report.adjusted.front();
        r.err_adj_z0 = adj.level_errors.at(0);
        r.err_adj_z1 = adj.level_errors.at(1);
        r.err_unadj_z0 = report.unadjusted_level_errors.at(0);
        r.err_unadj_z1 = report.unadjusted_level_errors.at(1);
        r.err_adj_ace = adj.ace_error;
        r.err_unadj_ace = report.unadjusted_ace_error;
        r.interaction_class = scan_interaction(net, options.covariate);

        const double adj_mag = std::max(std::abs(r.err_adj_z0), std::abs(r.err_adj_z1));
        const double unadj_mag = std::max(std::abs(r.err_unadj_z0), std::abs(r.err_unadj_z1));
        if (adj_mag < unadj_mag - tol::kDecision) r.winner = Winner::condition;
        else if (unadj_mag < adj_mag - tol::kDecision) r.winner = Winner::ignore;
        else r.winner = Winner::tie;
    } catch (const ModelError& e) {
        r = ScanResult{};
        r.winner = Winner::failed;
        r.failure = e.what();
    } catch (const MathError& e) {
        r = ScanResult{};
        r.winner = Winner::failed;
        r.failure = e.what();
    }
    return r;
}

std::vector<ScanResult> bias_scan(const ScenarioParams& base, std::vector<GridAxis> grid,
                                  const ScanOptions& options) {
    const auto schema = template_parameters(base.tmpl);
    std::sort(grid.begin(), grid.end(), [](const GridAxis& a, const GridAxis& b) { return a.name < b.name; });
    std::size_t cells = 1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::find(schema.begin(), schema.end(), grid[i].name) == schema.end())
            throw ValidationError("parameter schema: '" + grid[i].name + "' is not a parameter of " +
                                  std::string(to_string(base.tmpl)));
        if (i > 0 && grid[i].name == grid[i - 1].name)
            throw PreconditionError("grid axis '" + grid[i].name + "' given twice");
        if (grid[i].values.empty()) throw PreconditionError("grid axis '" + grid[i].name + "' is empty");
        cells *= grid[i].values.size();
    }

    std::vector<ScanResult> results(cells);
    auto run = [&](std::size_t cell) {
        ScenarioParams sp = base;
        std::map<std::string, double> point;
        std::size_t rest = cell;
        for (std::size_t i = grid.size(); i-- > 0;) {
            const auto& axis = grid[i];
            const double v = axis.values[rest % axis.values.size()];
            rest /= axis.values.size();
            sp.parameters[axis.name] = v;
            point[axis.name] = v;
        }
        results[cell] = evaluate_cell(sp, options);
        results[cell].grid_point = std::move(point);
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));
    if (threads <= 1) {
        for (std::size_t c = 0; c < cells; ++c) run(c);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < cells; c = next++) run(c);
        });
    for (auto& th : pool) th.join();
    return results;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanResult>& rows, bool with_mi) {
    std::vector<std::string> params;
    if (!rows.empty())
        for (const auto& [name, _] : rows.front().grid_point) params.push_back(name);
    std::string line;
    for (const auto& p : params) line += p + ",";
    line += "dep_zx,dep_xy,interaction_class,err_adj_z0,err_adj_z1,err_unadj_z0,err_unadj_z1,"
            "err_adj_ace,err_unadj_ace,winner";
    if (with_mi) line += ",mi_zx,mi_xy";
    out << line << '\n';

    for (const auto& r : rows) {
        line.clear();
        for (const auto& p : params) line += format_number(r.grid_point.at(p)) + ",";
        const bool failed = r.winner == Winner::failed;
        auto num = [&](double v) { return failed ? std::string("nan") : format_number(v); };
        line += num(r.dep_zx) + "," + num(r.dep_xy) + "," +
                (failed ? std::string("none") : std::string(to_string(r.interaction_class))) + "," +
                num(r.err_adj_z0) + "," + num(r.err_adj_z1) + "," + num(r.err_unadj_z0) + "," +
                num(r.err_unadj_z1) + "," + num(r.err_adj_ace) + "," + num(r.err_unadj_ace) + "," +
                std::string(to_string(r.winner));
        if (with_mi) line += "," + num(r.mi_zx) + "," + num(r.mi_xy);
        out << line << '\n';
    }
}

ScanSummary summarize_scan(const std::vector<ScanResult>& rows) {
    ScanSummary s;
    s.total = rows.size();
    std::vector<double> strengths;
    for (const auto& r : rows) {
        if (r.winner == Winner::failed) {
            ++s.failed;
            continue;
        }
        strengths.push_back(std::min(r.dep_zx, r.dep_xy));
    }
    if (!strengths.empty()) {
        std::sort(strengths.begin(), strengths.end());
        const std::size_t n = strengths.size();
        s.strength_threshold = n % 2 ? strengths[n / 2] : 0.5 * (strengths[n / 2 - 1] + strengths[n / 2]);
    }

    const std::vector<std::string> classes = {"all", "monotonic", "explaining_away", "none", "mixed"};
    const std::vector<std::string> levels = {"all", "weak", "strong"};
    for (const auto& c : classes)
        for (const auto& l : levels) {
            ScanStratum st{c, l};
            for (const auto& r : rows) {
                if (r.winner == Winner::failed) continue;
                if (c != "all" && to_string(r.interaction_class) != c) continue;
                const bool strong = std::min(r.dep_zx, r.dep_xy) >= s.strength_threshold;
                if (l == "weak" && strong) continue;
                if (l == "strong" && !strong) continue;
                ++st.cells;
                if (r.winner == Winner::condition) ++st.condition;
                else if (r.winner == Winner::ignore) ++st.ignore;
                else ++st.tie;
            }
            if (st.cells > 0 || (c == "all" && l == "all")) s.strata.push_back(st);
        }
    return s;
}

void write_scan_summary(std::ostream& out, const ScanSummary& s) {
    out << "cells: " << s.total << " (failed: " << s.failed << ")\n";
    out << "dependence strength = min(dep_zx, dep_xy); strong if >= " << format_number(s.strength_threshold)
        << "\n";
    out << "interaction      strength  cells  condition  ignore  tie  condition_fraction\n";
    for (const auto& st : s.strata) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-16s %-9s %5zu  %9zu  %6zu  %3zu  %s\n", st.interaction.c_str(),
                      st.strength.c_str(), st.cells, st.condition, st.ignore, st.tie,
                      format_number(st.condition_fraction()).c_str());
        out << buf;
    }
}

}  // namespace confound
