#include "wtrace/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numeric>

#include "CLI11.hpp"
#include "wtrace/batteries.hpp"
#include "wtrace/boundary_norms.hpp"
#include "wtrace/bvp1d.hpp"
#include "wtrace/config.hpp"
#include "wtrace/heat_ext.hpp"
#include "wtrace/norms.hpp"
#include "wtrace/report.hpp"
#include "wtrace/trace_repr.hpp"

namespace wtrace::cli {

namespace {

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// passed when value <= tolerance
Check at_most(std::string name, double value, double tol) {
    return {std::move(name), value, tol, std::isfinite(value) && value <= tol};
}

/// passed when value >= tolerance
Check at_least(std::string name, double value, double tol) {
    return {std::move(name), value, tol, std::isfinite(value) && value >= tol};
}

struct Context {
    Config cfg;
    int refine = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::filesystem::path out;
    std::ostream* log = nullptr;

    std::string path(const std::string& name) const { return (out / name).string(); }
};

struct Outcome {
    Json body = Json::object();
    std::vector<Check> checks;
};

int dimension(const Config& c) {
    const auto n = c.integer("n");
    if (n != 1 && n != 2) throw DimensionMismatch("n must be 1 or 2");
    return static_cast<int>(n);
}

WeightParams weights(const Config& c) { return WeightParams::make(c.number("p"), c.number("theta"), dimension(c)); }

int positive(const Config& c, std::string_view key) {
    const auto v = c.integer(key);
    if (v < 1) throw ValidationError("key '" + std::string(key) + "' must be positive");
    return static_cast<int>(v);
}

std::size_t battery_size(const Config& c) {
    const auto v = c.integer("battery.size");
    if (v < 0) throw ValidationError("battery.size must be non-negative");
    return static_cast<std::size_t>(v);
}

UniformAxis time_axis(const Config& c, int level) {
    return UniformAxis(c.number("grid.t_min"), c.number("grid.t_max"), positive(c, "grid.t_cells") << level);
}

std::optional<UniformAxis> tangential_axis(const Config& c, int n, int level) {
    if (n != 2) return std::nullopt;
    const double a = c.number("grid.xp_max");
    return UniformAxis(-a, a, positive(c, "grid.xp_cells") << level);
}

std::shared_ptr<const SpaceTimeGrid> make_grid(const Config& c, int n, int level) {
    return std::make_shared<SpaceTimeGrid>(
        time_axis(c, level), GradedGrid::half_line(c.number("grid.x1_max"), positive(c, "grid.x1_cells") << level,
                                                   c.number("grid.q")),
        tangential_axis(c, n, level), n);
}

QuadSpec quad_spec(const Config& c) {
    QuadSpec q;
    q.tau_min = c.number("quad.tau_min");
    q.log_factor = c.number("quad.log_factor");
    q.log_points = positive(c, "quad.log_points");
    q.validate();
    return q;
}

SeminormOptions seminorm_options(const Config& c, int level) {
    SeminormOptions s;
    s.quad = quad_spec(c).refined(level);
    const auto mode = c.text("boundary.time_mode");
    if (mode == "auto") {
        s.time_mode = TimeMode::Auto;
    } else if (mode == "whole_line") {
        s.time_mode = TimeMode::WholeLine;
    } else if (mode == "window") {
        s.time_mode = TimeMode::Window;
    } else {
        throw ValidationError("boundary.time_mode must be auto, whole_line or window");
    }
    return s;
}

double relative_drift(double coarse, double fine) {
    if (coarse == 0.0) return fine == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(fine - coarse) / std::abs(coarse);
}

/// Least-squares slope of log(err) against log(h).
double fitted_slope(const std::vector<double>& h, const std::vector<double>& err) {
    const std::size_t n = h.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------

Outcome run_norms(const Context& ctx) {
    const auto& c = ctx.cfg;
    const int n = dimension(c);
    const auto w = weights(c);
    Outcome o;
    Rng rng(ctx.seed);

    // Parabolic norms of the boundary-hugging battery.
    const auto members = trace_members(rng, battery_size(c), n, c.number("battery.scale_min"),
                                       c.number("battery.scale_max"));
    const auto grid = make_grid(c, n, ctx.refine);
    const auto cases = sample_members(members, grid);
    struct Row {
        NormReport h1, h2;
        double lp_value;
    };
    const auto rows = parallel_map<Row>(cases.size(), ctx.threads, [&](std::size_t i) {
        const auto& cs = cases[i];
        return Row{tilde_norm(cs.u, cs.rep, w, 1), tilde_norm(cs.u, cs.rep, w, 2), lp_theta_norm(cs.u, w)};
    });
    CsvTable table({"label", "lp_theta", "tilde_h1", "tilde_h2"});
    Json entries = Json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        table.add_row(cases[i].label, {rows[i].lp_value, rows[i].h1.total, rows[i].h2.total});
        entries.push_back({{"label", cases[i].label},
                           {"lp_theta", rows[i].lp_value},
                           {"tilde_h1", to_json(rows[i].h1)},
                           {"tilde_h2", to_json(rows[i].h2)}});
    }
    o.body["grid"] = grid->describe();
    o.body["battery"] = std::move(entries);
    table.write(ctx.path("norms.csv"));

    if (n == 1) {
        const int cells = positive(c, "norms.x1_cells") << ctx.refine;
        const auto line = std::make_shared<SpaceTimeGrid>(
            std::nullopt, GradedGrid::half_line(c.number("norms.x1_max"), cells, c.number("grid.q")), std::nullopt, 1);
        const auto ref = hardy_reference_member();
        const auto r = hardy_ratio(GridFunction::sample(line, ref.model), w);
        Json hardy;
        hardy["reference"] = {{"label", ref.label}, {"ratio", r.ratio}};
        if (w.p() == 2.0) {
            const double a = w.theta() + 2.0;
            const double num = std::tgamma(a) / std::pow(2.0, a);
            const double den = num - 2.0 * std::tgamma(a + 1) / std::pow(2.0, a + 1) + std::tgamma(a + 2) / std::pow(2.0, a + 2);
            hardy["reference"]["closed_form"] = num / den;
            hardy["reference"]["relative_error"] = std::abs(r.ratio - num / den) / (num / den);
            o.checks.push_back(at_most("hardy_reference_relative_error", std::abs(r.ratio - num / den) / (num / den),
                                       c.number("norms.hardy_tol")));
        }
        Rng hrng(ctx.seed);
        const auto hm = hardy_members(hrng, battery_size(c));
        const double bound = hardy_constant(w);
        double worst = 0.0;
        Json list = Json::array();
        CsvTable ht({"label", "hardy_ratio", "weighted_sobolev_1"});
        for (const auto& m : hm) {
            const auto u = GridFunction::sample(line, m.model);
            const auto hr = hardy_ratio(u, w);
            worst = std::max(worst, hr.ratio);
            const double s1 = weighted_sobolev_norm(u, w, 1);
            list.push_back({{"label", m.label}, {"ratio", hr.ratio}, {"weighted_sobolev_1", s1}});
            ht.add_row(m.label, {hr.ratio, s1});
        }
        hardy["battery"] = std::move(list);
        hardy["constant"] = bound;
        hardy["max_ratio"] = worst;
        o.checks.push_back(at_most("hardy_battery_below_constant", worst, bound));
        o.body["hardy"] = std::move(hardy);
        ht.write(ctx.path("norms_hardy.csv"));
    }
    return o;
}

Outcome run_boundary_norms(const Context& ctx) {
    const auto& c = ctx.cfg;
    const int n = dimension(c);
    const auto w = weights(c);
    const auto sopt = seminorm_options(c, ctx.refine);
    Rng rng(ctx.seed);
    const auto battery = bump_battery(rng, battery_size(c), n, time_axis(c, ctx.refine), tangential_axis(c, n, ctx.refine));
    struct Row {
        NormReport norm;
        SeminormValue time;
        std::optional<SeminormValue> space;
        bool compatible;
    };
    const auto rows = parallel_map<Row>(battery.size(), ctx.threads, [&](std::size_t i) {
        const auto& g = battery[i].g;
        Row r{slobodeckij_norm(g, w, sopt), time_seminorm(g, w, sopt), std::nullopt,
              zero_compatible(g, sopt.time_mode == TimeMode::Window ? TimeMode::Window : TimeMode::WholeLine)};
        if (n == 2) r.space = space_seminorm(g, w, sopt);
        return r;
    });
    Outcome o;
    Json list = Json::array();
    CsvTable table({"label", "total", "time_seminorm", "time_error", "space_seminorm"});
    for (std::size_t i = 0; i < battery.size(); ++i) {
        const auto& r = rows[i];
        Json e = {{"label", battery[i].label},
                  {"norm", to_json(r.norm)},
                  {"time_seminorm", to_json(r.time)},
                  {"zero_compatible", r.compatible}};
        if (r.space) e["space_seminorm"] = to_json(*r.space);
        list.push_back(std::move(e));
        table.add_row(battery[i].label,
                      {r.norm.total, r.time.value, r.time.error_estimate, r.space ? r.space->value : 0.0});
    }
    o.body["battery"] = std::move(list);
    table.write(ctx.path("boundary-norms.csv"));
    if (!battery.empty()) write_boundary_csv(ctx.path("boundary-norms_member0.csv"), battery.front().g);
    return o;
}

Outcome run_kernel_check(const Context& ctx) {
    const auto& c = ctx.cfg;
    const auto quad = quad_spec(c).refined(ctx.refine);
    const double mass_tol = c.number("kernel.mass_tol");
    const double moment_tol = c.number("kernel.moment_tol");
    const auto max_order = c.integer("kernel.max_order");
    if (max_order < 1 || max_order > 3) throw UnsupportedOrder("kernel.max_order must be 1, 2 or 3");
    Outcome o;
    CsvTable table({"n", "x1", "a1", "a2", "value"});
    Json rows = Json::array();
    double worst_mass = 0.0;
    double worst_moment = 0.0;
    for (double nd : c.numbers("kernel.dims")) {
        const int n = static_cast<int>(nd);
        if (n != 1 && n != 2) throw DimensionMismatch("kernel.dims entries must be 1 or 2");
        for (double x1 : c.numbers("kernel.x1")) {
            if (!(x1 > 0.0)) throw ValidationError("kernel.x1 entries must be positive");
            const double mass = kernel_mass(x1, n, quad);
            worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
            rows.push_back({{"n", n}, {"x1", x1}, {"alpha", {0, 0}}, {"value", mass}, {"target", 1.0}});
            table.add_row({double(n), x1, 0.0, 0.0, mass});
            for (int order = 1; order <= max_order; ++order) {
                for (int a2 = 0; a2 <= (n == 2 ? order : 0); ++a2) {
                    const int a1 = order - a2;
                    const double m = kernel_derivative_moment(a1, a2, x1, n, quad);
                    worst_moment = std::max(worst_moment, std::abs(m));
                    rows.push_back({{"n", n}, {"x1", x1}, {"alpha", {a1, a2}}, {"value", m}, {"target", 0.0}});
                    table.add_row({double(n), x1, double(a1), double(a2), m});
                }
            }
        }
    }
    o.body["identities"] = std::move(rows);
    o.checks.push_back(at_most("max_mass_error", worst_mass, mass_tol));
    o.checks.push_back(at_most("max_moment", worst_moment, moment_tol));
    table.write(ctx.path("kernel-check.csv"));
    return o;
}

Outcome run_extend(const Context& ctx) {
    const auto& c = ctx.cfg;
    const int n = dimension(c);
    const auto w = weights(c);
    Rng rng(ctx.seed);
    const auto coarse_grid = make_grid(c, n, ctx.refine);
    const auto battery = bump_battery(rng, battery_size(c), n, *coarse_grid->time(), coarse_grid->tangential());
    ExtendOptions eopt;
    eopt.with_cutoff = true;
    struct Row {
        double trace_error;
        RatioEntry r1, r2;
    };
    // The same seed regenerates the battery on each level's axes.
    auto at_level = [&](int level) {
        const auto grid = make_grid(c, n, level);
        const auto sopt = seminorm_options(c, level);
        Rng level_rng(ctx.seed);
        const auto data = bump_battery(level_rng, battery.size(), n, *grid->time(), grid->tangential());
        return parallel_map<Row>(data.size(), ctx.threads, [&](std::size_t i) {
            const auto& g = data[i].g;
            const auto ext = extend_with_representation(g, grid, eopt);
            const auto diff = trace_restrict(ext.u.sampled_only()).combine(1.0, g, -1.0);
            double err = 0.0;
            for (double v : diff.values()) err = std::max(err, std::abs(v));
            return Row{err, extension_norm_ratio(ext, g, w, 1, sopt, battery[i].label),
                       extension_norm_ratio(ext, g, w, 2, sopt, battery[i].label)};
        });
    };
    const auto coarse = at_level(ctx.refine);
    const auto fine = at_level(ctx.refine + 1);

    Outcome o;
    RatioReport g1c, g2c, g1f, g2f;
    double trace_coarse = 0.0, trace_fine = 0.0;
    bool monotone = true;
    CsvTable table({"label", "trace_error", "trace_error_fine", "ratio_gamma1", "ratio_gamma2", "ratio_gamma1_fine",
                    "ratio_gamma2_fine"});
    Json list = Json::array();
    for (std::size_t i = 0; i < battery.size(); ++i) {
        const auto& a = coarse[i];
        const auto& b = fine[i];
        trace_coarse = std::max(trace_coarse, a.trace_error);
        trace_fine = std::max(trace_fine, b.trace_error);
        g1c.entries.push_back(a.r1);
        g2c.entries.push_back(a.r2);
        g1f.entries.push_back(b.r1);
        g2f.entries.push_back(b.r2);
        for (const auto* r : {&a, &b}) {
            if (!r->r1.degenerate && !(r->r2.ratio >= r->r1.ratio)) monotone = false;
        }
        table.add_row(battery[i].label, {a.trace_error, b.trace_error, a.r1.ratio, a.r2.ratio, b.r1.ratio, b.r2.ratio});
        list.push_back({{"label", battery[i].label}, {"trace_error", a.trace_error}, {"trace_error_fine", b.trace_error}});
    }
    g1c.grid_hash = g2c.grid_hash = descriptor_hash(coarse_grid->describe());
    g1f.grid_hash = g2f.grid_hash = descriptor_hash(make_grid(c, n, ctx.refine + 1)->describe());
    for (auto* r : {&g1c, &g2c, &g1f, &g2f}) r->finalize();
    o.body["grid"] = coarse_grid->describe();
    o.body["members"] = std::move(list);
    o.body["ratio_gamma1"] = to_json(g1c);
    o.body["ratio_gamma2"] = to_json(g2c);
    o.body["ratio_gamma1_fine"] = to_json(g1f);
    o.body["ratio_gamma2_fine"] = to_json(g2f);
    o.body["max_trace_error"] = trace_coarse;
    o.body["max_trace_error_fine"] = trace_fine;
    const double drift_tol = c.number("extend.drift_tol");
    if (!battery.empty()) {
        o.checks.push_back(at_most("max_trace_error", trace_coarse, c.number("extend.trace_tol")));
        o.checks.push_back(at_most("trace_error_refinement_factor", trace_fine / trace_coarse, 0.5));
        o.checks.push_back(at_most("gamma1_ratio_drift", relative_drift(g1c.max, g1f.max), drift_tol));
        o.checks.push_back(at_most("gamma2_ratio_drift", relative_drift(g2c.max, g2f.max), drift_tol));
        o.checks.push_back({"gamma2_dominates_gamma1", monotone ? 1.0 : 0.0, 1.0, monotone});
    }
    table.write(ctx.path("extend.csv"));
    if (!battery.empty()) write_grid_csv(ctx.path("extend_member0.csv"), extend(battery.front().g, coarse_grid, eopt));

    // Heat residual of a Gaussian-in-time datum on the half line under mesh doubling.
    const int levels = positive(c, "extend.residual_levels");
    ResidualOptions ropt;
    ropt.x1_max = c.number("extend.residual_x1_max");
    std::vector<double> hs, res;
    CsvTable rt({"level", "x1_cells", "residual"});
    for (int l = 0; l < levels; ++l) {
        const auto grid = make_grid(c, 1, ctx.refine + l);
        const auto g = BoundaryData::from_terms(BoundaryKind::Line, *grid->time(), std::nullopt,
                                                {{1.0, Profile1D::gaussian(1.0, 0.4), Profile1D::constant(1.0)}});
        hs.push_back(std::ldexp(1.0, -l));
        res.push_back(heat_residual(extend(g, grid), ropt));
        rt.add_row({double(l), double(grid->normal().size() - 1), res.back()});
    }
    rt.write(ctx.path("extend_residual.csv"));
    const double slope = levels >= 2 ? fitted_slope(hs, res) : 0.0;
    o.body["heat_residual"] = {{"residuals", res}, {"slope", slope}};
    if (levels >= 2) o.checks.push_back(at_least("heat_residual_slope", slope, c.number("extend.min_residual_slope")));
    return o;
}

Outcome run_trace_check(const Context& ctx) {
    const auto& c = ctx.cfg;
    const int n = dimension(c);
    const auto w = weights(c);
    const std::size_t size = battery_size(c);
    if (size == 0) throw ValidationError("trace-check needs a non-empty battery (battery.size >= 1)");
    Rng rng(ctx.seed);
    const auto members = trace_members(rng, size, n, c.number("battery.scale_min"), c.number("battery.scale_max"));
    auto at_level = [&](int level) {
        const auto grid = make_grid(c, n, level);
        const auto cases = sample_members(members, grid);
        const auto sopt = seminorm_options(c, level);
        auto entries = parallel_map<RatioEntry>(cases.size(), ctx.threads, [&](std::size_t i) {
            return trace_inequality_ratio({cases[i]}, w, sopt).entries.front();
        });
        RatioReport r;
        r.entries = std::move(entries);
        r.grid_hash = descriptor_hash(grid->describe());
        r.finalize();
        return r;
    };
    const auto coarse = at_level(ctx.refine);
    const auto fine = at_level(ctx.refine + 1);
    Outcome o;
    o.body["coarse"] = to_json(coarse);
    o.body["fine"] = to_json(fine);
    const double drift = relative_drift(coarse.max, fine.max);
    o.body["max_ratio_drift"] = drift;
    o.checks.push_back(at_most("max_ratio_drift", drift, c.number("trace.drift_tol")));
    o.checks.push_back(at_most("degenerate_members", double(fine.degenerate_count), 0.0));
    CsvTable table({"label", "ratio_coarse", "ratio_fine"});
    for (std::size_t i = 0; i < members.size(); ++i) {
        table.add_row(members[i].label, {coarse.entries[i].ratio, fine.entries[i].ratio});
    }
    table.write(ctx.path("trace-check.csv"));
    return o;
}

Outcome run_repr_check(const Context& ctx) {
    const auto& c = ctx.cfg;
    const int n = dimension(c);
    const std::size_t size = battery_size(c);
    if (size == 0) throw ValidationError("repr-check needs a non-empty battery (battery.size >= 1)");
    const double eps = c.number("repr.eps");
    Rng rng(ctx.seed);
    const auto members = trace_members(rng, size, n, std::max(0.2, c.number("battery.scale_min")),
                                       std::max(0.2, c.number("battery.scale_max")));
    const auto grid = make_grid(c, n, ctx.refine);
    const auto cases = sample_members(members, grid);
    std::vector<std::pair<double, double>> samples;
    for (double t : {0.8, 1.0, 1.2}) {
        if (n == 1) {
            samples.emplace_back(t, 0.0);
        } else {
            samples.emplace_back(t, -0.2);
            samples.emplace_back(t, 0.3);
        }
    }
    const auto mol =
        Mollifier::make(MollifierMode::Representation, n, positive(c, "repr.mollifier_cells") << ctx.refine);
    RepresentationOptions ropt;
    ropt.lambda_cells = positive(c, "repr.lambda_cells") << ctx.refine;
    struct Row {
        double base, refined;
    };
    const auto rows = parallel_map<Row>(cases.size(), ctx.threads, [&](std::size_t i) {
        const auto& cs = cases[i];
        const double a = representation_residual(cs.u, cs.rep, eps, samples, mol, ropt).max_residual;
        const double b = representation_residual(cs.u, cs.rep, eps, samples, mol.refined(), ropt.refined()).max_residual;
        return Row{a, b};
    });
    Outcome o;
    double worst = 0.0;
    bool decreasing = true;
    CsvTable table({"label", "residual", "residual_refined"});
    Json list = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        worst = std::max(worst, rows[i].base);
        if (rows[i].refined > rows[i].base && rows[i].base > 1e-12) decreasing = false;
        table.add_row(members[i].label, {rows[i].base, rows[i].refined});
        list.push_back({{"label", members[i].label}, {"residual", rows[i].base}, {"residual_refined", rows[i].refined}});
    }
    o.body["eps"] = eps;
    o.body["members"] = std::move(list);
    o.body["max_residual"] = worst;
    o.checks.push_back(at_most("max_residual", worst, c.number("repr.tol")));
    o.checks.push_back({"decreasing_under_refinement", decreasing ? 1.0 : 0.0, 1.0, decreasing});
    table.write(ctx.path("repr-check.csv"));
    return o;
}

Outcome run_bvp(const Context& ctx) {
    const auto& c = ctx.cfg;
    BvpForm form;
    if (c.text("bvp.form") == "nondivergence") {
        form = BvpForm::NonDivergence;
    } else if (c.text("bvp.form") == "divergence") {
        form = BvpForm::Divergence;
    } else {
        throw ValidationError("bvp.form must be nondivergence or divergence");
    }
    TimeScheme scheme;
    if (c.text("bvp.scheme") == "implicit_euler") {
        scheme = TimeScheme::ImplicitEuler;
    } else if (c.text("bvp.scheme") == "crank_nicolson") {
        scheme = TimeScheme::CrankNicolson;
    } else {
        throw ValidationError("bvp.scheme must be implicit_euler or crank_nicolson");
    }
    const double T = c.number("bvp.T");
    const int M0 = positive(c, "bvp.cells") << ctx.refine;
    const int levels = positive(c, "bvp.levels");
    const double q = c.number("bvp.q");
    const auto w = WeightParams::make(c.number("p"), c.number("theta"), 1);

    auto configure = [&](BvpProblem& p) {
        p.scheme = scheme;
        p.Lambda = c.number("bvp.Lambda");
        p.beta = c.number("bvp.beta");
        p.boundary_layer = c.number("bvp.boundary_layer");
        p.T = T;
        p.w = w;
    };

    // Manufactured u = sin(t) e^x.
    BvpProblem man;
    man.form = form;
    configure(man);
    auto exact = [](double t, double x) { return std::sin(t) * std::exp(x); };
    if (form == BvpForm::NonDivergence) {
        man.f = [](double t, double x) { return (std::sin(t) - std::cos(t)) * std::exp(x); };
    } else {
        man.f1 = [](double t, double x) { return std::sin(t) * std::exp(x) - std::cos(t) * (std::exp(x) - 1.0); };
    }
    auto sin_d = [](double t, int k) {
        switch (k % 4) {
            case 0: return std::sin(t);
            case 1: return std::cos(t);
            case 2: return -std::sin(t);
            default: return -std::cos(t);
        }
    };
    man.g_left = sin_d;
    man.g_right = [sin_d](double t, int k) { return std::exp(1.0) * sin_d(t, k); };

    Outcome o;
    CsvTable conv({"study", "level", "dt", "dx", "error"});
    Json studies = Json::object();
    // Time-step study on a fine spatial mesh; mesh-size study with dt ~ dx^2.
    std::vector<double> hs, es;
    const int fine_cells = std::max(200, M0 << (levels + 1));
    const int steps0 = std::max(4, M0 * 2);
    for (int l = 0; l < levels; ++l) {
        const int steps = steps0 << l;
        const auto sol = solve(man, bvp_mesh(T, steps, fine_cells, q));
        hs.push_back(T / steps);
        es.push_back(max_error(sol.u, exact));
        conv.add_row("dt", {double(l), hs.back(), 0.5 / fine_cells, es.back()});
    }
    const double dt_slope = fitted_slope(hs, es);
    studies["dt"] = {{"steps", hs}, {"errors", es}, {"slope", dt_slope}};
    hs.clear();
    es.clear();
    double lift_gap = 0.0;
    for (int l = 0; l < levels; ++l) {
        const int cells = M0 << l;
        const double h = 0.5 / cells;
        const int steps = std::max(1, static_cast<int>(std::lround(T / (h * h))));
        const auto mesh = bvp_mesh(T, steps, cells, q);
        const auto sol = solve(man, mesh);
        hs.push_back(h);
        es.push_back(max_error(sol.u, exact));
        conv.add_row("dx", {double(l), T / steps, h, es.back()});
        if (l + 1 == levels) {
            const auto lifted = lift_and_solve(man, mesh);
            lift_gap = max_error(lifted.u, [&](double t, double x) { return sol.u.evaluate(Point{t, x, 0.0}); });
        }
    }
    const double dx_slope = fitted_slope(hs, es);
    studies["dx"] = {{"sizes", hs}, {"errors", es}, {"slope", dx_slope}};
    o.body["manufactured"] = std::move(studies);
    o.checks.push_back(at_least("dt_slope", dt_slope, c.number("bvp.min_dt_slope")));
    o.checks.push_back(at_least("dx_slope", dx_slope, c.number("bvp.min_dx_slope")));
    conv.write(ctx.path("bvp_convergence.csv"));

    // Randomized battery: lifting vs direct and estimate ratios at two meshes.
    Rng rng(ctx.seed);
    auto members = bvp_members(rng, battery_size(c), form, T, w);
    for (auto& m : members) configure(m.problem);
    const double lift_tol = c.number("bvp.lift_tol");
    struct Row {
        double gap;
        RatioEntry coarse, fine;
    };
    const int cells = 2 * M0;
    auto mesh_at = [&](int k) {
        const int mc = cells << k;
        const double h = 0.5 / mc;
        return bvp_mesh(T, std::max(1, static_cast<int>(std::lround(T / (h * h)))), mc, q);
    };
    const auto coarse_mesh = mesh_at(0);
    const auto fine_mesh = mesh_at(1);
    const auto sopt = seminorm_options(c, ctx.refine);
    const auto rows = parallel_map<Row>(members.size(), ctx.threads, [&](std::size_t i) {
        const auto& p = members[i].problem;
        const auto direct = solve(p, coarse_mesh);
        const auto lifted = lift_and_solve(p, coarse_mesh);
        double scale = 1.0;
        for (double v : direct.u.values()) scale = std::max(scale, std::abs(v));
        double gap = 0.0;
        for (std::size_t k = 0; k < direct.u.values().size(); ++k) {
            gap = std::max(gap, std::abs(direct.u.values()[k] - lifted.u.values()[k]));
        }
        const auto fine = solve(p, fine_mesh);
        return Row{gap / scale, estimate_report(direct, p, sopt, members[i].label),
                   estimate_report(fine, p, sopt, members[i].label)};
    });
    RatioReport rc, rf;
    double worst_gap = lift_gap;
    CsvTable table({"label", "lift_gap", "ratio_coarse", "ratio_fine"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        worst_gap = std::max(worst_gap, rows[i].gap);
        rc.entries.push_back(rows[i].coarse);
        rf.entries.push_back(rows[i].fine);
        table.add_row(members[i].label, {rows[i].gap, rows[i].coarse.ratio, rows[i].fine.ratio});
    }
    rc.grid_hash = descriptor_hash(coarse_mesh->describe());
    rf.grid_hash = descriptor_hash(fine_mesh->describe());
    rc.finalize();
    rf.finalize();
    o.body["estimate_coarse"] = to_json(rc);
    o.body["estimate_fine"] = to_json(rf);
    o.body["max_lift_gap"] = worst_gap;
    o.checks.push_back(at_most("lift_vs_direct", worst_gap, lift_tol));
    if (!rows.empty()) {
        o.checks.push_back(at_most("estimate_drift", relative_drift(rc.max, rf.max), c.number("bvp.drift_tol")));
    }
    table.write(ctx.path("bvp_battery.csv"));
    return o;
}

using Runner = Outcome (*)(const Context&);

Runner runner_for(const std::string& name) {
    if (name == "norms") return run_norms;
    if (name == "boundary-norms") return run_boundary_norms;
    if (name == "kernel-check") return run_kernel_check;
    if (name == "extend") return run_extend;
    if (name == "trace-check") return run_trace_check;
    if (name == "repr-check") return run_repr_check;
    if (name == "bvp") return run_bvp;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"norms", "boundary-norms", "kernel-check", "extend",
                                                   "trace-check", "repr-check", "bvp"};
    return names;
}

int run(const Options& opt, std::ostream& log) {
    const Runner runner = runner_for(opt.subcommand);
    if (!runner) {
        log << "error: unknown subcommand '" << opt.subcommand << "'\n";
        return kValidationFailure;
    }
    try {
        Context ctx;
        ctx.cfg = opt.config_path.empty() ? Config{} : Config::load(opt.config_path);
        if (opt.seed) ctx.cfg.set("seed", std::to_string(*opt.seed));
        if (opt.refine) ctx.cfg.set("refine", std::to_string(*opt.refine));
        ctx.seed = ctx.cfg.unsigned_integer("seed");
        const auto refine = ctx.cfg.integer("refine");
        if (refine < 0 || refine > 6) throw ValidationError("refine must lie in [0, 6]");
        ctx.refine = static_cast<int>(refine);
        const auto threads = ctx.cfg.integer("threads");
        if (threads < 0) throw ValidationError("threads must be non-negative");
        ctx.threads = static_cast<unsigned>(threads);
        ctx.out = opt.out_dir;
        ctx.log = &log;
        std::filesystem::create_directories(ctx.out);

        Outcome outcome = runner(ctx);

        Json report = report_header(opt.subcommand);
        Json cfg = Json::object();
        for (const auto& [k, v] : ctx.cfg.effective()) cfg[k] = v;
        report["config"] = std::move(cfg);
        bool passed = true;
        Json checks = Json::array();
        for (const auto& ch : outcome.checks) {
            passed = passed && ch.passed;
            checks.push_back({{"name", ch.name}, {"value", ch.value}, {"tolerance", ch.tolerance}, {"passed", ch.passed}});
            log << (ch.passed ? "PASS " : "FAIL ") << ch.name << " = " << format_double(ch.value)
                << " (tolerance " << format_double(ch.tolerance) << ")\n";
        }
        report["checks"] = std::move(checks);
        report["passed"] = passed;
        for (auto& [k, v] : outcome.body.items()) report[k] = std::move(v);
        write_json(ctx.path(opt.subcommand + ".json"), report);
        return passed ? kSuccess : kToleranceBreach;
    } catch (const ValidationError& e) {
        log << "validation error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const NumericalError& e) {
        log << "numerical failure: " << e.what() << '\n';
        return kToleranceBreach;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kUnexpected;
    }
}

int main(int argc, char** argv) {
    CLI::App app{"Weighted trace, extension and boundary-value toolkit"};
    app.require_subcommand(1);
    Options opt;
    std::uint64_t seed = 0;
    int refine = 0;
    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config_path, "key = value configuration file");
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "battery seed (overrides the config)");
        sub->add_option("--refine", refine, "mesh refinements (overrides the config)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kValidationFailure;
    }
    auto* sub = app.get_subcommands().front();
    opt.subcommand = sub->get_name();
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--refine")) opt.refine = refine;
    return run(opt, std::cerr);
}

}  // namespace wtrace::cli
