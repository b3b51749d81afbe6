#include "wtrace/heat_ext.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "wtrace/stencil.hpp"

namespace wtrace {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;

// D^k of f(x) = x exp(-a x^2), k <= 3.
double xgauss_derivative(double x, double a, int k) {
    const double e = std::exp(-a * x * x);
    const double x2 = x * x;
    switch (k) {
        case 0:
            return x * e;
        case 1:
            return (1.0 - 2.0 * a * x2) * e;
        case 2:
            return (-6.0 * a * x + 4.0 * a * a * x2 * x) * e;
        case 3:
            return (-6.0 * a + 24.0 * a * a * x2 - 8.0 * a * a * a * x2 * x2) * e;
        default:
            throw UnsupportedOrder("kernel derivatives are available up to order 3");
    }
}

// D^k of exp(-b y^2), k <= 3.
double gauss_derivative(double y, double b, int k) {
    const double e = std::exp(-b * y * y);
    switch (k) {
        case 0:
            return e;
        case 1:
            return -2.0 * b * y * e;
        case 2:
            return (4.0 * b * b * y * y - 2.0 * b) * e;
        case 3:
            return (12.0 * b * b * y - 8.0 * b * b * b * y * y * y) * e;
        default:
            throw UnsupportedOrder("kernel derivatives are available up to order 3");
    }
}

// D_x^k erfc(x / (2 sqrt(T))), the time integral of the n = 1 kernel over (0, T).
double erfc_derivative(double x, double T, int k) {
    const double c = 0.5 / std::sqrt(T);
    const double e = std::exp(-c * c * x * x);
    switch (k) {
        case 0:
            return std::erfc(c * x);
        case 1:
            return -2.0 * c * kInvSqrtPi * e;
        case 2:
            return 4.0 * c * c * c * x * kInvSqrtPi * e;
        case 3:
            return 4.0 * c * c * c * kInvSqrtPi * (1.0 - 2.0 * c * c * x * x) * e;
        default:
            throw UnsupportedOrder("kernel derivatives are available up to order 3");
    }
}

double binomial(int n, int k) {
    static constexpr double table[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    return table[n][k];
}

}  // namespace

double kernel_value(double t, double x1, double xp, int n) { return kernel_derivative(t, x1, xp, n, 0, 0); }

double kernel_derivative(double t, double x1, double xp, int n, int a1, int a2) {
    if (n != 1 && n != 2) throw DimensionMismatch("kernel is defined for n = 1 or 2");
    if (a1 < 0 || a2 < 0 || a1 + a2 > 3) throw UnsupportedOrder("kernel derivatives are available up to order 3");
    if (n == 1 && a2 > 0) return 0.0;
    if (!(t > 0.0)) return 0.0;
    const double a = 0.25 / t;
    double v = std::sqrt(a / std::numbers::pi) / t * xgauss_derivative(x1, a, a1);
    if (n == 2) v *= std::sqrt(a / std::numbers::pi) * gauss_derivative(xp, a, a2);
    return v;
}

double kernel_derivative_moment(int a1, int a2, double x1, int n, const QuadSpec& quad) {
    if (a1 < 0 || a2 < 0 || a1 + a2 > 3) throw UnsupportedOrder("moments are available for |alpha| <= 3");
    if (n != 1 && n != 2) throw DimensionMismatch("kernel is defined for n = 1 or 2");
    if (n == 1 && a2 > 0) throw DimensionMismatch("tangential derivative requested for n = 1");
    if (!(x1 > 0.0)) throw BadInterval("kernel moments need x1 > 0");
    quad.validate();
    const double scale = x1 * x1;
    const auto rule = loggraded_rule(scale * 5e-4, scale * 1e20, quad.log_factor, quad.log_points);
    const auto& gh = gauss_hermite(40);
    return rule.apply([&](double t) {
        if (n == 1) return kernel_derivative(t, x1, 0.0, 1, a1, 0);
        // x' = 2 sqrt(t) z against exp(-z^2).
        const double s = 2.0 * std::sqrt(t);
        double sum = 0.0;
        for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
            const double z = gh.nodes[k];
            sum += gh.weights[k] * std::exp(z * z) * kernel_derivative(t, x1, s * z, 2, a1, a2);
        }
        return s * sum;
    });
}

double kernel_mass(double x1, int n, const QuadSpec& quad) { return kernel_derivative_moment(0, 0, x1, n, quad); }

double kernel_mass(double x1, const WeightParams& w, const QuadSpec& quad) { return kernel_mass(x1, w.n(), quad); }

// ---------------------------------------------------------------------------

ExtensionField::ExtensionField(BoundaryData g, ExtendOptions opt) : data_(std::move(g)), opt_(opt) {
    if (data_.kind() == BoundaryKind::IntervalPair) throw ValidationError("extension needs line or plane data");
    if (opt_.points < 1 || !(opt_.log_factor > 1.0)) throw ValidationError("invalid extension quadrature options");
    support_ = data_.time_support();
    double cap = std::numeric_limits<double>::infinity();
    double xs = std::numeric_limits<double>::infinity();
    if (const auto* terms = data_.terms()) {
        for (const auto& term : *terms) {
            switch (term.time.kind) {
                case Profile1D::Kind::Bump:
                    cap = std::min(cap, term.time.width / 4.0);
                    break;
                case Profile1D::Kind::Gaussian:
                case Profile1D::Kind::OddGaussian:
                    cap = std::min(cap, term.time.width / 2.0);
                    break;
                default:
                    break;
            }
            if (term.tangential.kind == Profile1D::Kind::Bump) xs = std::min(xs, term.tangential.width / 4.0);
        }
        if (!std::isfinite(cap)) cap = (data_.time().b() - data_.time().a()) / 8.0;
    } else {
        cap = data_.time().step();
        if (data_.tangential()) xs = data_.tangential()->step();
    }
    cap_ = opt_.max_cell > 0.0 ? opt_.max_cell : cap;
    x_scale_ = xs;
}

bool ExtensionField::supports(const Deriv& d) const {
    if (n() == 1 && d.xp > 0) return false;
    if (d.t == 0) return d.space() <= 3;
    if (d.t == 1) return d.space() <= 1;
    return false;
}

void ExtensionField::tangential_convolution(double s, double sigma, double xp, int order,
                                            std::array<double, 4>& h) const {
    h.fill(0.0);
    if (n() == 1) {
        h[0] = data_.eval(0, s, 0.0);
        return;
    }
    const double root = std::sqrt(sigma);
    // int G_sigma(y) f(xp - y) dy for a function given by its derivative jet.
    auto generic = [&](auto&& fjet, double lo, double hi, double hscale, double factor) {
        if (2.0 * root <= hscale) {
            const auto& gh = gauss_hermite(opt_.hermite_points);
            for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
                const auto j = fjet(xp - 2.0 * root * gh.nodes[k]);
                for (int a = 0; a <= order; ++a) h[a] += factor * gh.weights[k] * kInvSqrtPi * j[a];
            }
            return;
        }
        const double a = std::max(lo, xp - 12.0 * root);
        const double b = std::min(hi, xp + 12.0 * root);
        if (!(b > a)) return;
        const int cells = std::max(1, static_cast<int>(std::ceil((b - a) / hscale)));
        const auto rule = uniform_rule(a, b, cells, 6);
        const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * sigma);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double y = rule.nodes[k];
            const double d = xp - y;
            const double gk = norm * std::exp(-d * d / (4.0 * sigma));
            if (gk == 0.0) continue;
            const auto j = fjet(y);
            for (int q = 0; q <= order; ++q) h[q] += factor * rule.weights[k] * gk * j[q];
        }
    };

    if (const auto* terms = data_.terms()) {
        for (const auto& term : *terms) {
            const double T = term.amplitude * term.time.eval(s);
            if (T == 0.0) continue;
            const Profile1D& Y = term.tangential;
            switch (Y.kind) {
                case Profile1D::Kind::Constant:
                    h[0] += T * Y.amplitude;
                    break;
                case Profile1D::Kind::Affine:
                    for (int a = 0; a <= order; ++a) h[a] += T * Y.eval(xp, a);
                    break;
                case Profile1D::Kind::Gaussian: {
                    const double w2 = std::sqrt(Y.width * Y.width + 4.0 * sigma);
                    const auto q = Profile1D::gaussian(Y.center, w2, Y.amplitude * Y.width / w2).jet(xp);
                    for (int a = 0; a <= order; ++a) h[a] += T * q.derivative(a);
                    break;
                }
                case Profile1D::Kind::OddGaussian: {
                    // z exp(-z^2) = -(w/2) d/dy exp(-z^2), and the convolution commutes with d/dy.
                    const double w2 = std::sqrt(Y.width * Y.width + 4.0 * sigma);
                    const auto q = Profile1D::gaussian(Y.center, w2, Y.amplitude * Y.width / w2).jet(xp);
                    for (int a = 0; a <= order; ++a) h[a] += -0.5 * Y.width * T * q.derivative(a + 1);
                    break;
                }
                case Profile1D::Kind::Bump: {
                    const auto [lo, hi] = Y.support();
                    generic([&](double y) {
                        const auto j = Y.jet(y);
                        return std::array<double, 4>{j.derivative(0), j.derivative(1), j.derivative(2), j.derivative(3)};
                    },
                            lo, hi, Y.width / 4.0, T);
                    break;
                }
            }
        }
        return;
    }
    const auto& ax = *data_.tangential();
    generic([&](double y) {
        std::array<double, 4> j{};
        for (int a = 0; a <= order; ++a) j[a] = data_.eval(0, s, y, 0, a);
        return j;
    },
            ax.a(), ax.b(), x_scale_, 1.0);
}

ExtensionField::Jet ExtensionField::convolution_jet(double t, double x1, double xp, int order) const {
    if (order < 0 || order > 3) throw UnsupportedOrder("extension derivatives are available up to order 3");
    Jet v{};
    const double sigma_b = t - support_.first;
    if (!(sigma_b > 0.0)) return v;
    const double x = std::max(x1, opt_.near_boundary);

    std::array<double, 4> h0{};
    std::array<double, 4> h{};
    tangential_convolution(t, 0.0, xp, order, h0);

    const double sigma_a = std::max(0.0, t - support_.second);
    const double lo = std::max(sigma_a, x * x * 1e-3);
    if (lo < sigma_b) {
        const auto rule = loggraded_capped_rule(lo, sigma_b, opt_.log_factor, opt_.points, cap_);
        std::array<double, 4> pk{};
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double sigma = rule.nodes[k];
            const double a = 0.25 / sigma;
            const double c = std::sqrt(a / std::numbers::pi) / sigma;
            bool any = false;
            for (int a1 = 0; a1 <= order; ++a1) {
                pk[a1] = rule.weights[k] * c * xgauss_derivative(x, a, a1);
                any = any || pk[a1] != 0.0;
            }
            if (!any) continue;
            tangential_convolution(t - sigma, sigma, xp, order, h);
            for (int a2 = 0; a2 <= order; ++a2) {
                const double dh = h[a2] - h0[a2];
                if (dh == 0.0) continue;
                for (int a1 = 0; a1 + a2 <= order; ++a1) v[a1][a2] += pk[a1] * dh;
            }
        }
    }
    for (int a1 = 0; a1 <= order; ++a1) {
        const double e = erfc_derivative(x, sigma_b, a1);
        for (int a2 = 0; a1 + a2 <= order; ++a2) v[a1][a2] += h0[a2] * e;
    }
    if (x1 <= 0.0) {
        for (int a2 = 0; a2 <= order; ++a2) v[0][a2] = h0[a2];
    }
    return v;
}

void ExtensionField::eval_many(const Point& x, std::span<const Deriv> ds, std::span<double> out) const {
    int order = 0;
    for (const auto& d : ds) {
        if (!supports(d)) throw MissingDerivatives("extension derivative not available");
        order = std::max(order, d.space() + 2 * d.t);
    }
    std::fill(out.begin(), out.end(), 0.0);
    const double x1 = std::max(x.x1, 0.0);
    if (opt_.with_cutoff && x1 >= 2.0) return;
    if (!(x.t - support_.first > 0.0)) return;
    const Jet v = convolution_jet(x.t, x.x1, x.xp, order);
    std::array<double, 4> z{1.0, 0.0, 0.0, 0.0};
    if (opt_.with_cutoff && x1 > 1.0) {
        const auto j = cutoff_jet(x1);
        for (int k = 0; k < 4; ++k) z[k] = j.derivative(k);
    }
    const bool plane = n() == 2;
    auto lap = [&](int c1, int c2) { return v[c1 + 2][c2] + (plane ? v[c1][c2 + 2] : 0.0); };
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const Deriv& d = ds[i];
        double s = 0.0;
        for (int k = 0; k <= d.x1; ++k) {
            if (z[k] == 0.0) continue;
            s += binomial(d.x1, k) * z[k] * (d.t == 0 ? v[d.x1 - k][d.xp] : lap(d.x1 - k, d.xp));
        }
        out[i] = s;
    }
}

double ExtensionField::eval(const Point& x, const Deriv& d) const {
    double out = 0.0;
    eval_many(x, std::span<const Deriv>(&d, 1), std::span<double>(&out, 1));
    return out;
}

namespace {

class ExtensionTimeDerivative : public FieldModel {
public:
    explicit ExtensionTimeDerivative(std::shared_ptr<const ExtensionField> base) : base_(std::move(base)) {}

    int n() const override { return base_->n(); }
    int max_space_order() const override { return 1; }
    int max_time_order() const override { return 0; }
    double eval(const Point& x, const Deriv& d) const override {
        return base_->eval(x, Deriv{d.t + 1, d.x1, d.xp});
    }
    void eval_many(const Point& x, std::span<const Deriv> ds, std::span<double> out) const override {
        std::vector<Deriv> shifted(ds.begin(), ds.end());
        for (auto& d : shifted) ++d.t;
        base_->eval_many(x, shifted, out);
    }

private:
    std::shared_ptr<const ExtensionField> base_;
};

void check_extension_grid(const BoundaryData& g, const SpaceTimeGrid& grid) {
    if (grid.n() != g.n()) throw DimensionMismatch("boundary data and grid dimensions differ");
    if (grid.normal().kind() != AxisKind::HalfLine) throw ValidationError("extension lives on a half-line grid");
    if (grid.is_static()) throw ValidationError("extension needs a time axis");
}

// g1 = zeta D1 v + int_{max(x,1)}^2 zeta' D1 v dr at every grid node, for the
// uncut convolution v.
std::vector<double> cutoff_flux(const ExtensionField& uncut, const GridFunction& u) {
    const auto& grid = u.grid();
    const auto& d1u = u.derivative(Deriv{0, 1, 0});
    const auto& xn = grid.normal().nodes();

    std::vector<double> r;
    for (int k = 0; k <= 8; ++k) r.push_back(1.0 + k / 8.0);
    for (double x : xn) {
        if (x > 1.0 && x < 2.0) r.push_back(x);
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), r.end());
    const auto& gl = gauss_legendre(4);

    std::vector<double> g1(grid.size(), 0.0);
    std::vector<double> f(r.size());
    std::vector<double> cum(r.size(), 0.0);
    for (std::size_t it = 0; it < grid.nt(); ++it) {
        for (std::size_t ip = 0; ip < grid.np(); ++ip) {
            const Point base = grid.point(it, 0, ip);
            for (std::size_t k = 0; k < r.size(); ++k) f[k] = uncut.convolution_jet(base.t, r[k], base.xp, 1)[1][0];
            // cum[k] = int_{r_k}^2 zeta' D1 v, with D1 v cubic between samples.
            cum.back() = 0.0;
            for (std::size_t k = r.size() - 1; k-- > 0;) {
                const std::size_t st = std::min(k >= 1 ? k - 1 : 0, r.size() - 4);
                const std::span<const double> xs(r.data() + st, 4);
                const double a = r[k];
                const double b = r[k + 1];
                double s = 0.0;
                for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                    const double y = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
                    const auto wts = fd_weights(y, xs, 0);
                    double fy = 0.0;
                    for (std::size_t m = 0; m < 4; ++m) fy += wts[m] * f[st + m];
                    s += 0.5 * (b - a) * gl.weights[q] * cutoff(y, 1) * fy;
                }
                cum[k] = cum[k + 1] + s;
            }
            for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
                const double x = xn[ix];
                const std::size_t idx = grid.index(it, ix, ip);
                if (x <= 1.0) {
                    g1[idx] = d1u[idx] + cum.front();
                } else if (x < 2.0) {
                    const std::size_t k = static_cast<std::size_t>(
                        std::lower_bound(r.begin(), r.end(), x - 1e-14) - r.begin());
                    g1[idx] = cutoff(x) * f[k] + cum[k];
                }
            }
        }
    }
    return g1;
}

}  // namespace

GridFunction extend(const BoundaryData& g, std::shared_ptr<const SpaceTimeGrid> grid, const ExtendOptions& opt) {
    check_extension_grid(g, *grid);
    return GridFunction::sample(std::move(grid), std::make_shared<ExtensionField>(g, opt));
}

Extension extend_with_representation(const BoundaryData& g, std::shared_ptr<const SpaceTimeGrid> grid,
                                     const ExtendOptions& opt) {
    check_extension_grid(g, *grid);
    auto model = std::make_shared<const ExtensionField>(g, opt);
    Extension ext{model, GridFunction::sample(grid, model), {}};
    std::vector<Deriv> first = {Deriv{0, 1, 0}};
    if (g.n() == 2) first.push_back(Deriv{0, 0, 1});
    ext.u.prefetch(first);
    if (opt.with_cutoff) {
        ExtendOptions plain = opt;
        plain.with_cutoff = false;
        const ExtensionField uncut(g, plain);
        ext.rep.g.emplace_back(grid, cutoff_flux(uncut, ext.u));
    } else {
        ext.rep.g.emplace_back(grid, ext.u.derivative(Deriv{0, 1, 0}));
    }
    if (g.n() == 2) ext.rep.g.emplace_back(grid, ext.u.derivative(Deriv{0, 0, 1}));
    ext.rep.ut = GridFunction::sample(grid, std::make_shared<ExtensionTimeDerivative>(model));
    return ext;
}

double heat_residual(const GridFunction& u, const ResidualOptions& opt) {
    const auto& g = u.grid();
    if (g.is_static()) throw ValidationError("heat residual needs a time axis");
    const auto& time = *g.time();
    const auto& xn = g.normal().nodes();
    const std::size_t m = opt.margin;
    if (g.nt() < 2 * m + 1 || g.nx() < 2 * m + 1 || (g.n() == 2 && g.np() < 2 * m + 1)) {
        throw ValidationError("grid too small for the residual margin");
    }
    const std::size_t ip_lo = g.n() == 2 ? m : 0;
    const std::size_t ip_hi = g.n() == 2 ? g.np() - m : 1;
    const double dt = time.step();
    const double hp = g.tangential() ? g.tangential()->step() : 1.0;
    double worst = 0.0;
    for (std::size_t ix = std::max<std::size_t>(m, 1); ix + m < g.nx() && ix + 1 < g.nx(); ++ix) {
        if (xn[ix] > opt.x1_max) break;
        if (xn[ix] < opt.x1_min) continue;
        const double xs[3] = {xn[ix - 1], xn[ix], xn[ix + 1]};
        const auto w2 = fd_weights(xn[ix], xs, 2);
        for (std::size_t it = m; it + m < g.nt(); ++it) {
            for (std::size_t ip = ip_lo; ip < ip_hi; ++ip) {
                const double ut = (u.value(it + 1, ix, ip) - u.value(it - 1, ix, ip)) / (2.0 * dt);
                double lap = w2[0] * u.value(it, ix - 1, ip) + w2[1] * u.value(it, ix, ip) +
                             w2[2] * u.value(it, ix + 1, ip);
                if (g.n() == 2) {
                    lap += (u.value(it, ix, ip + 1) - 2.0 * u.value(it, ix, ip) + u.value(it, ix, ip - 1)) / (hp * hp);
                }
                worst = std::max(worst, std::abs(ut - lap));
            }
        }
    }
    return worst;
}

namespace {

double boundary_sample(const GridFunction& u, std::size_t it, std::size_t ip, bool right, const TraceOptions& opt) {
    const auto& g = u.grid();
    const auto& normal = g.normal();
    const std::size_t nx = g.nx();
    if (normal.include_boundary_node()) return u.value(it, right ? nx - 1 : 0, ip);
    const double e = right ? 1.0 : 0.0;
    if (opt.use_model && u.has_model()) {
        const Point p = g.point(it, 0, ip);
        return u.model()->eval(Point{p.t, e, p.xp}, Deriv{});
    }
    if (!opt.extrapolate) throw NoBoundaryAccess("grid has no boundary node and extrapolation is disabled");
    if (nx < 3) throw NoBoundaryAccess("extrapolation needs three nodes");
    std::size_t idx[3];
    for (std::size_t k = 0; k < 3; ++k) idx[k] = right ? nx - 1 - k : k;
    const double x[3] = {normal.node(idx[0]), normal.node(idx[1]), normal.node(idx[2])};
    const auto w = fd_weights(e, x, 0);
    double v = 0.0;
    for (std::size_t k = 0; k < 3; ++k) v += w[k] * u.value(it, idx[k], ip);
    return v;
}

}  // namespace

BoundaryData trace_restrict(const GridFunction& u, const TraceOptions& opt) {
    const auto& g = u.grid();
    if (g.is_static()) throw ValidationError("trace needs a time axis");
    const bool interval = g.normal().kind() == AxisKind::Interval;
    const std::size_t nt = g.nt();
    const std::size_t np = g.np();
    std::vector<double> left(nt * np);
    std::vector<double> right;
    if (interval) right.resize(nt);
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t ip = 0; ip < np; ++ip) left[it * np + ip] = boundary_sample(u, it, ip, false, opt);
        if (interval) right[it] = boundary_sample(u, it, 0, true, opt);
    }
    const bool via_model = !g.normal().include_boundary_node() && opt.use_model && u.has_model();
    if (via_model && !interval) {
        // Separable models restrict term by term, which keeps the fast seminorm path.
        if (const auto* sep = dynamic_cast<const SeparableField*>(u.model().get())) {
            std::vector<BoundaryTerm> terms;
            for (const auto& term : sep->terms()) {
                terms.push_back({term.amplitude * term.normal.eval(0.0), term.time, term.tangential});
            }
            return BoundaryData::from_terms(g.n() == 1 ? BoundaryKind::Line : BoundaryKind::Plane, *g.time(),
                                            g.tangential(), std::move(terms));
        }
    }
    auto closure = [&](double e) -> BoundaryData::Fn {
        if (!via_model) return {};
        auto model = u.model();
        return [model, e](double t, double xp, int dt, int dxp) {
            const Deriv d{dt, 0, dxp};
            if (!model->supports(d)) throw MissingDerivatives("trace derivative not available from the model");
            return model->eval(Point{t, e, xp}, d);
        };
    };
    if (interval) return BoundaryData::pair(*g.time(), std::move(left), std::move(right), closure(0.0), closure(1.0));
    if (g.n() == 1) return BoundaryData::line(*g.time(), std::move(left), closure(0.0));
    return BoundaryData::plane(*g.time(), *g.tangential(), std::move(left), closure(0.0));
}

RatioEntry extension_norm_ratio(const Extension& ext, const BoundaryData& g, const WeightParams& w, int gamma,
                                const SeminormOptions& sopt, std::string label) {
    const auto num = tilde_norm(ext.u, ext.rep, w, gamma);
    const auto den = slobodeckij_norm(g, w, sopt);
    auto e = make_ratio(std::move(label), num.total, den.total);
    for (const auto& c : num.components) e.extras.emplace_back("num_" + c.name, c.value);
    for (const auto& c : den.components) e.extras.emplace_back("den_" + c.name, c.value);
    return e;
}

RatioReport extension_norm_ratio(const BoundaryData& g, std::shared_ptr<const SpaceTimeGrid> grid,
                                 const WeightParams& w, int gamma, const ExtendOptions& opt,
                                 const SeminormOptions& sopt) {
    ExtendOptions o = opt;
    o.with_cutoff = true;
    RatioReport r;
    r.grid_hash = descriptor_hash(grid->describe());
    const auto ext = extend_with_representation(g, std::move(grid), o);
    r.entries.push_back(extension_norm_ratio(ext, g, w, gamma, sopt));
    r.finalize();
    return r;
}

void write_grid_csv(const std::string& path, const GridFunction& u) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << "t,x1,xp,value\n";
    const auto& g = u.grid();
    char buf[128];
    for (std::size_t it = 0; it < g.nt(); ++it) {
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            for (std::size_t ip = 0; ip < g.np(); ++ip) {
                const Point p = g.point(it, ix, ip);
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.t, p.x1, p.xp, u.value(it, ix, ip));
                out << buf;
            }
        }
    }
}

}  // namespace wtrace
