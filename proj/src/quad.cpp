#include "wtrace/quad.hpp"

#include <cmath>
#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace wtrace {

namespace {

GaussRule build_gauss_legendre(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

GaussRule build_gauss_hermite(int n) {
    // Golub-Welsch would need an eigen-solver; Newton on the physicists'
    // Hermite recurrence with asymptotic initial guesses is enough here.
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * r.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * r.nodes[1];
        } else {
            z = 2.0 * z - r.nodes[i - 2];
        }
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        r.nodes[i] = z;
        r.nodes[n - 1 - i] = -z;
        r.weights[i] = 2.0 / (pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    // Ascending order.
    std::vector<std::pair<double, double>> nw;
    for (int i = 0; i < n; ++i) nw.emplace_back(r.nodes[i], r.weights[i]);
    std::sort(nw.begin(), nw.end());
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = nw[i].first;
        r.weights[i] = nw[i].second;
    }
    return r;
}

template <typename Builder>
const GaussRule& cached_rule(std::map<int, GaussRule>& cache, std::mutex& mu, int n, Builder build) {
    if (n < 1) throw ValidationError("quadrature rule needs at least one point");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build(n)).first;
    return it->second;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    return cached_rule(cache, mu, n, build_gauss_legendre);
}

const GaussRule& gauss_hermite(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    return cached_rule(cache, mu, n, build_gauss_hermite);
}

void QuadSpec::validate() const {
    if (!(tau_min > 0.0)) throw ValidationError("tau_min must be positive");
    if (!(log_factor > 1.0 && log_factor <= 2.0)) {
        throw ValidationError("log-grading factor must lie in (1, 2]");
    }
    if (log_points < 1) throw ValidationError("log_points must be >= 1");
}

QuadSpec QuadSpec::refined(int level) const {
    QuadSpec q = *this;
    for (int i = 0; i < level; ++i) q.log_factor = std::sqrt(q.log_factor);
    return q;
}

double NodeRule::apply(const std::function<double(double)>& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
}

NodeRule loggraded_rule(double a, double b, double factor, int points) {
    if (!(a > 0.0) || !(b > a)) throw BadInterval("log-graded rule needs 0 < a < b");
    if (!(factor > 1.0)) throw ValidationError("log-grading factor must exceed 1");
    const auto& g = gauss_legendre(points);
    NodeRule r;
    const double la = std::log(a);
    const double lb = std::log(b);
    const double step = std::log(factor);
    const int cells = std::max(1, static_cast<int>(std::ceil((lb - la) / step - 1e-12)));
    const double h = (lb - la) / cells;
    r.nodes.reserve(static_cast<std::size_t>(cells) * points);
    r.weights.reserve(static_cast<std::size_t>(cells) * points);
    for (int c = 0; c < cells; ++c) {
        const double y0 = la + c * h;
        for (int k = 0; k < points; ++k) {
            const double y = y0 + 0.5 * h * (g.nodes[k] + 1.0);
            const double tau = std::exp(y);
            r.nodes.push_back(tau);
            r.weights.push_back(0.5 * h * g.weights[k] * tau);
        }
    }
    return r;
}

NodeRule loggraded_capped_rule(double a, double b, double factor, int points, double max_width) {
    if (!(a > 0.0) || !(b > a)) throw BadInterval("log-graded rule needs 0 < a < b");
    if (!(max_width > 0.0)) throw ValidationError("cell width cap must be positive");
    const double switch_at = max_width / (factor - 1.0);
    if (b <= switch_at) return loggraded_rule(a, b, factor, points);
    NodeRule r;
    double c = a;
    if (a < switch_at) {
        r = loggraded_rule(a, switch_at, factor, points);
        c = switch_at;
    }
    const int cells = std::max(1, static_cast<int>(std::ceil((b - c) / max_width - 1e-12)));
    const auto u = uniform_rule(c, b, cells, points);
    r.nodes.insert(r.nodes.end(), u.nodes.begin(), u.nodes.end());
    r.weights.insert(r.weights.end(), u.weights.begin(), u.weights.end());
    return r;
}

NodeRule uniform_rule(double a, double b, int cells, int points) {
    if (!(b > a) || cells < 1) throw BadInterval("uniform rule needs a < b and cells >= 1");
    const auto& g = gauss_legendre(points);
    NodeRule r;
    const double h = (b - a) / cells;
    for (int c = 0; c < cells; ++c) {
        const double x0 = a + c * h;
        for (int k = 0; k < points; ++k) {
            r.nodes.push_back(x0 + 0.5 * h * (g.nodes[k] + 1.0));
            r.weights.push_back(0.5 * h * g.weights[k]);
        }
    }
    return r;
}

namespace {

// Product integration of f against y^w on one cell [a, b], 0 <= a < b, with
// f interpolated through the cell rule's nodes.
double cell_product(const std::function<double(double)>& f, double a, double b, double w, CellRule rule,
                    bool mirrored) {
    const double h = b - a;
    // Moments int y^w * (y - c)^k over [a, b] for k = 0, 1 around the cell centre.
    const double c = 0.5 * (a + b);
    double m0 = 0.0;
    double m1 = 0.0;
    if (a == 0.0) {
        const double bw = std::pow(b, w + 1.0);
        m0 = bw / (w + 1.0);
        m1 = b * bw / (w + 2.0) - c * m0;
    } else if (h / a >= 0.25) {
        const double l = std::log1p(h / a);
        m0 = std::pow(a, w + 1.0) * std::expm1((w + 1.0) * l) / (w + 1.0);
        const double j1 = std::pow(a, w + 2.0) * std::expm1((w + 2.0) * l) / (w + 2.0);
        m1 = j1 - c * m0;
    } else {
        const auto& g = gauss_legendre(8);
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
            const double y = c + 0.5 * h * g.nodes[k];
            const double f0 = 0.5 * h * g.weights[k] * std::pow(y, w);
            m0 += f0;
            m1 += f0 * (y - c);
        }
    }
    // In x coordinates the cell is mirrored when rho = 1 - x.
    auto fx = [&](double y) { return mirrored ? f(1.0 - y) : f(y); };
    if (rule == CellRule::Midpoint) return fx(c) * m0;
    const double d = 0.5 * h / std::sqrt(3.0);
    const double f_lo = fx(c - d);
    const double f_hi = fx(c + d);
    const double slope = (f_hi - f_lo) / (2.0 * d);
    return 0.5 * (f_lo + f_hi) * m0 + slope * m1;
}

double weighted_on_edges(const std::function<double(double)>& f, const std::vector<double>& edges,
                         AxisKind kind, double w, CellRule rule) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i];
        double b = edges[i + 1];
        bool mirrored = false;
        if (kind == AxisKind::Interval && a >= 0.5) {
            mirrored = true;
            std::tie(a, b) = std::make_pair(1.0 - b, 1.0 - a);
        }
        sum += cell_product(f, a, b, w, rule, mirrored);
    }
    return sum;
}

}  // namespace

QuadResult integrate_weighted(const std::function<double(double)>& f, const GradedGrid& grid,
                              double weight_power, const QuadSpec& spec) {
    if (!(weight_power > -1.0)) {
        throw NonIntegrableWeight("weight power " + std::to_string(weight_power) +
                                  " is not integrable at the boundary");
    }
    const auto& edges = grid.edges();
    QuadResult r;
    r.value = weighted_on_edges(f, edges, grid.kind(), weight_power, spec.rule);
    // Error estimate from the same rule on every other edge.
    std::vector<double> coarse;
    for (std::size_t i = 0; i < edges.size(); i += 2) coarse.push_back(edges[i]);
    if (coarse.back() != edges.back()) coarse.push_back(edges.back());
    if (coarse.size() >= 2) {
        const double c = weighted_on_edges(f, coarse, grid.kind(), weight_power, spec.rule);
        r.error_estimate = std::abs(r.value - c);
    }
    return r;
}

QuadResult integrate_loggraded(const std::function<double(double)>& f, double a, double b,
                               const QuadSpec& spec) {
    if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) throw BadInterval("log-graded integral needs 0 < a < b < inf");
    spec.validate();
    const auto fine = loggraded_rule(a, b, spec.log_factor, spec.log_points);
    const auto coarse = loggraded_rule(a, b, spec.log_factor * spec.log_factor > 2.0 ? 2.0 : spec.log_factor * spec.log_factor,
                                       std::max(1, spec.log_points - 1));
    QuadResult r;
    r.value = fine.apply(f);
    r.error_estimate = std::abs(r.value - coarse.apply(f));
    return r;
}

}  // namespace wtrace
