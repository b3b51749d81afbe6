#include "wtrace/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wtrace/quad.hpp"

namespace wtrace {

WeightParams WeightParams::make(double p, double theta, int n) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ValidationError("exponent p must satisfy 1 < p < inf, got " + std::to_string(p));
    }
    if (n != 1 && n != 2) {
        throw ValidationError("dimension n must be 1 or 2, got " + std::to_string(n));
    }
    const double lo = n - 1.0;
    const double hi = n - 1.0 + p;
    if (!(theta > lo && theta < hi)) {
        std::ostringstream os;
        os << "theta = " << theta << " outside the admissible window (" << lo << ", " << hi
           << ") for p = " << p << ", n = " << n;
        throw OutOfRangeTheta(os.str());
    }
    const double s = (p - theta + n - 1.0) / p;
    return WeightParams(p, theta, n, s);
}

WeightParams WeightParams::shifted(double delta) const {
    const double theta = theta_ + delta;
    return WeightParams(p_, theta, n_, (p_ - theta + n_ - 1.0) / p_);
}

Domain Domain::half_space(int n) {
    if (n != 1 && n != 2) throw DimensionMismatch("half space dimension must be 1 or 2");
    Domain d;
    d.kind = DomainKind::HalfSpace;
    d.n = n;
    return d;
}

Domain Domain::unit_interval() {
    Domain d;
    d.kind = DomainKind::UnitInterval;
    d.n = 1;
    d.x1_max = 1.0;
    d.t_min = 0.0;
    d.t_max = 1.0;
    return d;
}

double Domain::rho(std::span<const double> x) const {
    if (x.empty()) throw DimensionMismatch("rho needs at least one coordinate");
    if (kind == DomainKind::HalfSpace) return std::max(0.0, x[0]);
    return std::max(0.0, std::min(x[0], 1.0 - x[0]));
}

// ---------------------------------------------------------------------------

UniformAxis::UniformAxis(double a, double b, int cells) : a_(a), b_(b), cells_(cells) {
    if (!(b > a) || cells < 1) throw BadInterval("uniform axis needs a < b and at least one cell");
    const double h = (b - a) / cells;
    nodes_.resize(cells + 1);
    weights_.assign(cells + 1, h);
    for (int i = 0; i <= cells; ++i) nodes_[i] = a + i * h;
    nodes_.back() = b;
    weights_.front() = weights_.back() = 0.5 * h;
}

UniformAxis UniformAxis::coarsened() const {
    if (cells_ % 2 != 0) throw ValidationError("cannot coarsen an axis with an odd cell count");
    return UniformAxis(a_, b_, cells_ / 2);
}

namespace {

// Moments of y^w over [a, b] (0 <= a < b): I0 = int y^w, I1 = int y^w (y-a)/(b-a).
std::pair<double, double> cell_moments(double a, double b, double w) {
    const double h = b - a;
    if (a == 0.0) {
        const double bw = std::pow(b, w + 1.0);
        return {bw / (w + 1.0), bw / (w + 2.0)};
    }
    if (h / a >= 0.25) {
        const double l = std::log1p(h / a);
        const double i0 = std::pow(a, w + 1.0) * std::expm1((w + 1.0) * l) / (w + 1.0);
        const double j1 = std::pow(a, w + 2.0) * std::expm1((w + 2.0) * l) / (w + 2.0);
        return {i0, (j1 - a * i0) / h};
    }
    const auto& rule = gauss_legendre(6);
    double i0 = 0.0;
    double i1 = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double u = 0.5 * (rule.nodes[k] + 1.0);
        const double y = a + h * u;
        const double f = 0.5 * h * rule.weights[k] * std::pow(y, w);
        i0 += f;
        i1 += f * u;
    }
    return {i0, i1};
}

}  // namespace

GradedGrid GradedGrid::half_line(double x_max, int cells, double q, bool include_boundary_node) {
    if (!(x_max > 0.0) || cells < 2) throw BadInterval("graded half line needs x_max > 0 and >= 2 cells");
    if (!(q >= 1.0)) throw ValidationError("grading exponent q must be >= 1");
    GradedGrid g;
    g.kind_ = AxisKind::HalfLine;
    g.x_max_ = x_max;
    g.q_ = q;
    g.include_boundary_ = include_boundary_node;
    g.edges_.resize(cells + 1);
    for (int j = 0; j <= cells; ++j) {
        g.edges_[j] = x_max * std::pow(static_cast<double>(j) / cells, q);
    }
    g.edges_.back() = x_max;
    if (include_boundary_node) g.nodes_.push_back(0.0);
    g.nodes_.insert(g.nodes_.end(), g.edges_.begin() + 1, g.edges_.end());
    g.weights_ = g.weighted_weights(0.0);
    return g;
}

GradedGrid GradedGrid::interval(int cells_per_half, double q, bool include_boundary_nodes) {
    if (cells_per_half < 1) throw BadInterval("interval grid needs at least one cell per half");
    if (!(q >= 1.0)) throw ValidationError("grading exponent q must be >= 1");
    GradedGrid g;
    g.kind_ = AxisKind::Interval;
    g.x_max_ = 1.0;
    g.q_ = q;
    g.include_boundary_ = include_boundary_nodes;
    const int m = cells_per_half;
    g.edges_.resize(2 * m + 1);
    for (int j = 0; j <= m; ++j) {
        const double e = 0.5 * std::pow(static_cast<double>(j) / m, q);
        g.edges_[j] = e;
        g.edges_[2 * m - j] = 1.0 - e;
    }
    g.edges_[m] = 0.5;
    if (include_boundary_nodes) {
        g.nodes_ = g.edges_;
    } else {
        g.nodes_.assign(g.edges_.begin() + 1, g.edges_.end() - 1);
    }
    g.weights_ = g.weighted_weights(0.0);
    return g;
}

double GradedGrid::rho(double x) const {
    if (kind_ == AxisKind::HalfLine) return std::max(0.0, x);
    return std::max(0.0, std::min(x, 1.0 - x));
}

bool GradedGrid::is_boundary_node(std::size_t i) const {
    if (!include_boundary_) return false;
    if (kind_ == AxisKind::HalfLine) return i == 0;
    return i == 0 || i + 1 == nodes_.size();
}

std::vector<std::size_t> GradedGrid::nearest_interior(std::size_t count) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size() && out.size() < count; ++i) {
        if (!is_boundary_node(i)) out.push_back(i);
    }
    return out;
}

std::vector<double> GradedGrid::weighted_weights(double power) const {
    if (!(power > -1.0)) {
        throw NonIntegrableWeight("rho^" + std::to_string(power) + " is not integrable at the boundary");
    }
    std::vector<double> w(nodes_.size(), 0.0);
    const std::size_t offset = include_boundary_ ? 1 : 0;
    const std::size_t ncell = edges_.size() - 1;
    // Quadrature node index of edge e_j (j = 1..ncell-1, plus ncell for the half line).
    auto node_of_edge = [&](std::size_t j) { return offset + (j - 1); };

    for (std::size_t c = 0; c < ncell; ++c) {
        double a = edges_[c];
        double b = edges_[c + 1];
        bool mirrored = false;
        if (kind_ == AxisKind::Interval && a >= 0.5) {
            mirrored = true;
            std::tie(a, b) = std::make_pair(1.0 - b, 1.0 - a);
        }
        const auto [i0, i1] = cell_moments(a, b, power);
        // Hat weights on the cell in rho coordinates: `lo` sits at rho = a.
        const double w_lo = i0 - i1;
        const double w_hi = i1;
        const bool first = (c == 0);
        const bool last = (c + 1 == ncell);
        if (kind_ == AxisKind::HalfLine) {
            if (first) {
                w[node_of_edge(1)] += i0;
            } else {
                w[node_of_edge(c)] += w_lo;
                w[node_of_edge(c + 1)] += w_hi;
            }
            continue;
        }
        if (first) {
            w[node_of_edge(1)] += i0;
        } else if (last) {
            w[node_of_edge(ncell - 1)] += i0;
        } else if (!mirrored) {
            w[node_of_edge(c)] += w_lo;
            w[node_of_edge(c + 1)] += w_hi;
        } else {
            // rho = 1 - x: the left x-edge has the larger rho.
            w[node_of_edge(c + 1)] += w_lo;
            w[node_of_edge(c)] += w_hi;
        }
    }
    return w;
}

std::string GradedGrid::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << (kind_ == AxisKind::HalfLine ? "halfline" : "interval") << ":x_max=" << x_max()
       << ":cells=" << (edges_.size() - 1) << ":q=" << q_ << ":bnd=" << include_boundary_;
    return os.str();
}

bool GradedGrid::can_coarsen() const {
    const std::size_t ncell = edges_.size() - 1;
    if (kind_ == AxisKind::HalfLine) return ncell % 2 == 0 && ncell >= 4;
    return ncell % 4 == 0;
}

std::pair<GradedGrid, std::vector<std::size_t>> GradedGrid::coarsened() const {
    if (!can_coarsen()) throw ValidationError("graded grid cannot be coarsened");
    GradedGrid g = *this;
    g.edges_.clear();
    for (std::size_t j = 0; j < edges_.size(); j += 2) g.edges_.push_back(edges_[j]);
    std::vector<std::size_t> map;
    const std::size_t offset = include_boundary_ ? 1 : 0;
    g.nodes_.clear();
    if (include_boundary_) {
        g.nodes_.push_back(edges_.front());
        map.push_back(0);
    }
    const std::size_t last = kind_ == AxisKind::HalfLine ? edges_.size() - 1 : edges_.size() - 2;
    for (std::size_t j = 2; j <= last; j += 2) {
        g.nodes_.push_back(edges_[j]);
        map.push_back(offset + j - 1);
    }
    if (kind_ == AxisKind::Interval && include_boundary_) {
        g.nodes_.push_back(edges_.back());
        map.push_back(nodes_.size() - 1);
    }
    g.weights_ = g.weighted_weights(0.0);
    return {std::move(g), std::move(map)};
}

// ---------------------------------------------------------------------------

SpaceTimeGrid::SpaceTimeGrid(std::optional<UniformAxis> time, GradedGrid normal,
                             std::optional<UniformAxis> tangential, int n)
    : time_(std::move(time)), normal_(std::move(normal)), tangential_(std::move(tangential)), n_(n) {
    if (n != 1 && n != 2) throw DimensionMismatch("space-time grid dimension must be 1 or 2");
    if (n == 2 && !tangential_) throw DimensionMismatch("n = 2 grid needs a tangential axis");
    if (n == 1 && tangential_) throw DimensionMismatch("n = 1 grid cannot carry a tangential axis");
}

Point SpaceTimeGrid::point(std::size_t it, std::size_t ix, std::size_t ip) const {
    Point p;
    p.t = time_ ? time_->node(it) : 0.0;
    p.x1 = normal_.node(ix);
    p.xp = tangential_ ? tangential_->node(ip) : 0.0;
    return p;
}

std::vector<double> SpaceTimeGrid::weights(double power) const {
    const auto wx = normal_.weighted_weights(power);
    std::vector<double> w(size());
    for (std::size_t it = 0; it < nt(); ++it) {
        const double wt = time_ ? time_->weights()[it] : 1.0;
        for (std::size_t ix = 0; ix < nx(); ++ix) {
            for (std::size_t ip = 0; ip < np(); ++ip) {
                const double wp = tangential_ ? tangential_->weights()[ip] : 1.0;
                w[index(it, ix, ip)] = wt * wx[ix] * wp;
            }
        }
    }
    return w;
}

std::string SpaceTimeGrid::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "n=" << n_;
    if (time_) os << ";t=[" << time_->a() << "," << time_->b() << "]x" << time_->cells();
    os << ";x1=" << normal_.describe();
    if (tangential_) {
        os << ";xp=[" << tangential_->a() << "," << tangential_->b() << "]x" << tangential_->cells();
    }
    return os.str();
}

std::optional<std::pair<SpaceTimeGrid, std::vector<std::size_t>>> SpaceTimeGrid::coarsened() const {
    if (!normal_.can_coarsen()) return std::nullopt;
    if (time_ && time_->cells() % 2 != 0) return std::nullopt;
    if (tangential_ && tangential_->cells() % 2 != 0) return std::nullopt;
    auto [normal, xmap] = normal_.coarsened();
    std::optional<UniformAxis> time;
    std::optional<UniformAxis> tang;
    if (time_) time = time_->coarsened();
    if (tangential_) tang = tangential_->coarsened();
    SpaceTimeGrid coarse(time, std::move(normal), tang, n_);
    std::vector<std::size_t> map(coarse.size());
    for (std::size_t it = 0; it < coarse.nt(); ++it) {
        for (std::size_t ix = 0; ix < coarse.nx(); ++ix) {
            for (std::size_t ip = 0; ip < coarse.np(); ++ip) {
                map[coarse.index(it, ix, ip)] = index(time_ ? 2 * it : 0, xmap[ix], tangential_ ? 2 * ip : 0);
            }
        }
    }
    return std::make_pair(std::move(coarse), std::move(map));
}

std::string descriptor_hash(const std::string& descriptor) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : descriptor) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace wtrace
