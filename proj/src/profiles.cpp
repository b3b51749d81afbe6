#include "wtrace/profiles.hpp"

#include <limits>
#include <numbers>
#include <stdexcept>

#include "wtrace/core.hpp"
#include "wtrace/quad.hpp"

namespace wtrace {

namespace {

ProfileJet standard_bump_jet(const ProfileJet& z) {
    if (std::abs(z.c[0]) >= 1.0) return ProfileJet{};
    const ProfileJet s = ProfileJet::constant(1.0) - z * z;
    return exp(-reciprocal(s));
}

// exp(-1/y) for y > 0, as a jet in y.
ProfileJet sigma_jet(const ProfileJet& y) {
    if (y.c[0] <= 0.0) return ProfileJet{};
    return exp(-reciprocal(y));
}

}  // namespace

ProfileJet Profile1D::jet(double y) const {
    switch (kind) {
        case Kind::Bump: {
            const auto z = ProfileJet::variable((y - center) / width, 1.0 / width);
            return amplitude * standard_bump_jet(z);
        }
        case Kind::Gaussian: {
            const auto z = ProfileJet::variable((y - center) / width, 1.0 / width);
            return amplitude * exp(-(z * z));
        }
        case Kind::OddGaussian: {
            const auto z = ProfileJet::variable((y - center) / width, 1.0 / width);
            return amplitude * (z * exp(-(z * z)));
        }
        case Kind::Constant:
            return ProfileJet::constant(amplitude);
        case Kind::Affine: {
            auto j = ProfileJet::constant(amplitude * (1.0 + width * (y - center)));
            j.c[1] = amplitude * width;
            return j;
        }
    }
    return {};
}

double Profile1D::eval(double y, int order) const {
    if (order < 0 || order > kMaxProfileOrder) {
        throw UnsupportedOrder("profile derivative order " + std::to_string(order) + " not available");
    }
    if (order == 0) {
        switch (kind) {
            case Kind::Bump: {
                const double z = (y - center) / width;
                return std::abs(z) < 1.0 ? amplitude * std::exp(-1.0 / (1.0 - z * z)) : 0.0;
            }
            case Kind::Gaussian: {
                const double z = (y - center) / width;
                return amplitude * std::exp(-z * z);
            }
            case Kind::OddGaussian: {
                const double z = (y - center) / width;
                return amplitude * z * std::exp(-z * z);
            }
            default:
                break;
        }
    }
    return jet(y).derivative(order);
}

double standard_bump_mass() {
    static const double mass = [] {
        const auto rule = uniform_rule(-1.0, 1.0, 16, 16);
        return rule.apply([](double z) { return std::abs(z) < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0; });
    }();
    return mass;
}

double Profile1D::tail_integral(double y) const {
    switch (kind) {
        case Kind::Gaussian:
            return amplitude * width * 0.5 * std::sqrt(std::numbers::pi) * std::erfc((y - center) / width);
        case Kind::OddGaussian: {
            const double z = (y - center) / width;
            return amplitude * width * 0.5 * std::exp(-z * z);
        }
        case Kind::Bump: {
            const double lo = std::max(y, center - width);
            const double hi = center + width;
            if (lo >= hi) return 0.0;
            const auto rule = uniform_rule(lo, hi, 8, 16);
            return rule.apply([this](double x) { return eval(x); });
        }
        default:
            throw ValidationError("tail integral of a non-decaying profile is infinite");
    }
}

double Profile1D::total_integral() const {
    switch (kind) {
        case Kind::Gaussian:
            return amplitude * width * std::sqrt(std::numbers::pi);
        case Kind::OddGaussian:
            return 0.0;
        case Kind::Bump:
            return amplitude * width * standard_bump_mass();
        default:
            throw ValidationError("integral of a non-decaying profile is infinite");
    }
}

std::pair<double, double> Profile1D::support() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (kind) {
        case Kind::Bump:
            return {center - width, center + width};
        case Kind::Gaussian:
        case Kind::OddGaussian:
            return {center - std::sqrt(40.0) * width, center + std::sqrt(40.0) * width};
        default:
            return {-inf, inf};
    }
}

Profile1D Profile1D::shifted(double by) const {
    Profile1D p = *this;
    p.center += by;
    return p;
}

Profile1D Profile1D::dilated(double lambda) const {
    Profile1D p = *this;
    if (kind == Kind::Affine) {
        p.width /= lambda;
    } else if (kind != Kind::Constant) {
        p.width *= lambda;
    }
    p.center *= lambda;
    return p;
}

ProfileJet cutoff_jet(double x) {
    if (x <= 1.0) return ProfileJet::constant(1.0);
    if (x >= 2.0) return ProfileJet{};
    const auto v = ProfileJet::variable(x);
    const auto a = sigma_jet(ProfileJet::constant(2.0) - v);
    const auto b = sigma_jet(v - ProfileJet::constant(1.0));
    return a / (a + b);
}

double cutoff(double x, int order) {
    if (order < 0 || order > kMaxProfileOrder) throw UnsupportedOrder("cutoff derivative order too high");
    return cutoff_jet(x).derivative(order);
}

}  // namespace wtrace
