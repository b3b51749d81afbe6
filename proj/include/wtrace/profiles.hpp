#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace wtrace {

/// Truncated Taylor jet: c[k] = f^{(k)}(y0) / k!. Enough arithmetic to
/// differentiate the shipped smooth profiles exactly up to order N.
template <int N>
struct Jet {
    std::array<double, N + 1> c{};

    static Jet variable(double y0, double slope = 1.0) {
        Jet j;
        j.c[0] = y0;
        if constexpr (N >= 1) j.c[1] = slope;
        return j;
    }
    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }

    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return c[k] * f;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= N; ++k) r.c[k] = a.c[k] + b.c[k];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= N; ++k) r.c[k] = a.c[k] - b.c[k];
        return r;
    }
    friend Jet operator-(const Jet& a) {
        Jet r;
        for (int k = 0; k <= N; ++k) r.c[k] = -a.c[k];
        return r;
    }
    friend Jet operator*(double s, const Jet& a) {
        Jet r;
        for (int k = 0; k <= N; ++k) r.c[k] = s * a.c[k];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= N; ++k) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
            r.c[k] = s;
        }
        return r;
    }
    friend Jet reciprocal(const Jet& a) {
        Jet r;
        r.c[0] = 1.0 / a.c[0];
        for (int k = 1; k <= N; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += a.c[j] * r.c[k - j];
            r.c[k] = -s * r.c[0];
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet exp(const Jet& a) {
        Jet r;
        r.c[0] = std::exp(a.c[0]);
        for (int k = 1; k <= N; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += j * a.c[j] * r.c[k - j];
            r.c[k] = s / k;
        }
        return r;
    }
};

inline constexpr int kMaxProfileOrder = 4;
using ProfileJet = Jet<kMaxProfileOrder>;

/// One-dimensional smooth profile with exact derivatives.
///
///   Bump:     A exp(-1 / (1 - z^2)) for |z| < 1, z = (y - c) / w, else 0
///   Gaussian: A exp(-z^2)
///   OddGaussian: A z exp(-z^2)
///   Constant: A
///   Affine:   A (1 + w (y - c))   (w is the slope here)
struct Profile1D {
    enum class Kind { Bump, Gaussian, OddGaussian, Constant, Affine };

    Kind kind = Kind::Gaussian;
    double center = 0.0;
    double width = 1.0;
    double amplitude = 1.0;

    static Profile1D bump(double center, double width, double amplitude = 1.0) {
        return {Kind::Bump, center, width, amplitude};
    }
    static Profile1D gaussian(double center, double width, double amplitude = 1.0) {
        return {Kind::Gaussian, center, width, amplitude};
    }
    static Profile1D odd_gaussian(double center, double width, double amplitude = 1.0) {
        return {Kind::OddGaussian, center, width, amplitude};
    }
    static Profile1D constant(double amplitude) { return {Kind::Constant, 0.0, 1.0, amplitude}; }
    static Profile1D affine(double center, double slope, double amplitude = 1.0) {
        return {Kind::Affine, center, slope, amplitude};
    }

    /// k-th derivative at y, 0 <= k <= kMaxProfileOrder.
    double eval(double y, int order = 0) const;

    /// All derivatives up to kMaxProfileOrder at y.
    ProfileJet jet(double y) const;

    /// Integral of the profile over [y, inf); finite for the decaying kinds.
    double tail_integral(double y) const;

    /// Integral over the whole line (decaying kinds).
    double total_integral() const;

    /// Interval outside of which the profile vanishes (Bump) or drops below
    /// exp(-40) relative (Gaussian kinds); the whole line otherwise.
    std::pair<double, double> support() const;

    /// Translated copy.
    Profile1D shifted(double by) const;
    /// Copy with the argument scaled: y -> y / lambda.
    Profile1D dilated(double lambda) const;
};

/// Smooth cutoff equal to 1 for x <= 1 and 0 for x >= 2:
/// zeta(x) = sig(2 - x) / (sig(2 - x) + sig(x - 1)), sig(y) = exp(-1/y) 1_{y>0}.
double cutoff(double x, int order = 0);
ProfileJet cutoff_jet(double x);

/// The standard bump exp(-1/(1-z^2)) integrated over (-1, 1).
double standard_bump_mass();

}  // namespace wtrace
