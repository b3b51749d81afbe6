"""Independent reference values for the unit tests.

Run with `python3 tests/oracles/oracles.py`; the output is frozen in
tests/oracles/frozen_values.txt and copied into the C++ tests.
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 30


def show(name, value):
    print(f"{name} = {mp.nstr(value, 17)}")


def weighted_gamma():
    # int_0^inf x^2 e^{-2x} x^{-1/2} dx
    v = mp.quad(lambda x: x**2 * mp.e**(-2 * x) * x**-0.5, [0, 1, 10, mp.inf])
    show("gamma_weighted_integral", v)
    show("gamma_weighted_closed_form", mp.gamma(2.5) / 2**2.5)
    show("lp_theta_x_exp_p2_theta05", mp.sqrt(v))


def loggraded_examples():
    show("int_inv_sqrt_1e-6_1", mp.quad(lambda t: t**-0.5, [1e-6, 1e-3, 1]))
    show("int_inv_0.1_1", mp.quad(lambda t: 1 / t, [0.1, 1]))


def hardy_x_exp():
    num = mp.quad(lambda x: (x * mp.e**-x) ** 2 * x**-0.5, [0, 1, 10, mp.inf])
    den = mp.quad(lambda x: ((1 - x) * mp.e**-x) ** 2 * x**1.5, [0, 1, 10, mp.inf])
    show("hardy_x_exp_numerator", num)
    show("hardy_x_exp_denominator", den)
    show("hardy_x_exp_ratio", num / den)
    show("sobolev1_x_exp_p2_theta05", mp.sqrt(num + den))


def hardy_unit_interval():
    rho = lambda x: min(x, 1 - x)
    num = mp.quad(lambda x: (x * (1 - x)) ** 2 * rho(x) ** -0.5, [0, 0.5, 1])
    den = mp.quad(lambda x: (1 - 2 * x) ** 2 * rho(x) ** 1.5, [0, 0.5, 1])
    show("hardy_x_one_minus_x_ratio", num / den)


def gaussian_seminorms():
    # g(t) = exp(-((t - 1) / w)^2), p = 2, theta = 0.5, n = 1: s = 0.75,
    # [g]^2 = 2 int_0^inf tau^{-1-s} int |g(t + tau) - g(t)|^2 dt dtau.
    w = mp.mpf("0.5")
    s = mp.mpf("0.75")
    g = lambda t: mp.e ** (-((t - 1) / w) ** 2)
    diff = lambda tau: mp.quad(lambda t: (g(t + tau) - g(t)) ** 2, [-mp.inf, 1 - tau, 1, mp.inf])
    semi2 = 2 * mp.quad(lambda tau: tau ** (-1 - s) * diff(tau), [0, 0.1, 1, 5, mp.inf])
    closed = 2 * 2 * w * mp.sqrt(mp.pi / 2) * (1 / (2 * w**2)) ** (s / 2) * mp.gamma(1 - s / 2) / s
    lp = mp.sqrt(mp.quad(lambda t: g(t) ** 2, [-mp.inf, 1, mp.inf]))
    show("gauss_time_seminorm", mp.sqrt(semi2))
    show("gauss_time_seminorm_closed_form", mp.sqrt(closed))
    show("gauss_lp_norm", lp)
    show("gauss_slobodeckij_n1", lp + mp.sqrt(semi2))

    # n = 2, theta = 1.5, p = 2: s = 0.75. g(t, y) = A(t) B(y) with Gaussians
    # A = exp(-((t - 1)/0.5)^2), B = exp(-(y/0.8)^2); the space kernel is
    # |x' - y'|^{-(1 + sp)} over both orders of (x', y').
    wb = mp.mpf("0.8")
    B = lambda y: mp.e ** (-((y / wb) ** 2))
    a2 = mp.quad(lambda t: g(t) ** 2, [-mp.inf, 1, mp.inf])
    bdiff = lambda tau: mp.quad(lambda y: (B(y + tau) - B(y)) ** 2, [-mp.inf, -tau, 0, mp.inf])
    space2 = a2 * 2 * mp.quad(lambda tau: tau ** (-1 - 2 * s) * bdiff(tau), [0, 0.1, 1, 5, mp.inf])
    show("plane_space_seminorm", mp.sqrt(space2))


def kernel_values():
    show("kernel_t1_x1_n1", (4 * mp.pi) ** -0.5 * mp.e**-0.25)
    show("kernel_t1_x1_n2", (4 * mp.pi) ** -1 * mp.e**-0.25)


def mollifier_moment():
    # eta(z) = exp(-1/(1 - ((z + 3/4)/(1/4))^2)) on (-1, -1/2); m = int (-z) eta / int eta.
    eta = lambda z: mp.e ** (-1 / (1 - ((z + 0.75) / 0.25) ** 2)) if abs((z + 0.75) / 0.25) < 1 else 0
    m = mp.quad(lambda z: -z * eta(z), [-1, -0.75, -0.5]) / mp.quad(eta, [-1, -0.75, -0.5])
    show("mollifier_normal_moment", m)


def divergence_manufactured():
    t, x, r = sp.symbols("t x r")
    u = t * x * (1 - x) + t * x
    # -u_t + D(Du) = D f1 with b = 0: f1 = Du - int_0^x u_t.
    f1 = sp.diff(u, x) - sp.integrate(sp.diff(u, t).subs(x, r), (r, 0, x))
    f1 = sp.expand(f1)
    check = sp.simplify(-sp.diff(u, t) + sp.diff(u, x, 2) - sp.diff(f1, x))
    print(f"divergence_manufactured_f1 = {f1}")
    print(f"divergence_manufactured_check = {check}")


if __name__ == "__main__":
    weighted_gamma()
    loggraded_examples()
    hardy_x_exp()
    hardy_unit_interval()
    gaussian_seminorms()
    kernel_values()
    mollifier_moment()
    divergence_manufactured()
