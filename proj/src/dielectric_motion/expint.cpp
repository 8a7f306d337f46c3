#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "gph/dielectric_motion.hpp"

namespace gph {

namespace {

constexpr double kEuler = 0.57721566490153286060651209;

cplx e1_series(cplx z) {
    cplx sum{0.0, 0.0};
    cplx term{1.0, 0.0};
    for (int k = 1; k < 500; ++k) {
        term *= -z / static_cast<double>(k);
        const cplx add = term / static_cast<double>(k);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return -kEuler - std::log(z) - sum;
}

// Modified Lentz evaluation of 1 / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))) = e^z E1(z).
cplx e1_fraction_scaled(cplx z) {
    const double tiny = 1e-300;
    cplx b = z + 1.0;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 20000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw NoConvergence("E1 continued fraction did not converge");
}

// Next to the negative real axis the fraction converges slowly while the
// series stays accurate (the result itself grows like e^{|z|}).
bool series_region(cplx z) {
    const double r = std::abs(z);
    return r < 4.0 || (z.real() < 0.0 && std::abs(z.imag()) < 0.3 * -z.real() && r < 60.0);
}

}  // namespace

cplx expint_e1(cplx z) {
    if (z == cplx{0.0, 0.0}) throw DomainError("E1 is singular at z = 0");
    if (series_region(z)) {
        // std::log of (x, -0.0) lands on the lower side; values on the cut are taken from above.
        if (z.imag() == 0.0 && z.real() < 0.0) z = cplx{z.real(), 0.0};
        return e1_series(z);
    }
    return e1_fraction_scaled(z) * std::exp(-z);
}

namespace {

// e^z E1(z) without forming the two factors separately.
cplx e1_scaled(cplx z) {
    if (series_region(z)) return std::exp(z) * expint_e1(z);
    return e1_fraction_scaled(z);
}

// e^{-x} Ei(x) for x > 0.
double ei_scaled(double x) {
    if (x < 40.0) return std::exp(-x) * std::expint(x);
    double term = 1.0 / x, sum = term;
    for (int k = 1; k < 40; ++k) {
        const double next = term * k / x;
        if (next > term) break;
        term = next;
        sum += term;
    }
    return sum;
}

}  // namespace

cplx omega_r(double G) {
    if (G < 0.0) throw DomainError("negative dissipation rate");
    if (G <= 2.0) return 0.5 * cplx{std::sqrt(4.0 - G * G), G};
    return 0.5 * cplx{0.0, G + std::sqrt(G * G - 4.0)};
}

double frequency_integral(int m, double G, double tau) {
    if (m != 0 && m != 1) throw std::invalid_argument("kernel index must be 0 or 1");
    if (tau < 0.0) throw DomainError("frequency integral needs tau >= 0");
    if (G <= 0.0) throw DomainError("frequency integral needs Gamma > 0");

    if (std::abs(G - 2.0) < 1e-3) {
        // Double pole: both closed forms lose digits; integrate directly.
        auto L = [G](double w) { return G * w / ((w * w - 1.0) * (w * w - 1.0) + G * G * w * w); };
        if (tau == 0.0) {
            if (m == 1) return 0.0;
            return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(L, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12);
        }
        if (m == 0) {
            static thread_local boost::math::quadrature::ooura_fourier_cos<double> oc;
            return oc.integrate(L, tau).first;
        }
        static thread_local boost::math::quadrature::ooura_fourier_sin<double> os;
        return os.integrate(L, tau).first;
    }

    if (G < 2.0) {
        const double s = std::sqrt(4.0 - G * G);
        const cplx w = omega_r(G);
        if (tau == 0.0) return m == 1 ? 0.0 : (pi - 2.0 * std::atan2(G, s)) / s;
        const cplx ph = std::exp(I * w * tau);
        double out = (pi / s) * (m == 0 ? ph.real() : ph.imag());
        if (m == 0) {
            const cplx z = I * w * tau;
            const cplx F = e1_scaled(z) + e1_scaled(-z);
            out += F.imag() / s;
        }
        return out;
    }

    // Gamma > 2: both poles on the imaginary axis, w = i kappa_{1,2}. The
    // imaginary parts picked up on the E1 cut cancel against the first term.
    const double sg = std::sqrt(G * G - 4.0);
    const double k1 = 0.5 * (G + sg), k2 = 0.5 * (G - sg);
    if (m == 1) return pi * (std::exp(-k2 * tau) - std::exp(-k1 * tau)) / (2.0 * sg);
    if (tau == 0.0) return std::log(k1 / k2) / sg;
    // e^{-x} (-Ei(x)) + e^{x} E1(x), the real parts on and off the cut
    auto F = [tau](double k) {
        const double x = k * tau;
        return -ei_scaled(x) + e1_scaled(cplx{x, 0.0}).real();
    };
    return (F(k2) - F(k1)) / (2.0 * sg);
}

}  // namespace gph
