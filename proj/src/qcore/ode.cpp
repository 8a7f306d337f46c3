#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "gph/qcore.hpp"

namespace gph {

namespace odeint = boost::numeric::odeint;

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

std::vector<RealState> integrate_ode(const RealRhs& rhs, RealState y0, double t0,
                                     const std::vector<double>& sample_times, const OdeControl& ctrl) {
    std::vector<RealState> out;
    if (sample_times.empty()) return out;
    out.reserve(sample_times.size());
    const double t_end = sample_times.back();
    const double span = t_end - t0;
    if (span < 0.0 || sample_times.front() < t0) throw std::invalid_argument("sample times precede t0");

    std::size_t next = 0;
    while (next < sample_times.size() && sample_times[next] <= t0) {
        out.push_back(y0);
        ++next;
    }
    if (next == sample_times.size()) return out;

    auto system = [&rhs](const RealState& y, RealState& dy, double t) { rhs(y, dy, t); };
    auto stepper = odeint::make_dense_output(ctrl.atol, ctrl.rtol, odeint::runge_kutta_dopri5<RealState>());
    const double h0 = ctrl.initial_step > 0.0 ? ctrl.initial_step : std::max(span * 1e-6, 1e-12);
    stepper.initialize(y0, t0, h0);

    RealState y(y0.size());
    const double min_step = 1e-15 * span;
    while (next < sample_times.size()) {
        std::pair<double, double> step;
        try {
            step = stepper.do_step(system);
        } catch (const odeint::step_adjustment_error& e) {
            throw StepSizeUnderflow(std::string("step adjustment failed: ") + e.what());
        }
        const double width = step.second - step.first;
        if (!(width > min_step) && step.second < t_end)
            throw StepSizeUnderflow("required step " + std::to_string(width) + " below 1e-15 of the span");
        for (double v : stepper.current_state())
            if (!std::isfinite(v)) throw StepSizeUnderflow("non-finite state during integration");
        while (next < sample_times.size() && sample_times[next] <= step.second) {
            stepper.calc_state(sample_times[next], y);
            out.push_back(y);
            ++next;
        }
    }
    return out;
}

std::vector<CVec> integrate_ode(const ComplexRhs& rhs, const CVec& y0, double t0,
                                const std::vector<double>& sample_times, const OdeControl& ctrl) {
    const Eigen::Index n = y0.size();
    RealState r0(2 * n);
    Eigen::Map<CVec>(reinterpret_cast<cplx*>(r0.data()), n) = y0;
    CVec ybuf(n), dybuf(n);
    RealRhs real = [&](const RealState& y, RealState& dy, double t) {
        ybuf = Eigen::Map<const CVec>(reinterpret_cast<const cplx*>(y.data()), n);
        rhs(t, ybuf, dybuf);
        Eigen::Map<CVec>(reinterpret_cast<cplx*>(dy.data()), n) = dybuf;
    };
    auto raw = integrate_ode(real, r0, t0, sample_times, ctrl);
    std::vector<CVec> out;
    out.reserve(raw.size());
    for (const auto& r : raw) out.emplace_back(Eigen::Map<const CVec>(reinterpret_cast<const cplx*>(r.data()), n));
    return out;
}

std::vector<CMat> integrate_matrix_ode(const MatrixRhs& rhs, const CMat& rho0, double t0,
                                       const std::vector<double>& sample_times, const OdeControl& ctrl) {
    const Eigen::Index r = rho0.rows(), c = rho0.cols();
    RealState r0(2 * r * c);
    Eigen::Map<CMat>(reinterpret_cast<cplx*>(r0.data()), r, c) = rho0;
    CMat mbuf(r, c), dmbuf(r, c);
    RealRhs real = [&](const RealState& y, RealState& dy, double t) {
        mbuf = Eigen::Map<const CMat>(reinterpret_cast<const cplx*>(y.data()), r, c);
        rhs(t, mbuf, dmbuf);
        Eigen::Map<CMat>(reinterpret_cast<cplx*>(dy.data()), r, c) = dmbuf;
    };
    auto raw = integrate_ode(real, r0, t0, sample_times, ctrl);
    std::vector<CMat> out;
    out.reserve(raw.size());
    for (const auto& x : raw) out.emplace_back(Eigen::Map<const CMat>(reinterpret_cast<const cplx*>(x.data()), r, c));
    return out;
}

}  // namespace gph
