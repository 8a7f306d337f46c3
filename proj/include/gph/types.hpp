#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace gph {

template <class S> using Complex = std::complex<S>;
template <class S> using CVecT = Eigen::Matrix<std::complex<S>, Eigen::Dynamic, 1>;
template <class S> using CMatT = Eigen::Matrix<std::complex<S>, Eigen::Dynamic, Eigen::Dynamic>;

using cplx = std::complex<double>;
using CVec = CVecT<double>;
using CMat = CMatT<double>;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Pauli matrices in the basis {|1>, |0>} with |1> (spin up) at index 0.
template <class S = double> Eigen::Matrix<Complex<S>, 2, 2> sigma_x() {
    Eigen::Matrix<Complex<S>, 2, 2> m;
    m << S(0), S(1), S(1), S(0);
    return m;
}
template <class S = double> Eigen::Matrix<Complex<S>, 2, 2> sigma_y() {
    Eigen::Matrix<Complex<S>, 2, 2> m;
    m << S(0), Complex<S>(0, -1), Complex<S>(0, 1), S(0);
    return m;
}
template <class S = double> Eigen::Matrix<Complex<S>, 2, 2> sigma_z() {
    Eigen::Matrix<Complex<S>, 2, 2> m;
    m << S(1), S(0), S(0), S(-1);
    return m;
}
// sigma_plus raises |0> to |1>.
template <class S = double> Eigen::Matrix<Complex<S>, 2, 2> sigma_plus() {
    Eigen::Matrix<Complex<S>, 2, 2> m;
    m << S(0), S(1), S(0), S(0);
    return m;
}
template <class S = double> Eigen::Matrix<Complex<S>, 2, 2> sigma_minus() {
    return sigma_plus<S>().transpose();
}

template <class A, class B>
CMatT<typename A::RealScalar> kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    using S = typename A::RealScalar;
    CMatT<S> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.template cast<Complex<S>>();
    return out;
}

// Reduces an angle to (-pi, pi].
inline double wrap_phase(double x) {
    double y = std::remainder(x, 2.0 * pi);
    if (y <= -pi) y += 2.0 * pi;
    return y;
}

}  // namespace gph
