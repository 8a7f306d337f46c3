#include "gph/qcore.hpp"

namespace gph {

DensityDiagnostics diagnose(const CMat& rho) {
    DensityDiagnostics d{};
    d.trace_error = std::abs(rho.trace() - cplx(1.0));
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

DensityMatrix::DensityMatrix(CMat m, double trace_tol, double psd_tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) throw InvalidState("density matrix must be square");
    const auto d = diagnose(m_);
    if (d.hermiticity_error > 1e-12 * std::max(1.0, m_.cwiseAbs().maxCoeff()))
        throw InvalidState("density matrix not Hermitian (" + std::to_string(d.hermiticity_error) + ")");
    if (d.trace_error > trace_tol) throw InvalidState("density matrix trace deviates from 1");
    if (d.min_eigenvalue < -psd_tol) throw InvalidState("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const CVec& psi) {
    const CVec u = psi.normalized();
    return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::unchecked(CMat m) {
    DensityMatrix d;
    d.m_ = std::move(m);
    return d;
}

double trace_distance(const CMat& a, const CMat& b) {
    const CMat d = a - b;
    const Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

CMat lindblad_rhs(const CMat& H, const std::vector<CMat>& jumps, const CMat& rho) {
    CMat out = -I * (H * rho - rho * H);
    for (const auto& L : jumps) {
        const CMat LdL = L.adjoint() * L;
        out += L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
    }
    return out;
}

std::vector<CMat> lindblad_evolve(const std::function<CMat(double)>& hamiltonian,
                                  const std::function<std::vector<CMat>(double)>& jumps, const CMat& rho0,
                                  double t0, const std::vector<double>& times, const OdeControl& ctrl) {
    MatrixRhs rhs = [&](double t, const CMat& rho, CMat& drho) {
        drho = lindblad_rhs(hamiltonian(t), jumps(t), rho);
    };
    return integrate_matrix_ode(rhs, rho0, t0, times, ctrl);
}

}  // namespace gph
