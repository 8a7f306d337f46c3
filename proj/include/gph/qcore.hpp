#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gph/errors.hpp"
#include "gph/types.hpp"

namespace gph {

// ---- eigen-decomposition ------------------------------------------------

struct EigenSystem {
    Eigen::VectorXd values;  // descending
    CMat vectors;            // column k pairs with values(k)
};

EigenSystem eig_hermitian(const CMat& m, double herm_tol = 1e-9);

struct EigTracked {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> values;  // per time, in branch order
    std::vector<CMat> vectors;            // per time, column k is branch k

    std::size_t size() const { return times.size(); }
    CVec branch(Eigen::Index k, std::size_t i) const { return vectors[i].col(k); }
    std::vector<CVec> branch_path(Eigen::Index k) const;
};

// Follows eigenvector branches by maximal overlap with the previous snapshot.
// Branch order is fixed by the descending order at the first snapshot.
EigTracked track_branches(const std::vector<std::pair<double, CMat>>& snapshots,
                          double gap_tol = 1e-9, double ambiguity_tol = 1e-6);

// ---- ODE integration ----------------------------------------------------

struct OdeControl {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0 picks span * 1e-6
};

using RealState = std::vector<double>;
using RealRhs = std::function<void(const RealState& y, RealState& dy, double t)>;

// Adaptive Dormand-Prince integration with dense output at the requested
// sample times (which must be non-decreasing and start at or after t0).
std::vector<RealState> integrate_ode(const RealRhs& rhs, RealState y0, double t0,
                                     const std::vector<double>& sample_times,
                                     const OdeControl& ctrl = {});

using ComplexRhs = std::function<void(double t, const CVec& y, CVec& dy)>;
std::vector<CVec> integrate_ode(const ComplexRhs& rhs, const CVec& y0, double t0,
                                const std::vector<double>& sample_times,
                                const OdeControl& ctrl = {});

using MatrixRhs = std::function<void(double t, const CMat& rho, CMat& drho)>;
std::vector<CMat> integrate_matrix_ode(const MatrixRhs& rhs, const CMat& rho0, double t0,
                                       const std::vector<double>& sample_times,
                                       const OdeControl& ctrl = {});

std::vector<double> linspace(double a, double b, std::size_t n);

// ---- density matrices and Lindblad generator ---------------------------

class DensityMatrix {
public:
    DensityMatrix() = default;
    // Validates Hermiticity (1e-12 relative to scale), unit trace (1e-10) and
    // positivity (eigenvalues >= -1e-10); throws InvalidState otherwise.
    explicit DensityMatrix(CMat m, double trace_tol = 1e-10, double psd_tol = 1e-10);
    static DensityMatrix pure(const CVec& psi);
    static DensityMatrix unchecked(CMat m);

    const CMat& mat() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    CMat m_;
};

struct DensityDiagnostics {
    double trace_error;
    double hermiticity_error;
    double min_eigenvalue;
};
DensityDiagnostics diagnose(const CMat& rho);

// (1/2) sum |eigenvalues of a - b|
double trace_distance(const CMat& a, const CMat& b);

// rho' = -i[H, rho] + sum_k (L rho L^+ - 1/2 {L^+ L, rho})
CMat lindblad_rhs(const CMat& H, const std::vector<CMat>& jumps, const CMat& rho);

std::vector<CMat> lindblad_evolve(const std::function<CMat(double)>& hamiltonian,
                                  const std::function<std::vector<CMat>(double)>& jumps,
                                  const CMat& rho0, double t0, const std::vector<double>& times,
                                  const OdeControl& ctrl = {});

}  // namespace gph
