#pragma once

#include <utility>
#include <vector>

#include "gph/qcore.hpp"
#include "gph/record.hpp"

namespace gph {

inline constexpr double kOverlapTol = 1e-12;

enum class Branch { Plus, Minus };

double pancharatnam_pair(const CVec& a, const CVec& b, double tol = kOverlapTol);

// arg<psi_1|psi_N> - arg(<psi_1|psi_2> ... <psi_{N-1}|psi_N>) in (-pi, pi].
double discrete_chain_phase(const std::vector<CVec>& states, double tol = kOverlapTol);

// Same value computed without wrapping the individual links, so that a slowly
// varying sequence of chains can be unwrapped by the caller.
double chain_dynamical_sum(const std::vector<CVec>& states, double tol = kOverlapTol);

double kinematic_gp(const StatePath& path, double coarse_threshold = 0.9, double tol = kOverlapTol);
double nojump_gp(const StatePath& path, double coarse_threshold = 0.9, double tol = kOverlapTol);

enum class TongVariant { Auto, General, PureInitial };

double tong_gp(const std::vector<std::pair<double, CMat>>& rho_path, TongVariant variant = TongVariant::Auto,
               double gap_tol = 1e-9);

double trajectory_gp(const TrajectoryRecord& record, double tol = kOverlapTol);

// Weighted histogram over [lo, hi) with uniform bins.
struct PhaseDistribution {
    std::vector<double> bin_edges;
    std::vector<double> weights;
    std::size_t sample_count = 0;
    cplx resultant{0.0, 0.0};  // (1/N) sum exp(i phi) over the raw samples

    std::size_t n_bins() const { return weights.size(); }
    double bin_center(std::size_t j) const { return 0.5 * (bin_edges[j] + bin_edges[j + 1]); }
    double bin_width() const { return bin_edges[1] - bin_edges[0]; }
    double circular_mean() const { return std::arg(resultant); }
    double mean_resultant_length() const { return std::abs(resultant); }
    double binned_circular_mean() const;
    // Local maxima of the weights (periodic only when the range spans 2 pi).
    // A maximum closer than min_separation bins to a taller one is dropped.
    std::vector<std::size_t> peaks(double min_weight = 0.0, std::size_t min_separation = 0) const;
};

PhaseDistribution make_distribution(const std::vector<double>& phases, std::size_t n_bins = 64,
                                    double lo = -pi, double hi = pi);

}  // namespace gph
