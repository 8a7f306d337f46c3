#include <algorithm>
#include <set>

#include "gph/phasefun.hpp"

namespace gph {

namespace {

// Normalized overlap <a|b>/(|a||b|).
cplx unit_overlap(const CVec& a, const CVec& b) { return a.dot(b) / (a.norm() * b.norm()); }

void check_path(const StatePath& path) {
    if (path.states.size() < 2) throw std::invalid_argument("a path needs at least two states");
    if (!path.times.empty() && path.times.size() != path.states.size())
        throw std::invalid_argument("times and states differ in length");
    for (const auto& s : path.states)
        if (!(s.norm() > 1e-12)) throw InvalidState("zero-norm state in path");
}

double path_phase(const StatePath& path, double coarse_threshold, double tol) {
    check_path(path);
    const auto& s = path.states;
    const cplx ends = unit_overlap(s.front(), s.back());
    if (std::abs(ends) <= tol) throw OrthogonalEndpoints("endpoint overlap vanishes; phase undefined");
    double dyn = 0.0;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const cplx ov = unit_overlap(s[k], s[k + 1]);
        if (std::abs(ov) <= coarse_threshold)
            throw CoarsePath("consecutive overlap " + std::to_string(std::abs(ov)) + " at link " +
                             std::to_string(k) + " is too small; refine the sampling");
        dyn += std::arg(ov);
    }
    return wrap_phase(std::arg(ends) - dyn);
}

}  // namespace

double pancharatnam_pair(const CVec& a, const CVec& b, double tol) {
    const cplx ov = a.dot(b);
    if (std::abs(ov) <= tol) throw OrthogonalStates("states are orthogonal; Pancharatnam phase undefined", 0);
    return std::arg(ov);
}

double chain_dynamical_sum(const std::vector<CVec>& states, double tol) {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < states.size(); ++k) {
        const cplx ov = states[k].dot(states[k + 1]);
        if (std::abs(ov) <= tol * states[k].norm() * states[k + 1].norm())
            throw OrthogonalStates("link " + std::to_string(k) + " has vanishing overlap", k);
        sum += std::arg(ov);
    }
    return sum;
}

double discrete_chain_phase(const std::vector<CVec>& states, double tol) {
    if (states.size() < 2) throw std::invalid_argument("chain needs at least two states");
    const double dyn = chain_dynamical_sum(states, tol);
    const cplx ends = states.front().dot(states.back());
    if (std::abs(ends) <= tol * states.front().norm() * states.back().norm())
        throw OrthogonalStates("closing link <psi_1|psi_N> vanishes", states.size() - 1);
    return wrap_phase(std::arg(ends) - dyn);
}

double kinematic_gp(const StatePath& path, double coarse_threshold, double tol) {
    return path_phase(path, coarse_threshold, tol);
}

double nojump_gp(const StatePath& path, double coarse_threshold, double tol) {
    return path_phase(path, coarse_threshold, tol);
}

double tong_gp(const std::vector<std::pair<double, CMat>>& rho_path, TongVariant variant, double gap_tol) {
    if (rho_path.size() < 2) throw std::invalid_argument("density path needs at least two snapshots");
    const EigenSystem first = eig_hermitian(rho_path.front().second);
    const Eigen::Index n = first.values.size();

    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < n; ++k)
        if (first.values(k) > 1e-9) ++rank;

    const bool pure = variant == TongVariant::PureInitial || (variant == TongVariant::Auto && rank == 1);
    if (variant == TongVariant::PureInitial && rank != 1)
        throw RankMismatch("pure-initial variant requested but rank(rho(0)) = " + std::to_string(rank));

    if (pure) {
        // Only the populated branch matters; the chain phase is gauge invariant, so
        // no tracking of the (possibly degenerate) empty subspace is needed.
        std::vector<CVec> path;
        path.reserve(rho_path.size());
        for (const auto& [t, rho] : rho_path) {
            const EigenSystem es = eig_hermitian(rho);
            if (n > 1 && es.values(0) - es.values(1) <= gap_tol)
                throw DegenerateSpectrum("eigenvalue branch 0 degenerate at t = " + std::to_string(t));
            path.push_back(es.vectors.col(0));
        }
        const cplx ends = path.front().dot(path.back());
        if (std::abs(ends) <= kOverlapTol) throw OrthogonalEndpoints("tracked branch returns orthogonal");
        return wrap_phase(std::arg(ends) - chain_dynamical_sum(path));
    }

    const EigTracked tr = track_branches(rho_path, gap_tol);
    const std::size_t last = tr.size() - 1;
    auto check_gap = [&](Eigen::Index k) {
        for (std::size_t i = 0; i < tr.size(); ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != k && std::abs(tr.values[i](k) - tr.values[i](j)) <= gap_tol)
                    throw DegenerateSpectrum("eigenvalue branch " + std::to_string(k) + " degenerate at t = " +
                                             std::to_string(tr.times[i]));
    };

    auto branch_term = [&](Eigen::Index k) {
        const auto path = tr.branch_path(k);
        const double dyn = chain_dynamical_sum(path);
        const cplx ends = path.front().dot(path.back());
        return std::sqrt(std::max(0.0, tr.values.front()(k) * tr.values[last](k))) * std::abs(ends) *
               std::exp(I * (std::arg(ends) - dyn));
    };

    cplx total{0.0, 0.0};
    for (Eigen::Index k = 0; k < n; ++k) {
        if (tr.values.front()(k) <= 1e-12) continue;
        check_gap(k);
        total += branch_term(k);
    }
    if (std::abs(total) <= kOverlapTol) throw OrthogonalEndpoints("mixed-state interference term vanishes");
    return std::arg(total);
}

double trajectory_gp(const TrajectoryRecord& record, double tol) {
    const auto& s = record.samples.states;
    if (s.size() < 2) throw std::invalid_argument("trajectory record has fewer than two samples");
    if (record.jump_sample.size() != record.jumps.size())
        throw std::invalid_argument("jump index list does not match jump events");

    std::vector<std::ptrdiff_t> jump_at(s.size(), -1);
    for (std::size_t i = 0; i < record.jump_sample.size(); ++i) {
        const std::size_t idx = record.jump_sample[i];
        if (idx == 0 || idx >= s.size()) throw std::invalid_argument("jump sample index out of range");
        jump_at[idx] = static_cast<std::ptrdiff_t>(i);
    }

    double smooth = 0.0, jumps = 0.0;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const auto j = jump_at[k + 1];
        if (j >= 0) {
            const auto& ev = record.jumps[static_cast<std::size_t>(j)];
            const cplx ov = ev.pre.dot(ev.post);
            if (std::abs(ov) <= tol) throw OrthogonalStates("jump " + std::to_string(j) + " term undefined", k);
            jumps += std::arg(ov);
        } else {
            const cplx ov = s[k].dot(s[k + 1]);
            if (std::abs(ov) <= tol * s[k].norm() * s[k + 1].norm())
                throw OrthogonalStates("smooth link " + std::to_string(k) + " vanishes", k);
            smooth += std::arg(ov);
        }
    }
    const cplx ends = s.front().dot(s.back());
    if (std::abs(ends) <= tol * s.front().norm() * s.back().norm())
        throw OrthogonalStates("trajectory returns orthogonal to its initial state", s.size() - 1);
    return wrap_phase(std::arg(ends) - smooth - jumps);
}

}  // namespace gph
