#include <algorithm>
#include <numeric>

#include "gph/qcore.hpp"

namespace gph {

EigenSystem eig_hermitian(const CMat& m, double herm_tol) {
    if (m.rows() != m.cols() || m.rows() == 0) throw NonHermitianInput("matrix must be square and non-empty");
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > herm_tol) throw NonHermitianInput("matrix deviates from its adjoint by " + std::to_string(asym));

    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()));
    const Eigen::Index n = m.rows();
    EigenSystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    // Eigen sorts ascending
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = es.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    return out;
}

std::vector<CVec> EigTracked::branch_path(Eigen::Index k) const {
    std::vector<CVec> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) out.emplace_back(v.col(k));
    return out;
}

namespace {

// Groups indices of a descending spectrum into clusters closer than tol.
std::vector<std::vector<Eigen::Index>> clusters(const Eigen::VectorXd& vals, double tol) {
    std::vector<std::vector<Eigen::Index>> out;
    for (Eigen::Index j = 0; j < vals.size(); ++j) {
        if (!out.empty() && std::abs(vals(out.back().back()) - vals(j)) <= tol)
            out.back().push_back(j);
        else
            out.push_back({j});
    }
    return out;
}

}  // namespace

EigTracked track_branches(const std::vector<std::pair<double, CMat>>& snapshots, double gap_tol,
                          double ambiguity_tol) {
    EigTracked tr;
    if (snapshots.empty()) return tr;
    for (std::size_t i = 1; i < snapshots.size(); ++i)
        if (!(snapshots[i].first > snapshots[i - 1].first))
            throw AmbiguousBranch("snapshot times must be strictly increasing");

    auto first = eig_hermitian(snapshots.front().second);
    tr.times.push_back(snapshots.front().first);
    tr.values.push_back(first.values);
    tr.vectors.push_back(first.vectors);
    const Eigen::Index n = first.values.size();

    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        auto es = eig_hermitian(snapshots[i].second);
        const CMat& prev = tr.vectors.back();

        // Inside a degenerate cluster the solver basis is arbitrary, so replace
        // it by the projection of the previous branch vectors.
        const auto groups = clusters(es.values, gap_tol);
        for (const auto& g : groups) {
            if (g.size() < 2) continue;
            CMat basis(n, static_cast<Eigen::Index>(g.size()));
            for (std::size_t a = 0; a < g.size(); ++a) basis.col(a) = es.vectors.col(g[a]);
            CMat proj = basis * (basis.adjoint() * prev);  // n x n, column k = projection of branch k
            std::vector<Eigen::Index> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) { return proj.col(a).norm() > proj.col(b).norm(); });
            CMat fixed(n, static_cast<Eigen::Index>(g.size()));
            Eigen::Index filled = 0;
            for (Eigen::Index k : order) {
                if (filled == static_cast<Eigen::Index>(g.size())) break;
                CVec v = proj.col(k);
                for (Eigen::Index a = 0; a < filled; ++a) v -= fixed.col(a).dot(v) * fixed.col(a);
                if (v.norm() < 1e-8) continue;
                fixed.col(filled++) = v.normalized();
            }
            for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(g.size()); ++a) {
                if (a >= filled) break;
                es.vectors.col(g[a]) = fixed.col(a);
            }
        }

        std::vector<Eigen::Index> group_of(n);
        for (std::size_t gi = 0; gi < groups.size(); ++gi)
            for (auto j : groups[gi]) group_of[j] = static_cast<Eigen::Index>(gi);

        Eigen::MatrixXd ov = (prev.adjoint() * es.vectors).cwiseAbs();  // ov(k, j)
        std::vector<Eigen::Index> assign(n, -1);
        std::vector<bool> taken(n, false);
        for (Eigen::Index k = 0; k < n; ++k) {
            Eigen::Index best = 0;
            ov.row(k).maxCoeff(&best);
            double second = -1.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (group_of[j] != group_of[best]) second = std::max(second, ov(k, j));
            if (second >= 0.0 && ov(k, best) - second < ambiguity_tol)
                throw AmbiguousBranch("branch " + std::to_string(k) + " ambiguous at t = " +
                                      std::to_string(snapshots[i].first) + "; refine the time grid");
            if (taken[best])
                throw AmbiguousBranch("two branches map onto the same eigenvector at t = " +
                                      std::to_string(snapshots[i].first));
            taken[best] = true;
            assign[k] = best;
        }

        Eigen::VectorXd vals(n);
        CMat vecs(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            vals(k) = es.values(assign[k]);
            vecs.col(k) = es.vectors.col(assign[k]);
        }
        tr.times.push_back(snapshots[i].first);
        tr.values.push_back(vals);
        tr.vectors.push_back(vecs);
    }
    return tr;
}

}  // namespace gph
