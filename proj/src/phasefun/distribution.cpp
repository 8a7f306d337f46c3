#include <algorithm>
#include <cmath>

#include "gph/phasefun.hpp"

namespace gph {

PhaseDistribution make_distribution(const std::vector<double>& phases, std::size_t n_bins, double lo, double hi) {
    if (phases.empty()) throw EmptyEnsemble("no phases to histogram");
    if (n_bins < 2) throw std::invalid_argument("need at least two bins");
    if (!(hi > lo)) throw std::invalid_argument("empty histogram range");

    PhaseDistribution d;
    d.bin_edges.resize(n_bins + 1);
    for (std::size_t j = 0; j <= n_bins; ++j)
        d.bin_edges[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n_bins);
    d.weights.assign(n_bins, 0.0);

    const bool circular = std::abs((hi - lo) - 2.0 * pi) < 1e-12;
    const double width = (hi - lo) / static_cast<double>(n_bins);
    std::size_t counted = 0;
    cplx res{0.0, 0.0};
    for (double x : phases) {
        res += std::exp(I * x);
        double y = x;
        if (circular) {
            y = lo + std::fmod(x - lo, 2.0 * pi);
            if (y < lo) y += 2.0 * pi;
        }
        if (y < lo || y >= hi) continue;
        auto j = static_cast<std::size_t>((y - lo) / width);
        if (j >= n_bins) j = n_bins - 1;
        d.weights[j] += 1.0;
        ++counted;
    }
    if (counted == 0) throw EmptyEnsemble("no phase falls inside the histogram range");
    for (double& w : d.weights) w /= static_cast<double>(counted);
    d.sample_count = phases.size();
    d.resultant = res / static_cast<double>(phases.size());
    return d;
}

double PhaseDistribution::binned_circular_mean() const {
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * std::exp(I * bin_center(j));
    return std::arg(s);
}

std::vector<std::size_t> PhaseDistribution::peaks(double min_weight, std::size_t min_separation) const {
    const std::size_t n = weights.size();
    const bool circular = std::abs((bin_edges.back() - bin_edges.front()) - 2.0 * pi) < 1e-12;
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
        double left = -1.0, right = -1.0;
        if (j > 0) left = weights[j - 1];
        else if (circular) left = weights[n - 1];
        if (j + 1 < n) right = weights[j + 1];
        else if (circular) right = weights[0];
        if (weights[j] > left && weights[j] >= right && weights[j] >= min_weight && weights[j] > 0.0)
            out.push_back(j);
    }
    if (min_separation == 0 || out.size() < 2) return out;

    // Taller maxima suppress lower ones that sit within min_separation bins.
    std::vector<std::size_t> order = out;
    std::stable_sort(order.begin(), order.end(),
                     [this](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    auto separation = [&](std::size_t a, std::size_t b) {
        const std::size_t d = a > b ? a - b : b - a;
        return circular ? std::min(d, n - d) : d;
    };
    std::vector<std::size_t> kept;
    for (std::size_t j : order)
        if (std::none_of(kept.begin(), kept.end(), [&](std::size_t k) { return separation(j, k) < min_separation; }))
            kept.push_back(j);
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace gph
