#include "qtrack/encoding.hpp"

#include <algorithm>
#include <cmath>

namespace qtrack {

EncodingScheme build_scheme(int resolution, int cardinality, double max_holding_fraction,
                            int n_assets) {
    if (n_assets < 1) throw ValidationError("build_scheme: need at least one asset");
    if (cardinality < 1 || cardinality > n_assets)
        throw ValidationError("build_scheme: cardinality must be in [1, N]");
    if (!(max_holding_fraction > 0.0) || max_holding_fraction > 1.0)
        throw ValidationError("build_scheme: max_holding_fraction must be in (0, 1]");
    if (resolution < cardinality)
        throw InfeasibleSchemeError("build_scheme: K/C < 1, cannot hold " +
                                    std::to_string(cardinality) + " assets with K = " +
                                    std::to_string(resolution));

    const int min_units = resolution / cardinality;  // floor(K/C)
    const int cap_units = static_cast<int>(std::floor(max_holding_fraction * resolution));
    if (cap_units < min_units)
        throw InfeasibleSchemeError("build_scheme: max holding of " + std::to_string(cap_units) +
                                    " units is below floor(K/C) = " + std::to_string(min_units));
    const int k_max = std::min(cap_units, resolution - cardinality + 1);

    EncodingScheme scheme;
    scheme.resolution = resolution;
    scheme.cardinality = cardinality;
    scheme.max_holding_fraction = max_holding_fraction;
    scheme.k_max = k_max;
    scheme.n_assets = n_assets;
    // D = ceil(log2(k_max + 1)) without floating point.
    int depth = 0;
    while ((1 << depth) < k_max + 1) ++depth;
    if (depth == 0) depth = 1;
    for (int d = 0; d + 1 < depth; ++d) scheme.coefficients.push_back(1 << d);
    scheme.coefficients.push_back(k_max - ((1 << (depth - 1)) - 1));
    return scheme;
}

DecodedPortfolio decode(const std::vector<std::uint8_t>& assignment,
                        const EncodingScheme& scheme) {
    const VariableRegistry reg = registry_for(scheme);
    if (static_cast<int>(assignment.size()) != reg.num_vars())
        throw ShapeError("decode: assignment length " + std::to_string(assignment.size()) +
                         " != " + std::to_string(reg.num_vars()));
    DecodedPortfolio out;
    out.weights.resize(scheme.n_assets);
    out.selected.resize(scheme.n_assets);
    out.units.resize(static_cast<std::size_t>(scheme.n_assets));
    for (int i = 0; i < scheme.n_assets; ++i) {
        int units = 0;
        for (int d = 0; d < scheme.depth(); ++d)
            if (assignment[static_cast<std::size_t>(reg.holding_index(i, d))])
                units += scheme.coefficients[static_cast<std::size_t>(d)];
        out.units[static_cast<std::size_t>(i)] = units;
        out.weights(i) = static_cast<double>(units) / static_cast<double>(scheme.resolution);
        out.selected(i) =
            assignment[static_cast<std::size_t>(reg.indicator_index(i))] ? 1 : 0;
    }
    return out;
}

FeasibilityVerdict feasible(const DecodedPortfolio& portfolio, const EncodingScheme& scheme,
                            double tolerance) {
    FeasibilityVerdict verdict;
    const int n = scheme.n_assets;
    if (portfolio.weights.size() != n || portfolio.selected.size() != n)
        throw ShapeError("feasible: portfolio/scheme asset count mismatch");

    long total_units = 0;
    for (int i = 0; i < n; ++i) {
        const double w = portfolio.weights(i);
        const long units = std::lround(w * scheme.resolution);
        if (std::abs(w * scheme.resolution - static_cast<double>(units)) >
            tolerance * scheme.resolution)
            verdict.violations.push_back("weight[" + std::to_string(i) +
                                         "] is not a whole number of 1/K units");
        total_units += units;
        const bool invested = units > 0;
        const bool flagged = portfolio.selected(i) != 0;
        if (invested && !flagged)
            verdict.violations.push_back("asset " + std::to_string(i) +
                                         " held without its indicator set");
        if (!invested && flagged)
            verdict.violations.push_back("asset " + std::to_string(i) +
                                         " has a phantom indicator (selected, zero weight)");
        if (invested && (units < 1 || units > scheme.k_max))
            verdict.violations.push_back("asset " + std::to_string(i) + " holds " +
                                         std::to_string(units) + " units outside [1, " +
                                         std::to_string(scheme.k_max) + "]");
    }
    if (total_units != scheme.resolution)
        verdict.violations.push_back("budget: " + std::to_string(total_units) + "/" +
                                     std::to_string(scheme.resolution) + " units invested");
    const int selected_count = portfolio.selected.sum();
    if (selected_count != scheme.cardinality)
        verdict.violations.push_back("cardinality: " + std::to_string(selected_count) +
                                     " selected, expected " +
                                     std::to_string(scheme.cardinality));
    verdict.feasible = verdict.violations.empty();
    return verdict;
}

}  // namespace qtrack
