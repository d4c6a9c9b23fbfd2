#include "qtrack/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace qtrack {
namespace {

// Compressed adjacency of the coupling graph, for O(deg) flip updates.
struct Adjacency {
    std::vector<int> offsets;
    std::vector<int> neighbor;
    std::vector<double> coeff;

    explicit Adjacency(const QuboModel& model) {
        const int n = model.n_vars;
        std::vector<int> degree(static_cast<std::size_t>(n), 0);
        for (const auto& [key, value] : model.quadratic) {
            ++degree[static_cast<std::size_t>(key.first)];
            ++degree[static_cast<std::size_t>(key.second)];
        }
        offsets.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 0; i < n; ++i) offsets[static_cast<std::size_t>(i) + 1] =
            offsets[static_cast<std::size_t>(i)] + degree[static_cast<std::size_t>(i)];
        neighbor.resize(static_cast<std::size_t>(offsets.back()));
        coeff.resize(neighbor.size());
        std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
        for (const auto& [key, value] : model.quadratic) {
            const auto [i, j] = key;
            neighbor[static_cast<std::size_t>(cursor[static_cast<std::size_t>(i)])] = j;
            coeff[static_cast<std::size_t>(cursor[static_cast<std::size_t>(i)]++)] = value;
            neighbor[static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)])] = i;
            coeff[static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)]++)] = value;
        }
    }
};

// Local fields h_i = linear_i + sum_j Q_ij a_j; flipping i changes the
// energy by +h_i (0 -> 1) or -h_i (1 -> 0).
std::vector<double> local_fields(const QuboModel& model, const Adjacency& adj,
                                 const std::vector<std::uint8_t>& a) {
    std::vector<double> h(model.linear.data(), model.linear.data() + model.n_vars);
    for (int i = 0; i < model.n_vars; ++i)
        for (int k = adj.offsets[static_cast<std::size_t>(i)];
             k < adj.offsets[static_cast<std::size_t>(i) + 1]; ++k)
            if (a[static_cast<std::size_t>(adj.neighbor[static_cast<std::size_t>(k)])])
                h[static_cast<std::size_t>(i)] += adj.coeff[static_cast<std::size_t>(k)];
    return h;
}

void apply_flip(int i, std::vector<std::uint8_t>& a, std::vector<double>& h,
                const Adjacency& adj) {
    const double sign = a[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    a[static_cast<std::size_t>(i)] ^= 1u;
    for (int k = adj.offsets[static_cast<std::size_t>(i)];
         k < adj.offsets[static_cast<std::size_t>(i) + 1]; ++k)
        h[static_cast<std::size_t>(adj.neighbor[static_cast<std::size_t>(k)])] +=
            sign * adj.coeff[static_cast<std::size_t>(k)];
}

bool lex_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<std::uint8_t> random_state(int n, std::mt19937_64& rng) {
    std::vector<std::uint8_t> a(static_cast<std::size_t>(n));
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& v : a) v = static_cast<std::uint8_t>(bit(rng));
    return a;
}

double coupling(const QuboModel& model, int i, int j) {
    const auto it = model.quadratic.find(i < j ? std::make_pair(i, j)
                                               : std::make_pair(j, i));
    return it == model.quadratic.end() ? 0.0 : it->second;
}

// Energy change of flipping i and j together: the two single-flip deltas
// plus the correction for their shared coupling.
double pair_delta(const QuboModel& model, const std::vector<std::uint8_t>& a,
                  const std::vector<double>& h, int i, int j) {
    const double si = a[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    const double sj = a[static_cast<std::size_t>(j)] ? -1.0 : 1.0;
    return si * h[static_cast<std::size_t>(i)] + sj * h[static_cast<std::size_t>(j)] +
           si * sj * coupling(model, i, j);
}

double auto_t_hot(const QuboModel& model, const Adjacency& adj, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto a = random_state(model.n_vars, rng);
    const auto h = local_fields(model, adj, a);
    double m = 0.0;
    for (double v : h) m = std::max(m, std::abs(v));
    return m > 0.0 ? m : 1.0;
}

}  // namespace

Sample solve_exhaustive(const QuboModel& model) {
    const int n = model.n_vars;
    if (n < 1) throw ValidationError("solve_exhaustive: empty model");
    if (n > 24)
        throw TooLargeError("solve_exhaustive: " + std::to_string(n) + " variables exceeds 24");

    const Adjacency adj(model);
    std::vector<std::uint8_t> a(static_cast<std::size_t>(n), 0);
    auto h = local_fields(model, adj, a);
    double e = model.offset;

    std::vector<std::uint8_t> best = a;
    double best_e = e;
    const std::uint64_t count = 1ull << n;
    for (std::uint64_t u = 1; u < count; ++u) {
        // Gray-code order: exactly one bit changes per step.
        const int flip = std::countr_zero(u);
        e += a[static_cast<std::size_t>(flip)] ? -h[static_cast<std::size_t>(flip)]
                                               : h[static_cast<std::size_t>(flip)];
        apply_flip(flip, a, h, adj);
        if (e < best_e || (e == best_e && lex_less(a, best))) {
            best_e = e;
            best = a;
        }
    }
    Sample out;
    out.assignment = std::move(best);
    out.energy = model.energy(out.assignment);  // exact, not the running sum
    return out;
}

std::vector<Sample> solve_sa(const QuboModel& model, const AnnealConfig& config) {
    const int n = model.n_vars;
    if (n < 1) throw ValidationError("solve_sa: empty model");
    if (config.n_samples < 1 || config.sweeps < 1)
        throw ValidationError("solve_sa: n_samples and sweeps must be >= 1");
    if (config.t_hot > 0.0 && !(config.t_cold_ratio > 0.0 && config.t_cold_ratio < 1.0))
        throw ValidationError("solve_sa: t_cold_ratio must be in (0, 1)");

    const Adjacency adj(model);
    const double t_hot = config.t_hot > 0.0
                             ? config.t_hot
                             : auto_t_hot(model, adj, config.seed ^ 0x9E3779B97F4A7C15ull);
    const double t_cold = t_hot * config.t_cold_ratio;

    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(config.n_samples));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < config.n_samples; ++k) {
        const std::uint64_t sample_seed = config.seed ^ static_cast<std::uint64_t>(k);
        std::mt19937_64 rng(sample_seed);
        auto a = random_state(n, rng);
        auto h = local_fields(model, adj, a);

        for (int sweep = 0; sweep < config.sweeps; ++sweep) {
            const double frac =
                config.sweeps > 1 ? static_cast<double>(sweep) / (config.sweeps - 1) : 1.0;
            const double temp = t_hot * std::pow(t_cold / t_hot, frac);
            for (int i = 0; i < n; ++i) {
                const double de = a[static_cast<std::size_t>(i)]
                                      ? -h[static_cast<std::size_t>(i)]
                                      : h[static_cast<std::size_t>(i)];
                if (de <= 0.0 || unit(rng) < std::exp(-de / temp)) apply_flip(i, a, h, adj);
            }
            // Pair proposals let a unit hop between blocks without paying the
            // full constraint barrier of the intermediate single-flip state.
            if (n >= 2) {
                std::uniform_int_distribution<int> pick(0, n - 1);
                for (int p = 0; p < n; ++p) {
                    const int i = pick(rng);
                    const int j = pick(rng);
                    if (i == j) continue;
                    const double de = pair_delta(model, a, h, i, j);
                    if (de <= 0.0 || unit(rng) < std::exp(-de / temp)) {
                        apply_flip(i, a, h, adj);
                        apply_flip(j, a, h, adj);
                    }
                }
            }
        }
        // Zero-temperature quench: the schedule's floor can still sit far
        // above the smallest objective gaps, so descend to a strict local
        // minimum before reporting.  Deterministic (fixed flip order).
        bool improved = true;
        while (improved) {
            improved = false;
            for (int i = 0; i < n; ++i) {
                const double de = a[static_cast<std::size_t>(i)]
                                      ? -h[static_cast<std::size_t>(i)]
                                      : h[static_cast<std::size_t>(i)];
                if (de < 0.0) {
                    apply_flip(i, a, h, adj);
                    improved = true;
                }
            }
            // Pair descent is O(n^2) per pass; worth it only on models small
            // enough that the scan is cheap next to the anneal itself.
            if (!improved && n <= 256) {
                for (int i = 0; i < n && !improved; ++i)
                    for (int j = i + 1; j < n && !improved; ++j)
                        if (pair_delta(model, a, h, i, j) < 0.0) {
                            apply_flip(i, a, h, adj);
                            apply_flip(j, a, h, adj);
                            improved = true;
                        }
            }
        }
        Sample s;
        s.assignment = std::move(a);
        s.energy = model.energy(s.assignment);
        s.sample_index = k;
        s.seed_used = sample_seed;
        samples.push_back(std::move(s));
    }
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.assignment != b.assignment) return lex_less(a.assignment, b.assignment);
        return a.sample_index < b.sample_index;
    });
    return samples;
}

RankedSolutions filter_rank(const std::vector<Sample>& samples, const EncodingScheme& scheme,
                            double tolerance) {
    RankedSolutions out;
    for (const Sample& s : samples) {
        DecodedPortfolio decoded = decode(s.assignment, scheme);
        Solution sol;
        sol.assignment = s.assignment;
        sol.energy = s.energy;
        sol.verdict = feasible(decoded, scheme, tolerance);
        sol.weights = std::move(decoded.weights);
        sol.selected = std::move(decoded.selected);
        sol.sample_index = s.sample_index;
        sol.seed_used = s.seed_used;
        (sol.verdict.feasible ? out.feasible : out.infeasible).push_back(std::move(sol));
    }
    if (!samples.empty())
        out.success_rate =
            static_cast<double>(out.feasible.size()) / static_cast<double>(samples.size());
    return out;
}

}  // namespace qtrack
