#pragma once

#include <cstdint>
#include <vector>

#include "qtrack/encoding.hpp"
#include "qtrack/qubo.hpp"

namespace qtrack {

struct AnnealConfig {
    int n_samples = 20;       // Table-3 style protocol; enhanced runs use 10
    int sweeps = 5000;        // one sweep = n_vars proposed flips, fixed order
    double t_hot = 0.0;       // <= 0 selects the max-|dE| auto schedule
    double t_cold_ratio = 1e-4;
    std::uint64_t seed = 0;
};

/// One solver sample: raw assignment plus its exactly recomputed energy.
struct Sample {
    std::vector<std::uint8_t> assignment;
    double energy = 0.0;
    int sample_index = 0;
    std::uint64_t seed_used = 0;
};

/// A sample decorated with its decoded portfolio and feasibility verdict.
struct Solution {
    std::vector<std::uint8_t> assignment;
    double energy = 0.0;
    Eigen::VectorXd weights;
    Eigen::VectorXi selected;
    FeasibilityVerdict verdict;
    int sample_index = 0;
    std::uint64_t seed_used = 0;
};

struct RankedSolutions {
    std::vector<Solution> feasible;    // ascending energy, lexicographic ties
    std::vector<Solution> infeasible;  // same order, violation tags retained
    double success_rate = 0.0;
};

/// Global optimum by full enumeration (Gray-code incremental energies).
/// Ties resolve to the lexicographically smallest assignment.  Throws
/// TooLargeError above 24 variables.
Sample solve_exhaustive(const QuboModel& model);

/// Multi-replica simulated annealing: geometric temperature schedule,
/// single-bit Metropolis flips in fixed index order, then a greedy
/// zero-temperature quench to a local minimum.  Sample k runs on seed
/// (config.seed XOR k); the returned list is sorted ascending by energy and
/// is a pure function of (model, config).
std::vector<Sample> solve_sa(const QuboModel& model, const AnnealConfig& config);

/// Decode and rank samples; success_rate = feasible / total.
RankedSolutions filter_rank(const std::vector<Sample>& samples, const EncodingScheme& scheme,
                            double tolerance = 1e-9);

}  // namespace qtrack
