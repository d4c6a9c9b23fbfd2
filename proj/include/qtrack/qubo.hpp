#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "qtrack/errors.hpp"

namespace qtrack {

/// Quadratic form over binary variables:
///   E(a) = offset + sum_i linear[i] a[i] + sum_{i<j} quadratic[{i,j}] a[i] a[j].
///
/// Couplings are stored upper-triangular with canonical (i < j) keys;
/// self-couplings fold into the linear term since a^2 = a on binaries.
struct QuboModel {
    using Key = std::pair<int, int>;

    int n_vars = 0;
    Eigen::VectorXd linear;            // length n_vars
    std::map<Key, double> quadratic;   // canonical i < j keys
    double offset = 0.0;

    explicit QuboModel(int n = 0) : n_vars(n), linear(Eigen::VectorXd::Zero(n)) {}

    void add_linear(int i, double value) {
        check_index(i);
        linear(i) += value;
    }

    void add_quadratic(int i, int j, double value) {
        check_index(i);
        check_index(j);
        if (i == j) {
            linear(i) += value;
            return;
        }
        if (i > j) std::swap(i, j);
        quadratic[{i, j}] += value;
    }

    /// Adds weight * (sum_k coeffs[k] a[indices[k]] - constant)^2.
    void add_squared_linear(std::span<const int> indices, std::span<const double> coeffs,
                            double constant, double weight);

    double energy(const std::vector<std::uint8_t>& assignment) const;

    /// Largest absolute coefficient over linear terms and couplings.
    double max_abs_coefficient() const;

    /// Text dump: `M offset` header then `i j value` triples (j = i for
    /// linear terms), for cross-implementation diffing.
    void dump(std::ostream& os) const;

   private:
    void check_index(int i) const {
        if (i < 0 || i >= n_vars)
            throw ShapeError("qubo: variable index " + std::to_string(i) + " out of [0, " +
                             std::to_string(n_vars) + ")");
    }
};

/// Weighted sum of models over a shared variable set.
QuboModel merge(std::span<const std::pair<const QuboModel*, double>> terms);

}  // namespace qtrack
