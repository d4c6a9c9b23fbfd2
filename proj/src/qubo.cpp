#include "qtrack/qubo.hpp"

#include <cmath>
#include <iomanip>

namespace qtrack {

void QuboModel::add_squared_linear(std::span<const int> indices,
                                   std::span<const double> coeffs, double constant,
                                   double weight) {
    if (indices.size() != coeffs.size())
        throw ShapeError("add_squared_linear: index/coefficient length mismatch");
    if (weight < 0.0) throw ValidationError("add_squared_linear: weight must be >= 0");
    if (weight == 0.0) return;
    // (sum c_k a_k - b)^2 = sum c_k(c_k - 2b) a_k + 2 sum_{k<l} c_k c_l a_k a_l + b^2
    offset += weight * constant * constant;
    for (std::size_t k = 0; k < indices.size(); ++k)
        add_linear(indices[k], weight * coeffs[k] * (coeffs[k] - 2.0 * constant));
    for (std::size_t k = 0; k < indices.size(); ++k)
        for (std::size_t l = k + 1; l < indices.size(); ++l)
            add_quadratic(indices[k], indices[l], 2.0 * weight * coeffs[k] * coeffs[l]);
}

double QuboModel::energy(const std::vector<std::uint8_t>& assignment) const {
    if (static_cast<int>(assignment.size()) != n_vars)
        throw ShapeError("energy: assignment length " + std::to_string(assignment.size()) +
                         " != " + std::to_string(n_vars));
    double e = offset;
    for (int i = 0; i < n_vars; ++i)
        if (assignment[static_cast<std::size_t>(i)]) e += linear(i);
    for (const auto& [key, value] : quadratic)
        if (assignment[static_cast<std::size_t>(key.first)] &&
            assignment[static_cast<std::size_t>(key.second)])
            e += value;
    return e;
}

double QuboModel::max_abs_coefficient() const {
    double m = 0.0;
    for (int i = 0; i < n_vars; ++i) m = std::max(m, std::abs(linear(i)));
    for (const auto& [key, value] : quadratic) m = std::max(m, std::abs(value));
    return m;
}

void QuboModel::dump(std::ostream& os) const {
    os << n_vars << ' ' << std::setprecision(17) << offset << '\n';
    for (int i = 0; i < n_vars; ++i)
        if (linear(i) != 0.0) os << i << ' ' << i << ' ' << linear(i) << '\n';
    for (const auto& [key, value] : quadratic)
        if (value != 0.0) os << key.first << ' ' << key.second << ' ' << value << '\n';
}

QuboModel merge(std::span<const std::pair<const QuboModel*, double>> terms) {
    if (terms.empty()) throw ValidationError("merge: no models given");
    QuboModel out(terms.front().first->n_vars);
    for (const auto& [model, weight] : terms) {
        if (model->n_vars != out.n_vars)
            throw ShapeError("merge: mixed variable counts " + std::to_string(model->n_vars) +
                             " vs " + std::to_string(out.n_vars));
        out.offset += weight * model->offset;
        out.linear += weight * model->linear;
        for (const auto& [key, value] : model->quadratic)
            out.quadratic[key] += weight * value;
    }
    return out;
}

}  // namespace qtrack
