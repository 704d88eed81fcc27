#include "posg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "posg/errors.hpp"

namespace posg {

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * n + col]);
        for (int row = col + 1; row < n; ++row) {
            double v = std::abs(a[static_cast<std::size_t>(row) * n + col]);
            if (v > best) {
                best = v;
                pivot = row;
            }
        }
        if (best < 1e-13) throw numerical_error("singular linear system");
        if (pivot != col) {
            for (int j = col; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(pivot) * n + j],
                          a[static_cast<std::size_t>(col) * n + j]);
            std::swap(b[pivot], b[col]);
        }
        double diag = a[static_cast<std::size_t>(col) * n + col];
        for (int row = col + 1; row < n; ++row) {
            double factor = a[static_cast<std::size_t>(row) * n + col] / diag;
            if (factor == 0.0) continue;
            for (int j = col; j < n; ++j)
                a[static_cast<std::size_t>(row) * n + j] -= factor * a[static_cast<std::size_t>(col) * n + j];
            b[row] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int row = n - 1; row >= 0; --row) {
        double sum = b[row];
        for (int j = row + 1; j < n; ++j) sum -= a[static_cast<std::size_t>(row) * n + j] * x[j];
        x[row] = sum / a[static_cast<std::size_t>(row) * n + row];
    }
    return x;
}

std::vector<double> least_squares(const std::vector<double>& a, const std::vector<double>& b,
                                  int rows, int cols, double* residual) {
    // A^T A x = A^T b, regularized so rank-deficient kernels still solve and
    // give (approximately) the minimum-norm solution.
    const double ridge = 1e-10;
    std::vector<double> ata(static_cast<std::size_t>(cols) * cols, 0.0);
    std::vector<double> atb(cols, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int i = 0; i < cols; ++i) {
            double v = a[static_cast<std::size_t>(r) * cols + i];
            if (v == 0.0) continue;
            atb[i] += v * b[r];
            for (int j = 0; j < cols; ++j)
                ata[static_cast<std::size_t>(i) * cols + j] += v * a[static_cast<std::size_t>(r) * cols + j];
        }
    for (int i = 0; i < cols; ++i) ata[static_cast<std::size_t>(i) * cols + i] += ridge;
    std::vector<double> x = solve_dense(std::move(ata), std::move(atb), cols);
    if (residual) {
        double sum = 0.0;
        for (int r = 0; r < rows; ++r) {
            double rv = -b[r];
            for (int i = 0; i < cols; ++i) rv += a[static_cast<std::size_t>(r) * cols + i] * x[i];
            sum += rv * rv;
        }
        *residual = std::sqrt(sum);
    }
    return x;
}

std::vector<double> project_to_simplex(std::vector<double> v) {
    // Sort-based projection: find the threshold tau so that
    // sum(max(v_i - tau, 0)) = 1.
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0, tau = 0.0;
    int support = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i];
        double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - candidate > 0.0) {
            tau = candidate;
            support = static_cast<int>(i + 1);
        }
    }
    if (support == 0) {
        // All mass collapses; fall back to uniform.
        std::fill(v.begin(), v.end(), 1.0 / v.size());
        return v;
    }
    for (double& x : v) x = std::max(x - tau, 0.0);
    return v;
}

}  // namespace posg
