#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace sumrange::linalg {

/// Dense row-major matrix, only as large as the d<=16 geometry kernels need.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

struct LstsqResult {
    std::vector<double> x;
    double residual = 0.0;      // ||A x - b||
    double min_diag = 0.0;      // smallest |R_ii| seen, rank indicator
};

/// Least squares via Householder QR. Requires rows >= cols.
inline LstsqResult lstsq(Mat A, std::vector<double> b) {
    const int m = A.rows, n = A.cols;
    assert(m >= n && static_cast<int>(b.size()) == m);
    double min_diag = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (int i = k; i < m; ++i) alpha += A.at(i, k) * A.at(i, k);
        alpha = std::sqrt(alpha);
        if (A.at(k, k) > 0) alpha = -alpha;
        double vk = A.at(k, k) - alpha;
        std::vector<double> v(m - k, 0.0);
        v[0] = vk;
        for (int i = k + 1; i < m; ++i) v[i - k] = A.at(i, k);
        double vnorm2 = 0.0;
        for (double t : v) vnorm2 += t * t;
        if (vnorm2 > 0) {
            for (int j = k; j < n; ++j) {
                double s = 0.0;
                for (int i = k; i < m; ++i) s += v[i - k] * A.at(i, j);
                s *= 2.0 / vnorm2;
                for (int i = k; i < m; ++i) A.at(i, j) -= s * v[i - k];
            }
            double s = 0.0;
            for (int i = k; i < m; ++i) s += v[i - k] * b[i];
            s *= 2.0 / vnorm2;
            for (int i = k; i < m; ++i) b[i] -= s * v[i - k];
        }
        min_diag = std::min(min_diag, std::abs(A.at(k, k)));
    }
    LstsqResult res;
    res.min_diag = (n > 0) ? min_diag : 0.0;
    res.x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A.at(i, j) * res.x[j];
        res.x[i] = (A.at(i, i) != 0.0) ? s / A.at(i, i) : 0.0;
    }
    double r2 = 0.0;
    for (int i = n; i < m; ++i) r2 += b[i] * b[i];
    res.residual = std::sqrt(r2);
    return res;
}

/// Solve a square system by Gaussian elimination with partial pivoting.
/// Returns nullopt if the pivot falls below tol.
inline std::optional<std::vector<double>> solve(Mat A, std::vector<double> b, double tol) {
    const int n = A.rows;
    assert(A.cols == n && static_cast<int>(b.size()) == n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A.at(i, k)) > std::abs(A.at(p, k))) p = i;
        if (std::abs(A.at(p, k)) < tol) return std::nullopt;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A.at(p, j), A.at(k, j));
            std::swap(b[p], b[k]);
        }
        for (int i = k + 1; i < n; ++i) {
            double f = A.at(i, k) / A.at(k, k);
            for (int j = k; j < n; ++j) A.at(i, j) -= f * A.at(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A.at(i, j) * x[j];
        x[i] = s / A.at(i, i);
    }
    return x;
}

struct NullspaceResult {
    bool dependent = false;      // a nonzero kernel vector exists at tolerance tol
    std::vector<double> kernel;  // the kernel vector, inf-norm 1
    double smallest_accepted = std::numeric_limits<double>::infinity();
    double largest_rejected = 0.0;

    /// True when a pivot magnitude fell within a decade of the cutoff,
    /// i.e. the rank decision would flip under a 10x tolerance change.
    bool ambiguous(double tol) const {
        return largest_rejected >= tol * 0.1 || smallest_accepted < tol * 10.0;
    }
};

/// Rank / kernel probe of an m x n matrix via row echelon with partial
/// pivoting. Pivots with magnitude < tol are treated as zero.
inline NullspaceResult kernel_vector(Mat A, double tol) {
    const int m = A.rows, n = A.cols;
    NullspaceResult out;
    std::vector<int> pivot_col_of_row;
    std::vector<bool> is_pivot_col(n, false);
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int p = row;
        for (int i = row + 1; i < m; ++i)
            if (std::abs(A.at(i, col)) > std::abs(A.at(p, col))) p = i;
        double mag = std::abs(A.at(p, col));
        if (mag < tol) {
            out.largest_rejected = std::max(out.largest_rejected, mag);
            continue;  // free column
        }
        out.smallest_accepted = std::min(out.smallest_accepted, mag);
        if (p != row)
            for (int j = 0; j < n; ++j) std::swap(A.at(p, j), A.at(row, j));
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = A.at(i, col) / A.at(row, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) A.at(i, j) -= f * A.at(row, j);
        }
        pivot_col_of_row.push_back(col);
        is_pivot_col[col] = true;
        ++row;
    }
    int free_col = -1;
    for (int c = 0; c < n; ++c)
        if (!is_pivot_col[c]) {
            free_col = c;
            break;
        }
    if (free_col < 0) return out;  // full column rank
    out.dependent = true;
    out.kernel.assign(n, 0.0);
    out.kernel[free_col] = 1.0;
    for (size_t r = 0; r < pivot_col_of_row.size(); ++r) {
        int pc = pivot_col_of_row[r];
        out.kernel[pc] = -A.at(static_cast<int>(r), free_col) / A.at(static_cast<int>(r), pc);
    }
    double mx = 0.0;
    for (double t : out.kernel) mx = std::max(mx, std::abs(t));
    for (double& t : out.kernel) t /= mx;
    return out;
}

}  // namespace sumrange::linalg
