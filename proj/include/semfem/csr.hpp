#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace semfem {

inline double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double vec_norm2(const std::vector<double>& a) { return std::sqrt(vec_dot(a, a)); }

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;  // size n+1
    std::vector<int> col_idx;
    std::vector<double> values;

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
            y[i] = s;
        }
    }

    std::vector<double> multiply(const std::vector<double>& x) const {
        std::vector<double> y;
        multiply(x, y);
        return y;
    }

    double coeff(int i, int j) const {
        const int* beg = col_idx.data() + row_ptr[i];
        const int* end = col_idx.data() + row_ptr[i + 1];
        const int* it = std::lower_bound(beg, end, j);
        if (it == end || *it != j) return 0.0;
        return values[it - col_idx.data()];
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(n);
        for (int i = 0; i < n; ++i) d[i] = coeff(i, i);
        return d;
    }

    // max_|a_ij - a_ji| over the stored pattern; 0 for an exactly symmetric matrix.
    double symmetry_defect() const {
        double defect = 0.0;
        for (int i = 0; i < n; ++i)
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
                defect = std::max(defect, std::abs(values[k] - coeff(col_idx[k], i)));
        return defect;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

// Sorts and compresses duplicate (row, col) entries by summation. The sort is
// stable so repeated contributions accumulate in insertion order, which keeps
// the result bitwise deterministic.
inline CsrMatrix csr_from_triplets(int n, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::invalid_argument("csr_from_triplets: index out of range (" +
                                        std::to_string(t.row) + "," + std::to_string(t.col) + ")");
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix A;
    A.n = n;
    A.row_ptr.assign(n + 1, 0);
    for (std::size_t k = 0; k < entries.size();) {
        std::size_t j = k;
        double s = 0.0;
        while (j < entries.size() && entries[j].row == entries[k].row &&
               entries[j].col == entries[k].col)
            s += entries[j++].value;
        A.col_idx.push_back(entries[k].col);
        A.values.push_back(s);
        A.row_ptr[entries[k].row + 1] += 1;
        k = j;
    }
    for (int i = 0; i < n; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
    return A;
}

}  // namespace semfem
