#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "merw/common.hpp"

namespace merw {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

// Compressed-sparse-row matrix with signed entries. Rows keep their columns
// sorted, duplicates are summed at build time. Mat-vec products are
// parallelized over disjoint row blocks, so results are bitwise identical for
// any thread count (MERW_THREADS caps the pool).
class Csr {
public:
    Csr() = default;
    Csr(std::size_t n, std::vector<Triplet> entries);

    static Csr identity(std::size_t n);

    std::size_t size() const { return n_; }
    std::size_t nonzeros() const { return values_.size(); }

    double at(std::size_t i, std::size_t j) const;

    // y = M x
    Vec apply_right(const Vec& x) const;
    // y^T = x^T M
    Vec apply_left(const Vec& x) const;

    Csr transpose() const;
    Csr multiply(const Csr& other) const;

    bool equals(const Csr& other) const;
    bool is_symmetric(double tol = 0.0) const;
    double max_abs() const;

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                f(i, cols_[k], values_[k]);
    }

    template <class F>
    void for_each_in_row(std::size_t i, F&& f) const {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            f(cols_[k], values_[k]);
    }

    std::size_t row_size(std::size_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> cols_;
    std::vector<double> values_;
};

// Number of worker threads honored by apply_right/apply_left.
std::size_t matvec_threads();

}  // namespace merw
