#include "merw/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace merw {

namespace {

std::size_t read_thread_cap() {
    if (const char* env = std::getenv("MERW_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace

std::size_t matvec_threads() {
    static const std::size_t cap = read_thread_cap();
    return cap;
}

Csr::Csr(std::size_t n, std::vector<Triplet> entries) : n_(n) {
    for (const Triplet& t : entries) {
        if (t.row >= n || t.col >= n) throw InvalidArgument("triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_ptr_.assign(n + 1, 0);
    cols_.reserve(entries.size());
    values_.reserve(entries.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k < entries.size() && entries[k].row == i) {
            double v = entries[k].value;
            std::size_t col = entries[k].col;
            ++k;
            while (k < entries.size() && entries[k].row == i && entries[k].col == col) {
                v += entries[k].value;  // duplicates accumulate
                ++k;
            }
            if (v != 0.0) {
                cols_.push_back(static_cast<std::uint32_t>(col));
                values_.push_back(v);
            }
        }
        row_ptr_[i + 1] = values_.size();
    }
}

Csr Csr::identity(std::size_t n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return Csr(n, std::move(t));
}

double Csr::at(std::size_t i, std::size_t j) const {
    const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(j));
    if (it == end || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

Vec Csr::apply_right(const Vec& x) const {
    if (x.size() != n_) throw InvalidArgument("apply_right: size mismatch");
    Vec y(n_, 0.0);
    auto worker = [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            double s = 0.0;
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                s += values_[k] * x[cols_[k]];
            y[i] = s;
        }
    };
    const std::size_t threads = matvec_threads();
    if (threads <= 1 || n_ < 2048 || nonzeros() < 1u << 16) {
        worker(0, n_);
        return y;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_ + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        std::size_t r0 = t * chunk;
        std::size_t r1 = std::min(n_, r0 + chunk);
        if (r0 >= r1) break;
        pool.emplace_back(worker, r0, r1);
    }
    for (auto& th : pool) th.join();
    return y;
}

Vec Csr::apply_left(const Vec& x) const {
    if (x.size() != n_) throw InvalidArgument("apply_left: size mismatch");
    // Sequential scatter keeps the accumulation order fixed.
    Vec y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            y[cols_[k]] += xi * values_[k];
    }
    return y;
}

Csr Csr::transpose() const {
    std::vector<Triplet> t;
    t.reserve(nonzeros());
    for_each([&](std::size_t i, std::size_t j, double v) { t.push_back({j, i, v}); });
    return Csr(n_, std::move(t));
}

Csr Csr::multiply(const Csr& other) const {
    if (other.n_ != n_) throw InvalidArgument("multiply: size mismatch");
    std::vector<Triplet> out;
    Vec acc(n_, 0.0);
    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < n_; ++i) {
        touched.clear();
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const std::size_t j = cols_[k];
            const double v = values_[k];
            for (std::size_t k2 = other.row_ptr_[j]; k2 < other.row_ptr_[j + 1]; ++k2) {
                const std::uint32_t c = other.cols_[k2];
                if (acc[c] == 0.0) touched.push_back(c);
                acc[c] += v * other.values_[k2];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::uint32_t c : touched) {
            if (acc[c] != 0.0) out.push_back({i, c, acc[c]});
            acc[c] = 0.0;
        }
    }
    return Csr(n_, std::move(out));
}

bool Csr::equals(const Csr& other) const {
    return n_ == other.n_ && row_ptr_ == other.row_ptr_ && cols_ == other.cols_ &&
           values_ == other.values_;
}

bool Csr::is_symmetric(double tol) const {
    if (tol == 0.0) return equals(transpose());
    Csr t = transpose();
    bool ok = true;
    for_each([&](std::size_t i, std::size_t j, double v) {
        if (std::abs(v - t.at(i, j)) > tol) ok = false;
    });
    if (!ok) return false;
    t.for_each([&](std::size_t i, std::size_t j, double v) {
        if (std::abs(v - at(i, j)) > tol) ok = false;
    });
    return ok;
}

double Csr::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace merw
