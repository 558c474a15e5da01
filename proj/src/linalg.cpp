#include "nikodym/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace nikodym {

Matrix::Matrix(const FieldCtx& ctx, std::size_t rows, std::size_t cols)
    : ctx_(&ctx), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

void Matrix::set(std::size_t r, std::size_t c, const FieldElem& v) {
    if (&v.ctx() != ctx_) throw std::invalid_argument("Matrix::set: element from another field");
    (*this)(r, c) = v.code();
}

void Matrix::push_row(const std::vector<std::uint32_t>& row) {
    if (row.size() != cols_) throw std::invalid_argument("Matrix::push_row: width mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
}

std::vector<std::size_t> Matrix::rref() {
    const auto& F = *ctx_;
    std::vector<std::size_t> pivots;
    std::size_t prow = 0;
    for (std::size_t c = 0; c < cols_ && prow < rows_; ++c) {
        std::size_t sel = prow;
        while (sel < rows_ && (*this)(sel, c) == 0) ++sel;
        if (sel == rows_) continue;
        if (sel != prow)
            for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(sel, j), (*this)(prow, j));
        const std::uint32_t inv = F.inv((*this)(prow, c));
        if (inv != 1)
            for (std::size_t j = c; j < cols_; ++j) (*this)(prow, j) = F.mul((*this)(prow, j), inv);
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == prow) continue;
            const std::uint32_t factor = (*this)(r, c);
            if (factor == 0) continue;
            const std::uint32_t nf = F.neg(factor);
            std::uint32_t* dst = &data_[r * cols_];
            const std::uint32_t* src = &data_[prow * cols_];
            for (std::size_t j = c; j < cols_; ++j)
                if (src[j] != 0) dst[j] = F.add(dst[j], F.mul(nf, src[j]));
        }
        pivots.push_back(c);
        ++prow;
    }
    return pivots;
}

std::size_t Matrix::rank() const {
    Matrix copy = *this;
    return copy.rref().size();
}

std::vector<std::vector<std::uint32_t>> Matrix::kernel_basis() const {
    Matrix red = *this;
    const auto pivots = red.rref();
    const auto& F = *ctx_;
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::uint32_t> v(cols_, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(red(i, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::uint32_t> Matrix::apply(const std::vector<std::uint32_t>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("Matrix::apply: length mismatch");
    const auto& F = *ctx_;
    std::vector<std::uint32_t> out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint32_t acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) acc = F.add(acc, F.mul((*this)(r, c), v[c]));
        out[r] = acc;
    }
    return out;
}

std::optional<std::vector<std::uint32_t>> Matrix::solve(const std::vector<std::uint32_t>& rhs) const {
    if (rhs.size() != rows_) throw std::invalid_argument("Matrix::solve: length mismatch");
    Matrix aug(*ctx_, rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
        aug(r, cols_) = rhs[r];
    }
    const auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    std::vector<std::uint32_t> x(cols_, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, cols_);
    return x;
}

std::optional<Matrix> Matrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("Matrix::inverse: not square");
    const std::size_t n = rows_;
    Matrix aug(*ctx_, n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = (*this)(r, c);
        aug(r, n + r) = 1;
    }
    auto pivots = aug.rref();
    if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
    Matrix inv(*ctx_, n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
    return inv;
}

Matrix Matrix::identity(const FieldCtx& ctx, std::size_t n) {
    Matrix m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

} // namespace nikodym
