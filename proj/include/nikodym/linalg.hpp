#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nikodym/field.hpp"

namespace nikodym {

inline constexpr std::uint64_t kDefaultMatrixCap = 4'000'000;

// Dense row-major matrix of field codes.
class Matrix {
public:
    Matrix(const FieldCtx& ctx, std::size_t rows, std::size_t cols);

    const FieldCtx& ctx() const { return *ctx_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    FieldElem at(std::size_t r, std::size_t c) const { return FieldElem(*ctx_, (*this)(r, c)); }
    void set(std::size_t r, std::size_t c, const FieldElem& v);

    // Appends a row; the width must match.
    void push_row(const std::vector<std::uint32_t>& row);

    std::size_t rank() const;

    // Basis of {v : M v = 0}, one vector of length cols() per kernel dimension.
    std::vector<std::vector<std::uint32_t>> kernel_basis() const;

    std::vector<std::uint32_t> apply(const std::vector<std::uint32_t>& v) const;

    // Some x with M x = rhs (free variables set to zero), if one exists.
    std::optional<std::vector<std::uint32_t>> solve(const std::vector<std::uint32_t>& rhs) const;

    std::optional<Matrix> inverse() const;

    static Matrix identity(const FieldCtx& ctx, std::size_t n);

private:
    // In-place reduced row echelon form; returns pivot columns.
    std::vector<std::size_t> rref();

    const FieldCtx* ctx_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint32_t> data_;
};

} // namespace nikodym
