#include "ioident/linalg.hpp"

#include "ioident/errors.hpp"

namespace ioident {

MultiPoly bareiss_det(const PolyMatrix& m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw DimensionError("determinant of non-square matrix");
    if (n == 0) throw DimensionError("determinant of empty matrix");
    const SymTab& tab = m[0][0].table();

    PolyMatrix a = m;
    MultiPoly prev = MultiPoly::constant(tab, 1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            size_t pivot = k + 1;
            while (pivot < n && a[pivot][k].is_zero()) ++pivot;
            if (pivot == n) return MultiPoly::zero(tab);
            std::swap(a[k], a[pivot]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                MultiPoly num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                auto q = exact_div(num, prev);
                if (!q) throw InternalError("Bareiss division not exact");
                a[i][j] = std::move(*q);
            }
            a[i][k] = MultiPoly::zero(tab);
        }
        prev = a[k][k];
    }
    MultiPoly d = a[n - 1][n - 1];
    return sign < 0 ? -d : d;
}

RatFunc det(const RatMatrix& m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw DimensionError("determinant of non-square matrix");
    if (n == 0) throw DimensionError("determinant of empty matrix");
    const SymTab& tab = m[0][0].table();

    // clear each row by the product of its denominators
    PolyMatrix cleared(n, std::vector<MultiPoly>(n, MultiPoly::zero(tab)));
    for (size_t i = 0; i < n; ++i) {
        MultiPoly mult = MultiPoly::constant(tab, 1);
        for (size_t j = 0; j < n; ++j) mult = mult * m[i][j].den();
        for (size_t j = 0; j < n; ++j) cleared[i][j] = m[i][j].num() * *exact_div(mult, m[i][j].den());
    }
    MultiPoly num = bareiss_det(cleared);
    if (num.is_zero()) return RatFunc::zero(tab);
    // divide the row multipliers back one small factor at a time; once num is
    // coprime to a factor it stays coprime, so the pair ends up reduced
    MultiPoly den = MultiPoly::constant(tab, 1);
    for (const auto& row : m) {
        for (const auto& e : row) {
            MultiPoly d = e.den();
            if (!d.is_constant()) {
                MultiPoly g = poly_gcd(num, d);
                if (!g.is_constant()) {
                    num = *exact_div(num, g);
                    d = *exact_div(d, g);
                }
            }
            den = den * d;
        }
    }
    return RatFunc::from_reduced(std::move(num), std::move(den));
}

std::optional<RatVector> solve_linear(const RatMatrix& m, const RatVector& rhs) {
    const size_t rows = m.size();
    if (rhs.size() != rows) throw DimensionError("rhs length mismatch");
    const size_t cols = rows == 0 ? 0 : m[0].size();
    for (const auto& row : m)
        if (row.size() != cols) throw DimensionError("ragged matrix");
    if (cols == 0) {
        // empty system: solvable (uniquely, by the empty vector) iff rhs = 0
        for (const auto& b : rhs)
            if (!b.is_zero()) return std::nullopt;
        return RatVector{};
    }
    const SymTab& tab = m[0][0].table();
    const RatFunc zero = RatFunc::zero(tab);

    RatMatrix a = m;
    RatVector b = rhs;
    std::vector<int> pivot_col_of_row;

    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t pr = row;
        while (pr < rows && a[pr][col].is_zero()) ++pr;
        if (pr == rows) return std::nullopt; // pivotless column: rank < cols
        std::swap(a[row], a[pr]);
        std::swap(b[row], b[pr]);
        RatFunc inv = a[row][col].inverse();
        for (size_t j = col; j < cols; ++j) a[row][j] = a[row][j] * inv;
        b[row] = b[row] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || a[i][col].is_zero()) continue;
            RatFunc f = a[i][col];
            for (size_t j = col; j < cols; ++j) a[i][j] = a[i][j] - f * a[row][j];
            b[i] = b[i] - f * b[row];
        }
        pivot_col_of_row.push_back(static_cast<int>(col));
        ++row;
    }
    if (pivot_col_of_row.size() < cols) return std::nullopt;
    // remaining rows must be consistent
    for (size_t i = cols; i < rows; ++i)
        if (!b[i].is_zero()) return std::nullopt;
    RatVector x(cols, zero);
    for (size_t i = 0; i < cols; ++i) x[pivot_col_of_row[i]] = b[i];
    return x;
}

} // namespace ioident
