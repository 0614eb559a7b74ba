#pragma once

// Exact linear algebra over the rationals and prime fields.
//
// Every value here is immutable once built and every routine is pure, so
// matrices and subspaces may be shared freely between threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace sheaftree {

class FieldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ScalarParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Coefficient field: either Q or F_p for a prime p < 2^31.
class Field {
public:
    static Field rationals() { return Field{}; }
    /// Throws FieldError unless p is prime (trial division).
    static Field prime(std::uint64_t p);
    /// Accepts "Q" or "Fp:<p>".
    static Field parse(std::string_view text);

    bool is_rational() const { return p_ == 0; }
    /// 0 for Q.
    std::uint64_t characteristic() const { return p_; }
    std::string to_string() const;

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::uint64_t p_ = 0;
};

class Scalar {
public:
    /// Rational zero.
    Scalar() : value_(mpq_class(0)) {}
    Scalar(const Field& field, long value);
    Scalar(const Field& field, const mpq_class& value);

    static Scalar zero(const Field& field) { return Scalar(field, 0L); }
    static Scalar one(const Field& field) { return Scalar(field, 1L); }
    /// Rationals as "a" or "a/b"; prime-field elements as (possibly negative)
    /// decimal integers, reduced to their canonical residue.
    static Scalar parse(const Field& field, std::string_view text);

    Field field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;
    /// Canonical string: "a/b" (b omitted when 1) or the residue in [0, p).
    std::string to_string() const;

    Scalar inverse() const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);
    Scalar& operator/=(const Scalar& rhs);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b);

    /// The rational value; only valid over Q.
    const mpq_class& rational() const { return std::get<mpq_class>(value_); }
    /// The canonical residue; only valid over F_p.
    std::uint64_t residue() const { return std::get<std::uint64_t>(value_); }

private:
    void require_same_field(const Scalar& other) const;

    Field field_;
    std::variant<mpq_class, std::uint64_t> value_;
};

using Vector = std::vector<Scalar>;

Vector zero_vector(const Field& field, std::size_t n);
bool is_zero_vector(std::span<const Scalar> v);

/// Dense row-major matrix. 0 x n and n x 0 shapes are legal.
class Matrix {
public:
    Matrix() = default;
    Matrix(const Field& field, std::size_t rows, std::size_t cols);
    /// Builds from integer rows; all rows must have the same length.
    Matrix(const Field& field, std::size_t rows, std::size_t cols,
           std::initializer_list<long> entries);

    static Matrix zero(const Field& field, std::size_t rows, std::size_t cols) {
        return Matrix(field, rows, cols);
    }
    static Matrix identity(const Field& field, std::size_t n);
    static Matrix from_rows(const Field& field, std::size_t cols,
                            const std::vector<Vector>& rows);
    static Matrix column(const Field& field, std::span<const Scalar> v);

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    Vector row(std::size_t r) const;
    Vector col(std::size_t c) const;
    void set_row(std::size_t r, std::span<const Scalar> v);
    void set_col(std::size_t c, std::span<const Scalar> v);
    /// Copies `block` into this matrix with its top-left corner at (r0, c0).
    void set_block(std::size_t r0, std::size_t c0, const Matrix& block);
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;

    Matrix transpose() const;
    bool is_zero() const;
    bool is_identity() const;

    Vector apply(std::span<const Scalar> v) const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(const Scalar& s);
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    Matrix operator-() const;
    friend bool operator==(const Matrix& a, const Matrix& b);

    /// Row-major entry strings.
    std::vector<std::vector<std::string>> to_strings() const;

private:
    Field field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
/// Block-diagonal sum; `field` is used when `blocks` is empty.
Matrix direct_sum(const Field& field, const std::vector<Matrix>& blocks);

struct RrefResult {
    Matrix reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
Scalar determinant(const Matrix& m);
std::optional<Matrix> inverse(const Matrix& m);

/// A subspace of k^n held as an rref basis, so equal subspaces compare equal.
class Subspace {
public:
    Subspace() = default;
    static Subspace zero(const Field& field, std::size_t ambient_dim);
    static Subspace full(const Field& field, std::size_t ambient_dim);
    /// Row span of `rows`.
    static Subspace span(const Matrix& rows);
    static Subspace span(const Field& field, std::size_t ambient_dim,
                         const std::vector<Vector>& vectors);

    const Field& field() const { return basis_.field(); }
    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    bool is_zero() const { return dim() == 0; }
    /// Rows form the rref basis.
    const Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    Vector basis_vector(std::size_t i) const { return basis_.row(i); }

    bool contains(std::span<const Scalar> v) const;
    bool contains(const Subspace& other) const;
    /// Coordinates of v in the rref basis, or nullopt when v is not in the span.
    std::optional<Vector> coordinates(std::span<const Scalar> v) const;

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.basis_ == b.basis_;
    }

private:
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

Subspace kernel_basis(const Matrix& m);
Subspace column_space(const Matrix& m);
Subspace sum(const Subspace& a, const Subspace& b);
/// Throws std::invalid_argument on ambient-dimension mismatch.
Subspace intersect(const Subspace& a, const Subspace& b);
/// Image of a subspace under a linear map.
Subspace image(const Matrix& map, const Subspace& sub);
/// Coordinates (in the rref basis of `sub`) of each column of `cols`, as the
/// columns of a dim(sub) x cols.cols() matrix; nullopt if a column lies outside.
std::optional<Matrix> coordinates_of_columns(const Subspace& sub, const Matrix& cols);

/// Quotient k^n -> k^n / sub realised on the non-pivot coordinates of sub.
struct QuotientMap {
    Matrix proj;     ///< (n - dim sub) x n, kernel exactly sub
    Matrix section;  ///< n x (n - dim sub), proj * section = I
};

QuotientMap quotient_map(std::size_t ambient_dim, const Subspace& sub);

/// Some v with m v = rhs, or nullopt when the system is inconsistent.
std::optional<Vector> solve(const Matrix& m, std::span<const Scalar> rhs);
/// Column-by-column solve of m X = rhs.
std::optional<Matrix> solve(const Matrix& m, const Matrix& rhs);

}  // namespace sheaftree
