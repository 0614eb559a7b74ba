#include "sheaftree/exactla.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

namespace sheaftree {

namespace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t result = 1 % p;
    base %= p;
    while (exp > 0) {
        if (exp & 1U) result = result * base % p;
        base = base * base % p;
        exp >>= 1U;
    }
    return result;
}

std::uint64_t reduce_mod(const mpz_class& z, std::uint64_t p) {
    mpz_class r = z % mpz_class(static_cast<unsigned long>(p));
    if (r < 0) r += static_cast<unsigned long>(p);
    return r.get_ui();
}

}  // namespace

// ---------------------------------------------------------------- Field

Field Field::prime(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 31)) {
        throw FieldError("prime field characteristic too large: " + std::to_string(p));
    }
    if (!is_prime(p)) throw FieldError("field characteristic is not prime: " + std::to_string(p));
    Field f;
    f.p_ = p;
    return f;
}

Field Field::parse(std::string_view text) {
    if (text == "Q") return rationals();
    if (text.starts_with("Fp:")) {
        auto digits = text.substr(3);
        std::uint64_t p = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
            throw FieldError("malformed field spec: " + std::string(text));
        }
        return prime(p);
    }
    throw FieldError("unknown field spec: " + std::string(text));
}

std::string Field::to_string() const {
    return is_rational() ? std::string("Q") : "Fp:" + std::to_string(p_);
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar(const Field& field, long value) : field_(field) {
    if (field.is_rational()) {
        value_ = mpq_class(value);
    } else {
        auto p = static_cast<long>(field.characteristic());
        long r = value % p;
        if (r < 0) r += p;
        value_ = static_cast<std::uint64_t>(r);
    }
}

Scalar::Scalar(const Field& field, const mpq_class& value) : field_(field) {
    if (field.is_rational()) {
        value_ = value;
        return;
    }
    std::uint64_t p = field.characteristic();
    std::uint64_t den = reduce_mod(value.get_den(), p);
    if (den == 0) throw FieldError("denominator divisible by the characteristic");
    std::uint64_t num = reduce_mod(value.get_num(), p);
    value_ = num * pow_mod(den, p - 2, p) % p;
}

Scalar Scalar::parse(const Field& field, std::string_view text) {
    std::string s(text);
    auto bad = [&] { return ScalarParseError("cannot parse scalar '" + s + "' over " + field.to_string()); };
    auto valid_int = [](std::string_view t) {
        if (!t.empty() && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
        return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (field.is_rational()) {
        auto slash = text.find('/');
        std::string_view num = text.substr(0, slash);
        std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
        if (!valid_int(num) || !valid_int(den) || den.front() == '-' || den.front() == '+') throw bad();
        mpz_class n(std::string(num.front() == '+' ? num.substr(1) : num));
        mpz_class d{std::string(den)};
        if (d == 0) throw bad();
        mpq_class q(n, d);
        q.canonicalize();
        return Scalar(field, q);
    }
    if (!valid_int(text)) throw bad();
    mpz_class z(std::string(text.front() == '+' ? text.substr(1) : text));
    Scalar out = zero(field);
    out.value_ = reduce_mod(z, field.characteristic());
    return out;
}

bool Scalar::is_zero() const {
    if (field_.is_rational()) return sgn(std::get<mpq_class>(value_)) == 0;
    return std::get<std::uint64_t>(value_) == 0;
}

bool Scalar::is_one() const {
    if (field_.is_rational()) return std::get<mpq_class>(value_) == 1;
    return std::get<std::uint64_t>(value_) == 1;
}

std::string Scalar::to_string() const {
    if (field_.is_rational()) {
        const auto& q = std::get<mpq_class>(value_);
        if (q.get_den() == 1) return q.get_num().get_str();
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    return std::to_string(std::get<std::uint64_t>(value_));
}

void Scalar::require_same_field(const Scalar& other) const {
    if (!(field_ == other.field_)) {
        throw FieldError("scalar field mismatch: " + field_.to_string() + " vs " +
                         other.field_.to_string());
    }
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    Scalar out = *this;
    if (field_.is_rational()) {
        out.value_ = mpq_class(1) / std::get<mpq_class>(value_);
    } else {
        std::uint64_t p = field_.characteristic();
        out.value_ = pow_mod(std::get<std::uint64_t>(value_), p - 2, p);
    }
    return out;
}

Scalar Scalar::operator-() const {
    Scalar out = *this;
    if (field_.is_rational()) {
        out.value_ = -std::get<mpq_class>(value_);
    } else {
        std::uint64_t r = std::get<std::uint64_t>(value_);
        out.value_ = r == 0 ? 0 : field_.characteristic() - r;
    }
    return out;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
    require_same_field(rhs);
    if (field_.is_rational()) {
        std::get<mpq_class>(value_) += std::get<mpq_class>(rhs.value_);
    } else {
        auto& r = std::get<std::uint64_t>(value_);
        r = (r + std::get<std::uint64_t>(rhs.value_)) % field_.characteristic();
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
    require_same_field(rhs);
    if (field_.is_rational()) {
        std::get<mpq_class>(value_) -= std::get<mpq_class>(rhs.value_);
    } else {
        std::uint64_t p = field_.characteristic();
        auto& r = std::get<std::uint64_t>(value_);
        r = (r + p - std::get<std::uint64_t>(rhs.value_)) % p;
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
    require_same_field(rhs);
    if (field_.is_rational()) {
        std::get<mpq_class>(value_) *= std::get<mpq_class>(rhs.value_);
    } else {
        auto& r = std::get<std::uint64_t>(value_);
        r = r * std::get<std::uint64_t>(rhs.value_) % field_.characteristic();
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
    require_same_field(rhs);
    return *this *= rhs.inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
}

Vector zero_vector(const Field& field, std::size_t n) {
    return Vector(n, Scalar::zero(field));
}

bool is_zero_vector(std::span<const Scalar> v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(field)) {}

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols,
               std::initializer_list<long> entries)
    : Matrix(field, rows, cols) {
    if (entries.size() != rows * cols) throw std::invalid_argument("matrix literal has wrong size");
    std::size_t i = 0;
    for (long e : entries) data_[i++] = Scalar(field, e);
}

Matrix Matrix::identity(const Field& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(field);
    return m;
}

Matrix Matrix::from_rows(const Field& field, std::size_t cols, const std::vector<Vector>& rows) {
    Matrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
}

Matrix Matrix::column(const Field& field, std::span<const Scalar> v) {
    Matrix m(field, v.size(), 1);
    m.set_col(0, v);
    return m;
}

Vector Matrix::row(std::size_t r) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::col(std::size_t c) const {
    Vector v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
    return v;
}

void Matrix::set_row(std::size_t r, std::span<const Scalar> v) {
    if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
    std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
}

void Matrix::set_col(std::size_t c, std::span<const Scalar> v) {
    if (v.size() != rows_) throw std::invalid_argument("set_col: length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_) {
        throw std::out_of_range("set_block: block does not fit");
    }
    for (std::size_t r = 0; r < block.rows_; ++r) {
        for (std::size_t c = 0; c < block.cols_; ++c) (*this)(r0 + r, c0 + c) = block(r, c);
    }
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
    if (r0 + nrows > rows_ || c0 + ncols > cols_) throw std::out_of_range("block out of range");
    Matrix out(field_, nrows, ncols);
    for (std::size_t r = 0; r < nrows; ++r) {
        for (std::size_t c = 0; c < ncols; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    }
    return t;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool Matrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            const Scalar& s = (*this)(r, c);
            if (r == c ? !s.is_one() : !s.is_zero()) return false;
        }
    }
    return true;
}

Vector Matrix::apply(std::span<const Scalar> v) const {
    if (v.size() != cols_) throw std::invalid_argument("apply: length mismatch");
    Vector out = zero_vector(field_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            const Scalar& a = (*this)(r, c);
            if (!a.is_zero() && !v[c].is_zero()) out[r] += a * v[c];
        }
    }
    return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix add: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix sub: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(const Scalar& s) {
    for (auto& x : data_) x *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
        throw std::invalid_argument("matrix product: shape mismatch " + std::to_string(a.rows_) + "x" +
                                    std::to_string(a.cols_) + " * " + std::to_string(b.rows_) + "x" +
                                    std::to_string(b.cols_));
    }
    if (!(a.field_ == b.field_)) throw FieldError("matrix product: field mismatch");
    Matrix out(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Scalar& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                const Scalar& bkj = b(k, j);
                if (!bkj.is_zero()) out(i, j) += aik * bkj;
            }
        }
    }
    return out;
}

Matrix Matrix::operator-() const {
    Matrix out = *this;
    for (auto& x : out.data_) x = -x;
    return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.data_ == b.data_;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
    std::vector<std::vector<std::string>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out[r].push_back((*this)(r, c).to_string());
    }
    return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
    Matrix out(a.field(), a.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(0, a.cols(), b);
    return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
    Matrix out(a.field(), a.rows() + b.rows(), a.cols());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), 0, b);
    return out;
}

Matrix direct_sum(const Field& field, const std::vector<Matrix>& blocks) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out(field, rows, cols);
    std::size_t r = 0;
    std::size_t c = 0;
    for (const auto& b : blocks) {
        out.set_block(r, c, b);
        r += b.rows();
        c += b.cols();
    }
    return out;
}

// ---------------------------------------------------------------- elimination

RrefResult rref(const Matrix& m) {
    RrefResult res{m, {}, 0};
    Matrix& a = res.reduced;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::size_t pr = 0;
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t sel = pr;
        while (sel < rows && a(sel, c).is_zero()) ++sel;
        if (sel == rows) continue;
        if (sel != pr) {
            for (std::size_t j = c; j < cols; ++j) std::swap(a(sel, j), a(pr, j));
        }
        Scalar inv = a(pr, c).inverse();
        for (std::size_t j = c; j < cols; ++j) a(pr, j) *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr || a(r, c).is_zero()) continue;
            Scalar factor = a(r, c);
            for (std::size_t j = c; j < cols; ++j) {
                if (!a(pr, j).is_zero()) a(r, j) -= factor * a(pr, j);
            }
        }
        res.pivots.push_back(c);
        ++pr;
    }
    res.rank = pr;
    return res;
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

Scalar determinant(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    Matrix a = m;
    const std::size_t n = a.rows();
    Scalar det = Scalar::one(m.field());
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = c;
        while (sel < n && a(sel, c).is_zero()) ++sel;
        if (sel == n) return Scalar::zero(m.field());
        if (sel != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(sel, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        Scalar inv = a(c, c).inverse();
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a(r, c).is_zero()) continue;
            Scalar factor = a(r, c) * inv;
            for (std::size_t j = c; j < n; ++j) a(r, j) -= factor * a(c, j);
        }
    }
    return det;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const std::size_t n = m.rows();
    RrefResult r = rref(hstack(m, Matrix::identity(m.field(), n)));
    if (r.rank < n || (n > 0 && r.pivots[n - 1] >= n)) return std::nullopt;
    return r.reduced.block(0, n, n, n);
}

// ---------------------------------------------------------------- Subspace

Subspace Subspace::zero(const Field& field, std::size_t ambient_dim) {
    Subspace s;
    s.basis_ = Matrix(field, 0, ambient_dim);
    return s;
}

Subspace Subspace::full(const Field& field, std::size_t ambient_dim) {
    Subspace s;
    s.basis_ = Matrix::identity(field, ambient_dim);
    for (std::size_t i = 0; i < ambient_dim; ++i) s.pivots_.push_back(i);
    return s;
}

Subspace Subspace::span(const Matrix& rows) {
    RrefResult r = rref(rows);
    Subspace s;
    s.basis_ = r.reduced.block(0, 0, r.rank, rows.cols());
    s.pivots_ = std::move(r.pivots);
    return s;
}

Subspace Subspace::span(const Field& field, std::size_t ambient_dim, const std::vector<Vector>& vectors) {
    return span(Matrix::from_rows(field, ambient_dim, vectors));
}

std::optional<Vector> Subspace::coordinates(std::span<const Scalar> v) const {
    if (v.size() != ambient_dim()) throw std::invalid_argument("coordinates: length mismatch");
    Vector coeffs;
    coeffs.reserve(dim());
    for (std::size_t p : pivots_) coeffs.push_back(v[p]);
    Vector rebuilt = basis_.transpose().apply(coeffs);
    if (!std::equal(rebuilt.begin(), rebuilt.end(), v.begin())) return std::nullopt;
    return coeffs;
}

bool Subspace::contains(std::span<const Scalar> v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& other) const {
    if (other.ambient_dim() != ambient_dim()) return false;
    for (std::size_t i = 0; i < other.dim(); ++i) {
        if (!contains(other.basis_vector(i))) return false;
    }
    return true;
}

Subspace kernel_basis(const Matrix& m) {
    RrefResult r = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : r.pivots) is_pivot[p] = true;
    std::vector<Vector> vectors;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        Vector v = zero_vector(m.field(), n);
        v[f] = Scalar::one(m.field());
        for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced(i, f);
        vectors.push_back(std::move(v));
    }
    return Subspace::span(m.field(), n, vectors);
}

Subspace column_space(const Matrix& m) { return Subspace::span(m.transpose()); }

Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("sum: ambient dimension mismatch");
    return Subspace::span(vstack(a.basis(), b.basis()));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) {
        throw std::invalid_argument("intersect: ambient dimension mismatch (" + std::to_string(a.ambient_dim()) +
                                    " vs " + std::to_string(b.ambient_dim()) + ")");
    }
    // x = A^T alpha = B^T beta  <=>  [A^T | -B^T] (alpha, beta) = 0
    Matrix at = a.basis().transpose();
    Matrix system = hstack(at, -b.basis().transpose());
    Subspace ker = kernel_basis(system);
    std::vector<Vector> vectors;
    for (std::size_t i = 0; i < ker.dim(); ++i) {
        Vector k = ker.basis_vector(i);
        Vector alpha(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(a.dim()));
        vectors.push_back(at.apply(alpha));
    }
    return Subspace::span(a.field(), a.ambient_dim(), vectors);
}

Subspace image(const Matrix& map, const Subspace& sub) {
    if (map.cols() != sub.ambient_dim()) throw std::invalid_argument("image: dimension mismatch");
    return Subspace::span((map * sub.basis().transpose()).transpose());
}

std::optional<Matrix> coordinates_of_columns(const Subspace& sub, const Matrix& cols) {
    if (cols.rows() != sub.ambient_dim()) throw std::invalid_argument("coordinates_of_columns: dimension mismatch");
    Matrix out(sub.field(), sub.dim(), cols.cols());
    for (std::size_t c = 0; c < cols.cols(); ++c) {
        auto coords = sub.coordinates(cols.col(c));
        if (!coords) return std::nullopt;
        out.set_col(c, *coords);
    }
    return out;
}

QuotientMap quotient_map(std::size_t ambient_dim, const Subspace& sub) {
    if (sub.ambient_dim() != ambient_dim) {
        throw std::invalid_argument("quotient_map: ambient dimension mismatch");
    }
    const Field& field = sub.field();
    std::vector<bool> is_pivot(ambient_dim, false);
    for (std::size_t p : sub.pivots()) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < ambient_dim; ++c) {
        if (!is_pivot[c]) free_cols.push_back(c);
    }
    // proj(v)_j = v[n_j] - sum_i v[p_i] * b_i[n_j]
    QuotientMap q{Matrix(field, free_cols.size(), ambient_dim), Matrix(field, ambient_dim, free_cols.size())};
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        q.proj(j, free_cols[j]) = Scalar::one(field);
        for (std::size_t i = 0; i < sub.dim(); ++i) q.proj(j, sub.pivots()[i]) = -sub.basis()(i, free_cols[j]);
        q.section(free_cols[j], j) = Scalar::one(field);
    }
    return q;
}

std::optional<Matrix> solve(const Matrix& m, const Matrix& rhs) {
    if (rhs.rows() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
    const std::size_t n = m.cols();
    RrefResult r = rref(hstack(m, rhs));
    if (!r.pivots.empty() && r.pivots.back() >= n) return std::nullopt;
    Matrix x(m.field(), n, rhs.cols());
    for (std::size_t i = 0; i < r.rank; ++i) {
        for (std::size_t c = 0; c < rhs.cols(); ++c) x(r.pivots[i], c) = r.reduced(i, n + c);
    }
    return x;
}

std::optional<Vector> solve(const Matrix& m, std::span<const Scalar> rhs) {
    auto x = solve(m, Matrix::column(m.field(), rhs));
    if (!x) return std::nullopt;
    return x->col(0);
}

}  // namespace sheaftree
