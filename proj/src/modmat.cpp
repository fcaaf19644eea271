#include "hillcrack/modmat.hpp"

#include "hillcrack/error.hpp"

#include <sstream>
#include <utility>

namespace hillcrack {

namespace {

void check_side(std::size_t m, const char* what) {
    if (m < 1 || m > kMaxSide) {
        throw OutOfRange(std::string(what) + ": side " + std::to_string(m) + " not in [1, " +
                         std::to_string(kMaxSide) + "]");
    }
}

std::uint8_t checked_byte(int value) {
    if (value < 0 || value > 255) {
        throw OutOfRange("byte value " + std::to_string(value) + " not in [0, 255]");
    }
    return static_cast<std::uint8_t>(value);
}

} // namespace

ByteVector::ByteVector(std::size_t m) : values_(m, 0) { check_side(m, "ByteVector"); }

ByteVector::ByteVector(std::initializer_list<int> values) {
    check_side(values.size(), "ByteVector");
    values_.reserve(values.size());
    for (int v : values) values_.push_back(checked_byte(v));
}

ByteVector::ByteVector(std::vector<std::uint8_t> values) : values_(std::move(values)) {
    check_side(values_.size(), "ByteVector");
}

ByteMatrix::ByteMatrix(std::size_t m) : m_(m), entries_(m * m, 0) { check_side(m, "ByteMatrix"); }

ByteMatrix::ByteMatrix(std::initializer_list<std::initializer_list<int>> rows) : m_(rows.size()) {
    check_side(m_, "ByteMatrix");
    entries_.reserve(m_ * m_);
    for (const auto& r : rows) {
        if (r.size() != m_) throw DimensionMismatch("ByteMatrix rows must form a square");
        for (int v : r) entries_.push_back(checked_byte(v));
    }
}

ByteMatrix::ByteMatrix(std::size_t m, std::vector<std::uint8_t> entries)
    : m_(m), entries_(std::move(entries)) {
    check_side(m, "ByteMatrix");
    if (entries_.size() != m * m) throw DimensionMismatch("ByteMatrix needs m*m entries");
}

ByteMatrix ByteMatrix::identity(std::size_t m) {
    ByteMatrix id(m);
    for (std::size_t i = 0; i < m; ++i) id(i, i) = 1;
    return id;
}

ByteVector ByteMatrix::column(std::size_t j) const {
    ByteVector c(m_);
    for (std::size_t i = 0; i < m_; ++i) c[i] = (*this)(i, j);
    return c;
}

std::string to_string(const ByteMatrix& a) {
    std::ostringstream os;
    for (std::size_t i = 0; i < a.side(); ++i) {
        for (std::size_t j = 0; j < a.side(); ++j) {
            if (j) os << ' ';
            os << int(a(i, j));
        }
        os << '\n';
    }
    return os.str();
}

std::string to_string(const ByteVector& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << int(v[i]);
    }
    return os.str();
}

ByteVector mat_vec_mul(const ByteVector& v, const ByteMatrix& a) {
    const std::size_t m = a.side();
    if (v.size() != m) throw DimensionMismatch("mat_vec_mul: vector length differs from matrix side");
    ByteVector out(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::uint32_t acc = 0;
        for (std::size_t i = 0; i < m; ++i) acc += std::uint32_t(v[i]) * a(i, j);
        out[j] = static_cast<std::uint8_t>(acc);
    }
    return out;
}

ByteMatrix mat_mul(const ByteMatrix& a, const ByteMatrix& b) {
    const std::size_t m = a.side();
    if (b.side() != m) throw DimensionMismatch("mat_mul: sides differ");
    ByteMatrix out(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            std::uint32_t acc = 0;
            for (std::size_t k = 0; k < m; ++k) acc += std::uint32_t(a(i, k)) * b(k, j);
            out(i, j) = static_cast<std::uint8_t>(acc);
        }
    }
    return out;
}

ByteMatrix mat_add(const ByteMatrix& a, const ByteMatrix& b) {
    if (a.side() != b.side()) throw DimensionMismatch("mat_add: sides differ");
    ByteMatrix out(a.side());
    for (std::size_t i = 0; i < a.side(); ++i)
        for (std::size_t j = 0; j < a.side(); ++j)
            out(i, j) = static_cast<std::uint8_t>(a(i, j) + b(i, j));
    return out;
}

ByteMatrix mat_sub(const ByteMatrix& a, const ByteMatrix& b) {
    if (a.side() != b.side()) throw DimensionMismatch("mat_sub: sides differ");
    ByteMatrix out(a.side());
    for (std::size_t i = 0; i < a.side(); ++i)
        for (std::size_t j = 0; j < a.side(); ++j)
            out(i, j) = static_cast<std::uint8_t>(a(i, j) - b(i, j));
    return out;
}

BigInt det_exact(const ByteMatrix& a) {
    const std::size_t m = a.side();
    std::vector<BigInt> w(a.entries().begin(), a.entries().end());
    auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return w[i * m + j]; };

    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        if (at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < m && at(p, k) == 0) ++p;
            if (p == m) return 0;
            for (std::size_t j = 0; j < m; ++j) std::swap(at(k, j), at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < m; ++i) {
            for (std::size_t j = k + 1; j < m; ++j) {
                // Exact by Sylvester's identity.
                at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
            }
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    return sign * at(m - 1, m - 1);
}

std::uint8_t det_mod(const ByteMatrix& a) {
    BigInt r = det_exact(a) % 256;
    if (r < 0) r += 256;
    return static_cast<std::uint8_t>(r.convert_to<unsigned>());
}

bool is_invertible(const ByteMatrix& a) { return (det_mod(a) & 1u) != 0; }

std::uint8_t inverse_byte(std::uint8_t x) {
    if ((x & 1u) == 0) throw NotInvertible("byte " + std::to_string(int(x)) + " is even");
    // Extended Euclid on (256, x), tracking only the coefficient of x.
    int r0 = 256, r1 = x;
    int t0 = 0, t1 = 1;
    while (r1 != 0) {
        const int q = r0 / r1;
        r0 = std::exchange(r1, r0 - q * r1);
        t0 = std::exchange(t1, t0 - q * t1);
    }
    return static_cast<std::uint8_t>(((t0 % 256) + 256) % 256);
}

ByteMatrix inverse_mod(const ByteMatrix& a) {
    const std::size_t m = a.side();
    ByteMatrix w = a;
    ByteMatrix inv = ByteMatrix::identity(m);

    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        while (pivot < m && (w(pivot, col) & 1u) == 0) ++pivot;
        if (pivot == m) {
            throw NotInvertible("matrix has even determinant (no odd pivot in column " +
                                std::to_string(col + 1) + ")");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(w(pivot, j), w(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const std::uint8_t scale = inverse_byte(w(col, col));
        for (std::size_t j = 0; j < m; ++j) {
            w(col, j) = static_cast<std::uint8_t>(w(col, j) * scale);
            inv(col, j) = static_cast<std::uint8_t>(inv(col, j) * scale);
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == col || w(i, col) == 0) continue;
            const std::uint8_t f = w(i, col);
            for (std::size_t j = 0; j < m; ++j) {
                w(i, j) = static_cast<std::uint8_t>(w(i, j) - f * w(col, j));
                inv(i, j) = static_cast<std::uint8_t>(inv(i, j) - f * inv(col, j));
            }
        }
    }
    return inv;
}

BigInt gl_count_pow2(std::size_t m, unsigned bits) {
    if (m < 1) throw OutOfRange("gl_count: m must be positive");
    if (bits < 1) throw OutOfRange("gl_count: ring must be Z_{2^bits} with bits >= 1");
    BigInt count = BigInt(1) << ((bits - 1) * m * m);
    const BigInt full = BigInt(1) << m;
    for (std::size_t k = 0; k < m; ++k) count *= full - (BigInt(1) << k);
    return count;
}

BigInt gl_count(std::size_t m) {
    if (m < 1 || m > kMaxSide) {
        throw OutOfRange("gl_count: m=" + std::to_string(m) + " not in [1, 16]");
    }
    return gl_count_pow2(m, 8);
}

InvertibleProbability invertible_probability(std::size_t m) {
    if (m < 1 || m > 64) {
        throw OutOfRange("invertible_probability: m=" + std::to_string(m) + " not in [1, 64]");
    }
    BigRational p = 1;
    for (std::size_t k = 1; k <= m; ++k) {
        const BigInt denom = BigInt(1) << k;
        p *= BigRational(denom - 1, denom);
    }
    return {p};
}

std::string InvertibleProbability::decimal(int places) const { return to_decimal(exact, places); }

double InvertibleProbability::approx() const { return exact.convert_to<double>(); }

std::string to_decimal(const BigRational& q, int places) {
    if (q < 0) throw OutOfRange("to_decimal: negative value");
    BigInt scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    const BigInt scaled = (2 * num * scale + den) / (2 * den);

    const BigInt whole = scaled / scale;
    std::string frac = BigInt(scaled % scale).str();
    std::string out = whole.str();
    if (places > 0) {
        out += '.';
        out += std::string(static_cast<std::size_t>(places) - frac.size(), '0') + frac;
    }
    return out;
}

} // namespace hillcrack
