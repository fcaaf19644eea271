#ifndef HILLCRACK_MODMAT_HPP
#define HILLCRACK_MODMAT_HPP

// Matrix arithmetic over Z_256.
//
// Everything here is a pure function of its arguments. Entries are stored as
// bytes so reduction mod 256 is implicit in every store; products are
// accumulated in 32-bit integers before truncation.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hillcrack {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Largest supported block size.
inline constexpr std::size_t kMaxSide = 16;

/// Row vector over Z_256 (IV, plaintext blocks, ciphertext blocks).
class ByteVector {
  public:
    ByteVector() = default;
    explicit ByteVector(std::size_t m);
    ByteVector(std::initializer_list<int> values);
    explicit ByteVector(std::vector<std::uint8_t> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::uint8_t operator[](std::size_t i) const { return values_[i]; }
    std::uint8_t& operator[](std::size_t i) { return values_[i]; }

    std::span<const std::uint8_t> bytes() const noexcept { return values_; }
    std::span<std::uint8_t> bytes() noexcept { return values_; }

    friend bool operator==(const ByteVector&, const ByteVector&) = default;

  private:
    std::vector<std::uint8_t> values_;
};

/// Square m x m matrix over Z_256, row-major, 1 <= m <= kMaxSide.
class ByteMatrix {
  public:
    /// Zero matrix of side m.
    explicit ByteMatrix(std::size_t m);
    /// Builds from rows; every row must have the same length as the row count
    /// and every value must lie in [0, 255].
    ByteMatrix(std::initializer_list<std::initializer_list<int>> rows);
    ByteMatrix(std::size_t m, std::vector<std::uint8_t> entries);

    static ByteMatrix identity(std::size_t m);

    std::size_t side() const noexcept { return m_; }

    std::uint8_t operator()(std::size_t i, std::size_t j) const { return entries_[i * m_ + j]; }
    std::uint8_t& operator()(std::size_t i, std::size_t j) { return entries_[i * m_ + j]; }

    std::span<const std::uint8_t> row(std::size_t i) const {
        return std::span<const std::uint8_t>(entries_).subspan(i * m_, m_);
    }
    std::span<std::uint8_t> row(std::size_t i) {
        return std::span<std::uint8_t>(entries_).subspan(i * m_, m_);
    }
    ByteVector column(std::size_t j) const;

    std::span<const std::uint8_t> entries() const noexcept { return entries_; }

    friend bool operator==(const ByteMatrix&, const ByteMatrix&) = default;

  private:
    std::size_t m_;
    std::vector<std::uint8_t> entries_;
};

std::string to_string(const ByteMatrix& a);
std::string to_string(const ByteVector& v);

/// (v * A) mod 256 with v a row vector.
ByteVector mat_vec_mul(const ByteVector& v, const ByteMatrix& a);

/// (A * B) mod 256.
ByteMatrix mat_mul(const ByteMatrix& a, const ByteMatrix& b);

/// Bytewise (A + B) mod 256.
ByteMatrix mat_add(const ByteMatrix& a, const ByteMatrix& b);

/// Bytewise (A - B) mod 256.
ByteMatrix mat_sub(const ByteMatrix& a, const ByteMatrix& b);

/// Exact integer determinant of A (entries read as 0..255), by fraction-free
/// Bareiss elimination.
BigInt det_exact(const ByteMatrix& a);

/// det(A) mod 256, exact for even determinants as well.
std::uint8_t det_mod(const ByteMatrix& a);

/// True iff det_mod(A) is odd, i.e. A is a unit of M_m(Z_256).
bool is_invertible(const ByteMatrix& a);

/// Inverse of A over Z_256 by Gauss-Jordan with odd pivots.
/// Throws NotInvertible when no such inverse exists.
ByteMatrix inverse_mod(const ByteMatrix& a);

/// Multiplicative inverse of an odd byte modulo 256 (extended Euclid).
/// Throws NotInvertible for even input.
std::uint8_t inverse_byte(std::uint8_t x);

/// |GL(m, Z_{2^bits})| = 2^{(bits-1) m^2} * prod_{k=0}^{m-1} (2^m - 2^k).
BigInt gl_count_pow2(std::size_t m, unsigned bits);

/// |GL(m, Z_256)|, 1 <= m <= 16.
BigInt gl_count(std::size_t m);

struct InvertibleProbability {
    BigRational exact;
    std::string decimal(int places = 6) const;
    double approx() const;
};

/// Probability that a uniformly random m x m matrix over Z_256 is invertible:
/// prod_{k=1}^{m} (1 - 2^{-k}). 1 <= m <= 64.
InvertibleProbability invertible_probability(std::size_t m);

/// Renders a non-negative rational rounded half-up to `places` decimals.
std::string to_decimal(const BigRational& q, int places);

} // namespace hillcrack

#endif
