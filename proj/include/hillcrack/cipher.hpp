#ifndef HILLCRACK_CIPHER_HPP
#define HILLCRACK_CIPHER_HPP

// The Hill-cipher image scheme under study.
//
// The plain-image is scanned in raster order and cut into blocks of m bytes
// (the last one zero-padded). Block l is encrypted as C_l = P_l * K_l mod 256.
// K_1 is part of the secret key; every later K_l starts as a copy of K_{l-1}
// and has its rows overwritten one by one, top to bottom, with IV * K_l,
// where each product already sees the rows rewritten before it.

#include "hillcrack/modmat.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hillcrack {

/// Row-major 8-bit grayscale raster.
///
/// A cipher-image whose pixel count is not a multiple of m also carries a
/// tail: the bytes of the last encrypted block that fall past the end of the
/// raster. They are needed to decrypt that block and are empty otherwise.
class GrayImage {
  public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height);
    GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }

    std::uint8_t operator[](std::size_t k) const { return pixels_[k]; }
    std::uint8_t& operator[](std::size_t k) { return pixels_[k]; }
    std::uint8_t at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    const std::vector<std::uint8_t>& tail() const noexcept { return tail_; }
    void set_tail(std::vector<std::uint8_t> tail);

    /// Pixels followed by the tail.
    std::vector<std::uint8_t> stream() const;

    bool same_shape(const GrayImage& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

  private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> pixels_;
    std::vector<std::uint8_t> tail_;
};

/// Bytewise (a + b) mod 256 of two equally sized images (tails included).
GrayImage image_add(const GrayImage& a, const GrayImage& b);

/// The scheme's full secret: block size m, first key matrix K1 and IV.
struct SecretKey {
    ByteMatrix k1;
    ByteVector iv;

    SecretKey(ByteMatrix k1_, ByteVector iv_);

    std::size_t m() const noexcept { return k1.side(); }
};

/// Outcome of checking a key against the validity condition
/// (det K1 odd and every IV entry odd).
struct KeyCheck {
    std::uint8_t det_k1 = 0;
    /// 1-based positions of even IV entries.
    std::vector<std::size_t> even_iv;

    bool det_odd() const noexcept { return (det_k1 & 1u) != 0; }
    bool valid() const noexcept { return det_odd() && even_iv.empty(); }
    /// "valid" or a short reason naming every failed condition.
    std::string describe() const;
};

KeyCheck validate_key(const SecretKey& key);

/// Splits the raster into ceil(MN/m) blocks. The last block is completed from
/// the image tail when present and zero-padded otherwise.
std::vector<ByteVector> blockify(const GrayImage& image, std::size_t m);

/// Number of blocks the raster is cut into.
inline std::size_t block_count(std::size_t pixels, std::size_t m) { return (pixels + m - 1) / m; }

/// One application of the row-by-row key update: K_prev -> K_next.
ByteMatrix key_schedule_step(const ByteMatrix& k_prev, const ByteVector& iv);

/// The same update restricted to one column. Columns of K_l evolve
/// independently under the schedule, so this is the column of
/// key_schedule_step(K, iv) when `column` is a column of K.
void column_schedule_step(std::span<std::uint8_t> column, const ByteVector& iv);

/// Lazily generated key sequence K_1, K_2, ...
class KeyStream {
  public:
    explicit KeyStream(const SecretKey& key);

    const ByteMatrix& current() const noexcept { return current_; }
    /// 1-based block index of current().
    std::size_t index() const noexcept { return index_; }
    void advance();

  private:
    ByteMatrix current_;
    ByteVector iv_;
    std::size_t index_ = 1;
};

KeyStream key_stream(const SecretKey& key);

/// First `count` key matrices, K_1 .. K_count.
std::vector<ByteMatrix> key_matrices(const SecretKey& key, std::size_t count);

/// Throws InvalidKey unless validate_key(key).valid().
void require_valid(const SecretKey& key);

/// Solves p * K = c for a block of which only the first r bytes of c are
/// known and the last m - r bytes of p are zero padding.
ByteVector solve_partial_block(const ByteVector& c, const ByteMatrix& k, std::size_t r);

/// Output has the plain-image's dimensions; when m does not divide MN the
/// cut-off bytes of the last block go to the tail.
GrayImage encrypt(const GrayImage& plain, const SecretKey& key);

/// encrypt without the validity gate. Used to observe what an invalid key
/// does; the result need not be decryptable.
GrayImage encrypt_unchecked(const GrayImage& plain, const SecretKey& key);

/// Inverse of encrypt. A partial last block without a tail is solved from
/// its visible bytes alone, which needs the leading r x r corner of K_l to be
/// invertible (NotInvertible otherwise).
GrayImage decrypt(const GrayImage& cipher, const SecretKey& key);

} // namespace hillcrack

#endif
