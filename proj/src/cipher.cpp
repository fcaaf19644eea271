#include "hillcrack/cipher.hpp"

#include "hillcrack/error.hpp"

#include <algorithm>
#include <sstream>

namespace hillcrack {

GrayImage::GrayImage(std::size_t width, std::size_t height)
    : width_(width), height_(height), pixels_(width * height, 0) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != width * height) {
        throw DimensionMismatch("GrayImage: " + std::to_string(pixels_.size()) +
                                " pixels for a " + std::to_string(width) + "x" +
                                std::to_string(height) + " raster");
    }
}

void GrayImage::set_tail(std::vector<std::uint8_t> tail) {
    if (tail.size() >= kMaxSide) throw DimensionMismatch("GrayImage: tail longer than a block");
    tail_ = std::move(tail);
}

std::vector<std::uint8_t> GrayImage::stream() const {
    std::vector<std::uint8_t> s(pixels_);
    s.insert(s.end(), tail_.begin(), tail_.end());
    return s;
}

GrayImage image_add(const GrayImage& a, const GrayImage& b) {
    if (!a.same_shape(b) || a.tail().size() != b.tail().size()) {
        throw DimensionMismatch("image_add: shapes differ");
    }
    GrayImage out(a.width(), a.height());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = static_cast<std::uint8_t>(a[k] + b[k]);
    std::vector<std::uint8_t> tail(a.tail().size());
    for (std::size_t k = 0; k < tail.size(); ++k)
        tail[k] = static_cast<std::uint8_t>(a.tail()[k] + b.tail()[k]);
    out.set_tail(std::move(tail));
    return out;
}

SecretKey::SecretKey(ByteMatrix k1_, ByteVector iv_) : k1(std::move(k1_)), iv(std::move(iv_)) {
    if (iv.size() != k1.side()) {
        throw DimensionMismatch("SecretKey: IV has " + std::to_string(iv.size()) +
                                " entries but K1 is " + std::to_string(k1.side()) + "x" +
                                std::to_string(k1.side()));
    }
}

std::string KeyCheck::describe() const {
    if (valid()) return "valid";
    std::ostringstream os;
    os << "invalid:";
    if (!det_odd()) os << " det(K1) mod 256 = " << int(det_k1) << " is even;";
    if (!even_iv.empty()) {
        os << " even IV entries at";
        for (auto i : even_iv) os << ' ' << i;
        os << ';';
    }
    std::string s = os.str();
    s.pop_back();
    return s;
}

KeyCheck validate_key(const SecretKey& key) {
    KeyCheck check;
    check.det_k1 = det_mod(key.k1);
    for (std::size_t i = 0; i < key.iv.size(); ++i)
        if ((key.iv[i] & 1u) == 0) check.even_iv.push_back(i + 1);
    return check;
}

void require_valid(const SecretKey& key) {
    const KeyCheck check = validate_key(key);
    if (!check.valid()) throw InvalidKey(check.describe());
}

std::vector<ByteVector> blockify(const GrayImage& image, std::size_t m) {
    if (m < 1) throw OutOfRange("blockify: m must be positive");
    const std::vector<std::uint8_t> stream = image.stream();
    std::vector<ByteVector> blocks;
    blocks.reserve(block_count(image.size(), m));
    for (std::size_t start = 0; start < image.size(); start += m) {
        ByteVector b(m);
        const std::size_t n = std::min(m, stream.size() - start);
        std::copy_n(stream.begin() + static_cast<std::ptrdiff_t>(start), n, b.bytes().begin());
        blocks.push_back(std::move(b));
    }
    return blocks;
}

ByteMatrix key_schedule_step(const ByteMatrix& k_prev, const ByteVector& iv) {
    const std::size_t m = k_prev.side();
    if (iv.size() != m) throw DimensionMismatch("key_schedule_step: IV length differs from m");
    ByteMatrix w = k_prev;
    for (std::size_t i = 0; i < m; ++i) {
        ByteVector row = mat_vec_mul(iv, w);
        std::copy(row.bytes().begin(), row.bytes().end(), w.row(i).begin());
    }
    return w;
}

void column_schedule_step(std::span<std::uint8_t> column, const ByteVector& iv) {
    const std::size_t m = column.size();
    if (iv.size() != m) throw DimensionMismatch("column_schedule_step: IV length differs from m");
    for (std::size_t i = 0; i < m; ++i) {
        std::uint32_t acc = 0;
        for (std::size_t k = 0; k < m; ++k) acc += std::uint32_t(iv[k]) * column[k];
        column[i] = static_cast<std::uint8_t>(acc);
    }
}

KeyStream::KeyStream(const SecretKey& key) : current_(key.k1), iv_(key.iv) {}

void KeyStream::advance() {
    current_ = key_schedule_step(current_, iv_);
    ++index_;
}

KeyStream key_stream(const SecretKey& key) { return KeyStream(key); }

std::vector<ByteMatrix> key_matrices(const SecretKey& key, std::size_t count) {
    std::vector<ByteMatrix> out;
    out.reserve(count);
    KeyStream ks(key);
    for (std::size_t l = 0; l < count; ++l) {
        if (l) ks.advance();
        out.push_back(ks.current());
    }
    return out;
}

namespace {

// Runs `transform(block, K_l)` over every block and writes the result back.
// Bytes of the final block past the raster end up in the tail.
template <typename Transform>
GrayImage blockwise(const GrayImage& in, const SecretKey& key, Transform transform) {
    const std::size_t m = key.m();
    GrayImage out(in.width(), in.height());
    auto dst = out.pixels();
    KeyStream ks(key);
    std::size_t start = 0;
    for (const ByteVector& block : blockify(in, m)) {
        const ByteVector result = transform(block, ks.current());
        const std::size_t n = std::min(m, dst.size() - start);
        std::copy_n(result.bytes().begin(), n, dst.begin() + static_cast<std::ptrdiff_t>(start));
        if (n < m) out.set_tail({result.bytes().begin() + static_cast<std::ptrdiff_t>(n), result.bytes().end()});
        start += m;
        ks.advance();
    }
    return out;
}

} // namespace

ByteVector solve_partial_block(const ByteVector& c, const ByteMatrix& k, std::size_t r) {
    ByteMatrix corner(r);
    ByteVector visible(r);
    for (std::size_t i = 0; i < r; ++i) {
        visible[i] = c[i];
        for (std::size_t j = 0; j < r; ++j) corner(i, j) = k(i, j);
    }
    const ByteVector head = mat_vec_mul(visible, inverse_mod(corner));
    ByteVector p(k.side());
    std::copy(head.bytes().begin(), head.bytes().end(), p.bytes().begin());
    return p;
}

GrayImage encrypt(const GrayImage& plain, const SecretKey& key) {
    require_valid(key);
    return encrypt_unchecked(plain, key);
}

GrayImage encrypt_unchecked(const GrayImage& plain, const SecretKey& key) {
    if (!plain.tail().empty()) throw DimensionMismatch("encrypt: plain-image carries a cipher tail");
    return blockwise(plain, key, [](const ByteVector& p, const ByteMatrix& k) { return mat_vec_mul(p, k); });
}

GrayImage decrypt(const GrayImage& cipher, const SecretKey& key) {
    require_valid(key);
    const std::size_t m = key.m();
    const std::size_t r = cipher.size() % m;
    const std::size_t last = block_count(cipher.size(), m);
    const bool partial = r != 0 && cipher.tail().empty();
    if (!cipher.tail().empty() && (r == 0 || cipher.tail().size() != m - r)) {
        throw DimensionMismatch("decrypt: tail of " + std::to_string(cipher.tail().size()) +
                                " bytes does not fit block size " + std::to_string(m));
    }
    std::size_t l = 0;
    GrayImage out = blockwise(cipher, key, [&](const ByteVector& c, const ByteMatrix& k) {
        ++l;
        if (partial && l == last) return solve_partial_block(c, k, r);
        return mat_vec_mul(c, inverse_mod(k));
    });
    out.set_tail({});
    return out;
}

} // namespace hillcrack
