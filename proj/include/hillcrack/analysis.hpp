#ifndef HILLCRACK_ANALYSIS_HPP
#define HILLCRACK_ANALYSIS_HPP

// Sensitivity experiments: flip one bit of K1, IV or the plain-image,
// encrypt both versions and look at where and in which bit-planes the two
// cipher-images differ.

#include "hillcrack/cipher.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hillcrack {

struct DiffReport {
    std::size_t width = 0;
    std::size_t height = 0;
    /// (C~[k] - C[k]) mod 256.
    std::vector<std::uint8_t> diff;
    /// |C~[k] - C[k]| over the integers.
    std::vector<std::uint8_t> abs_diff;
    /// planes[b][k] is bit b of abs_diff[k].
    std::array<std::vector<bool>, 8> planes;
    std::array<std::size_t, 8> per_plane_count{};
    /// 0-based raster indices with diff != 0.
    std::vector<std::size_t> affected_positions;

    bool identical() const noexcept { return affected_positions.empty(); }
};

DiffReport diff_bitplanes(const GrayImage& c, const GrayImage& c_tilde);

/// Flips bit `bit` of K1[row, col] (1-based, as in K1[1,2]).
struct K1Flip {
    std::size_t row = 1;
    std::size_t col = 1;
    unsigned bit = 0;
};

/// Flips bit `bit` of IV[index] (1-based).
struct IvFlip {
    std::size_t index = 1;
    unsigned bit = 0;
};

/// Flips bit `bit` of the plain-image pixel at 1-based raster position `index`.
struct PixelFlip {
    std::size_t index = 1;
    unsigned bit = 0;
};

/// Common outcome of a flip experiment.
struct FlipExperiment {
    DiffReport report;
    /// Whether the modified key still passes validate_key.
    bool flipped_key_valid = true;
    /// Histogram of affected positions by 1-based block offset (index 0 unused).
    std::vector<std::size_t> offset_histogram;
    /// Blocks (1-based) containing at least one changed byte.
    std::vector<std::size_t> affected_blocks;
};

struct K1FlipResult : FlipExperiment {
    /// Every affected position lies at block offset == flipped column.
    bool column_confined = true;
    /// 2^bit divides every diff and abs_diff entry.
    bool divisible = true;
};

struct IvFlipResult : FlipExperiment {
    /// Signed change of the flipped IV entry, +2^n or -2^n, mod 256.
    std::uint8_t delta = 0;
    ByteMatrix k2 = ByteMatrix(1);
    ByteMatrix k2_tilde = ByteMatrix(1);
    /// K2~ - K2 mod 256.
    ByteMatrix d2 = ByteMatrix(1);
    /// First row of D2 predicted as delta * K1[index, :] mod 256; for a 0->1
    /// flip of IV[1] this is K1[1, :] * 2^n.
    ByteVector predicted_first_row;
    bool first_row_law_holds = false;
};

struct PixelFlipResult : FlipExperiment {
    /// No byte outside the block containing the flipped pixel changed.
    bool block_local = true;
};

/// Throws InvalidKey for an invalid original key and FlipOutOfRange for a
/// position or bit outside the key.
K1FlipResult k1_bitflip_experiment(const GrayImage& plain, const SecretKey& key, const K1Flip& flip);
IvFlipResult iv_bitflip_experiment(const GrayImage& plain, const SecretKey& key, const IvFlip& flip);
PixelFlipResult plaintext_flip_experiment(const GrayImage& plain, const SecretKey& key,
                                          const PixelFlip& flip);

/// Deterministic structured image: concentric rectangles on the upper half,
/// vertical constant bands on the lower half (leftmost band is zero).
GrayImage make_test_pattern(std::size_t width, std::size_t height);

/// Deterministic uniform random image.
GrayImage make_random_image(std::size_t width, std::size_t height, std::uint64_t seed);

/// Writes <stem>.diff.pgm, <stem>.absdiff.pgm, <stem>.plane<b>.pgm (b = 0..7,
/// set pixels 255) and <stem>.txt. Returns the text summary.
std::string write_diff_report(const FlipExperiment& experiment, const std::filesystem::path& stem);

/// Per-plane counts and the affected-offset histogram as plain text.
std::string summarize(const FlipExperiment& experiment);

} // namespace hillcrack

#endif
