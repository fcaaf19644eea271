#include "hillcrack/analysis.hpp"

#include "hillcrack/error.hpp"
#include "hillcrack/io.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace hillcrack {

DiffReport diff_bitplanes(const GrayImage& c, const GrayImage& c_tilde) {
    if (!c.same_shape(c_tilde)) throw DimensionMismatch("diff_bitplanes: image sizes differ");
    DiffReport r;
    r.width = c.width();
    r.height = c.height();
    const std::size_t n = c.size();
    r.diff.resize(n);
    r.abs_diff.resize(n);
    for (auto& plane : r.planes) plane.assign(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const int d = int(c_tilde[k]) - int(c[k]);
        r.diff[k] = static_cast<std::uint8_t>(d);
        r.abs_diff[k] = static_cast<std::uint8_t>(d < 0 ? -d : d);
        if (d != 0) r.affected_positions.push_back(k);
        for (unsigned b = 0; b < 8; ++b) {
            if ((r.abs_diff[k] >> b) & 1u) {
                r.planes[b][k] = true;
                ++r.per_plane_count[b];
            }
        }
    }
    return r;
}

namespace {

void check_bit(unsigned bit) {
    if (bit > 7) throw FlipOutOfRange("bit " + std::to_string(bit) + " not in [0, 7]");
}

void fill_offsets(FlipExperiment& e, std::size_t m) {
    e.offset_histogram.assign(m + 1, 0);
    for (std::size_t k : e.report.affected_positions) {
        ++e.offset_histogram[k % m + 1];
        const std::size_t block = k / m + 1;
        if (e.affected_blocks.empty() || e.affected_blocks.back() != block) e.affected_blocks.push_back(block);
    }
}

} // namespace

K1FlipResult k1_bitflip_experiment(const GrayImage& plain, const SecretKey& key, const K1Flip& flip) {
    require_valid(key);
    const std::size_t m = key.m();
    if (flip.row < 1 || flip.row > m || flip.col < 1 || flip.col > m) {
        throw FlipOutOfRange("K1 position [" + std::to_string(flip.row) + "," + std::to_string(flip.col) +
                             "] outside a " + std::to_string(m) + "x" + std::to_string(m) + " key");
    }
    check_bit(flip.bit);

    SecretKey flipped = key;
    flipped.k1(flip.row - 1, flip.col - 1) ^= static_cast<std::uint8_t>(1u << flip.bit);

    K1FlipResult out;
    out.flipped_key_valid = validate_key(flipped).valid();
    out.report = diff_bitplanes(encrypt(plain, key), encrypt_unchecked(plain, flipped));
    fill_offsets(out, m);

    const unsigned mask = (1u << flip.bit) - 1u;
    for (std::size_t k : out.report.affected_positions) {
        if (k % m + 1 != flip.col) out.column_confined = false;
        if ((out.report.diff[k] & mask) || (out.report.abs_diff[k] & mask)) out.divisible = false;
    }
    return out;
}

IvFlipResult iv_bitflip_experiment(const GrayImage& plain, const SecretKey& key, const IvFlip& flip) {
    require_valid(key);
    const std::size_t m = key.m();
    if (flip.index < 1 || flip.index > m) {
        throw FlipOutOfRange("IV index " + std::to_string(flip.index) + " outside [1, " + std::to_string(m) + "]");
    }
    check_bit(flip.bit);

    SecretKey flipped = key;
    flipped.iv[flip.index - 1] ^= static_cast<std::uint8_t>(1u << flip.bit);

    IvFlipResult out;
    out.flipped_key_valid = validate_key(flipped).valid();
    out.report = diff_bitplanes(encrypt(plain, key), encrypt_unchecked(plain, flipped));
    fill_offsets(out, m);

    out.delta = static_cast<std::uint8_t>(flipped.iv[flip.index - 1] - key.iv[flip.index - 1]);
    out.k2 = key_schedule_step(key.k1, key.iv);
    out.k2_tilde = key_schedule_step(key.k1, flipped.iv);
    out.d2 = mat_sub(out.k2_tilde, out.k2);
    out.predicted_first_row = ByteVector(m);
    for (std::size_t j = 0; j < m; ++j)
        out.predicted_first_row[j] = static_cast<std::uint8_t>(out.delta * key.k1(flip.index - 1, j));
    out.first_row_law_holds = std::ranges::equal(out.d2.row(0), out.predicted_first_row.bytes());
    return out;
}

PixelFlipResult plaintext_flip_experiment(const GrayImage& plain, const SecretKey& key, const PixelFlip& flip) {
    require_valid(key);
    if (flip.index < 1 || flip.index > plain.size()) {
        throw FlipOutOfRange("pixel " + std::to_string(flip.index) + " outside [1, " +
                             std::to_string(plain.size()) + "]");
    }
    check_bit(flip.bit);
    const std::size_t m = key.m();

    GrayImage flipped = plain;
    flipped[flip.index - 1] ^= static_cast<std::uint8_t>(1u << flip.bit);

    PixelFlipResult out;
    out.report = diff_bitplanes(encrypt(plain, key), encrypt(flipped, key));
    fill_offsets(out, m);
    const std::size_t block = (flip.index - 1) / m;
    for (std::size_t k : out.report.affected_positions)
        if (k / m != block) out.block_local = false;
    return out;
}

GrayImage make_test_pattern(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) throw OutOfRange("make_test_pattern: dimensions must be positive");
    static constexpr std::array<std::uint8_t, 4> kRingLevels{255, 128, 64, 192};
    GrayImage img(width, height);
    const std::size_t upper = height / 2;
    const std::size_t thickness = std::max<std::size_t>(1, std::min(width, upper) / 16);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            std::uint8_t v;
            if (y < upper) {
                const std::size_t ring = std::min({x, y, width - 1 - x, upper - 1 - y});
                v = kRingLevels[(ring / thickness) % kRingLevels.size()];
            } else {
                v = static_cast<std::uint8_t>(32 * (x * 8 / width));
            }
            img[y * width + x] = v;
        }
    }
    return img;
}

GrayImage make_random_image(std::size_t width, std::size_t height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GrayImage img(width, height);
    auto px = img.pixels();
    for (std::size_t k = 0; k < px.size(); k += 8) {
        std::uint64_t word = rng();
        for (std::size_t b = 0; b < 8 && k + b < px.size(); ++b, word >>= 8)
            px[k + b] = static_cast<std::uint8_t>(word);
    }
    return img;
}

std::string summarize(const FlipExperiment& e) {
    std::ostringstream os;
    const DiffReport& r = e.report;
    os << "size " << r.width << "x" << r.height << "\n";
    os << "changed_pixels " << r.affected_positions.size() << "\n";
    os << "changed_blocks " << e.affected_blocks.size() << "\n";
    os << "flipped_key_valid " << (e.flipped_key_valid ? "yes" : "no") << "\n";
    for (unsigned b = 0; b < 8; ++b) os << "plane" << b << " " << r.per_plane_count[b] << "\n";
    for (std::size_t o = 1; o < e.offset_histogram.size(); ++o)
        os << "offset" << o << " " << e.offset_histogram[o] << "\n";
    return os.str();
}

std::string write_diff_report(const FlipExperiment& e, const std::filesystem::path& stem) {
    const DiffReport& r = e.report;
    auto path_for = [&](const std::string& suffix) {
        std::filesystem::path p = stem;
        p += suffix;
        return p;
    };
    write_pgm(GrayImage(r.width, r.height, r.diff), path_for(".diff.pgm"));
    write_pgm(GrayImage(r.width, r.height, r.abs_diff), path_for(".absdiff.pgm"));
    for (unsigned b = 0; b < 8; ++b) {
        GrayImage mask(r.width, r.height);
        for (std::size_t k = 0; k < mask.size(); ++k) mask[k] = r.planes[b][k] ? 255 : 0;
        write_pgm(mask, path_for(".plane" + std::to_string(b) + ".pgm"));
    }
    const std::string summary = summarize(e);
    write_file(path_for(".txt"), summary);
    return summary;
}

} // namespace hillcrack
