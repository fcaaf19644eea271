#include "hillcrack/analysis.hpp"
#include "hillcrack/error.hpp"
#include "hillcrack/io.hpp"
#include "hillcrack/keystats.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>

using namespace hillcrack;

namespace {

SecretKey reference_key() {
    return SecretKey(ByteMatrix{{11, 2, 3, 7}, {8, 5, 19, 103}, {201, 203, 119, 150}, {7, 9, 21, 35}},
                     ByteVector{3, 9, 17, 33});
}

SecretKey random_valid_key(std::mt19937_64& rng, std::size_t m) {
    return SecretKey(oracle::random_invertible(rng, m), oracle::random_vector(rng, m, true));
}

} // namespace

TEST_CASE("diff_bitplanes") {
    const auto a = make_random_image(8, 8, 1);
    const auto same = diff_bitplanes(a, a);
    CHECK(same.identical());
    for (unsigned b = 0; b < 8; ++b) CHECK(same.per_plane_count[b] == 0);

    auto b = a;
    b[10] = static_cast<std::uint8_t>(b[10] + 32);
    const auto one = diff_bitplanes(a, b);
    CHECK(one.affected_positions == std::vector<std::size_t>{10});
    CHECK(one.diff[10] == 32);
    CHECK(one.per_plane_count[5] == 1);
    CHECK(one.planes[5][10]);
    for (unsigned p = 0; p < 5; ++p) CHECK_FALSE(one.planes[p][10]);

    // abs_diff is the integer distance, not the modular difference.
    GrayImage x(2, 1, {250, 3}), y(2, 1, {4, 1});
    const auto r = diff_bitplanes(x, y);
    CHECK(r.diff[0] == 10);
    CHECK(r.abs_diff[0] == 246);
    CHECK(r.diff[1] == 254);
    CHECK(r.abs_diff[1] == 2);

    CHECK_THROWS_AS(diff_bitplanes(GrayImage(2, 2), GrayImage(2, 3)), DimensionMismatch);
}

TEST_CASE("diff_bitplanes plane counts match the planes") {
    const auto a = make_random_image(16, 16, 2), b = make_random_image(16, 16, 3);
    const auto r = diff_bitplanes(a, b);
    for (unsigned p = 0; p < 8; ++p)
        CHECK(std::size_t(std::count(r.planes[p].begin(), r.planes[p].end(), true)) == r.per_plane_count[p]);
}

TEST_CASE("k1 flip: identity key m = 1") {
    const SecretKey key(ByteMatrix{{1}}, ByteVector{1});
    const auto r = k1_bitflip_experiment(GrayImage(2, 1, {1, 1}), key, {1, 1, 0});
    // 1 -> 0: C~ - C = -1.
    CHECK(r.report.diff == std::vector<std::uint8_t>{255, 255});
    CHECK(r.report.abs_diff == std::vector<std::uint8_t>{1, 1});
    CHECK(r.report.per_plane_count[0] == 2);
    CHECK_FALSE(r.flipped_key_valid);
    CHECK(r.column_confined);
    CHECK(r.divisible);
}

TEST_CASE("k1 flip: reference key, bit 5 of K1[1,2]") {
    const auto r = k1_bitflip_experiment(make_random_image(64, 64, 1), reference_key(), {1, 2, 5});
    for (unsigned p = 0; p < 5; ++p) CHECK(r.report.per_plane_count[p] == 0);
    CHECK(r.divisible);
    CHECK(r.column_confined);
    CHECK_FALSE(r.report.identical());
    CHECK(r.offset_histogram[1] == 0);
    CHECK(r.offset_histogram[3] == 0);
    CHECK(r.offset_histogram[4] == 0);
    CHECK(r.flipped_key_valid);
}

TEST_CASE("k1 flip leaves blocks with P_l D_l[:,j0] = 0 untouched") {
    // Zero blocks cannot pick up any difference.
    GrayImage img(8, 1, {0, 0, 0, 0, 5, 6, 7, 8});
    const auto r = k1_bitflip_experiment(img, reference_key(), {1, 2, 5});
    for (std::size_t k : r.report.affected_positions) CHECK(k >= 4);
    CHECK(std::find(r.affected_blocks.begin(), r.affected_blocks.end(), 1) == r.affected_blocks.end());
}

TEST_CASE("k1 flip: confinement and divisibility over random keys") {
    std::mt19937_64 rng(20);
    std::size_t experiments_with_change = 0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t m = 1 + t % 6;
        const auto key = random_valid_key(rng, m);
        const K1Flip flip{1 + rng() % m, 1 + rng() % m, unsigned(rng() % 8)};
        const auto r = k1_bitflip_experiment(make_random_image(24, 24, rng()), key, flip);
        REQUIRE(r.column_confined);
        REQUIRE(r.divisible);
        const unsigned step = 1u << flip.bit;
        for (std::size_t k : r.report.affected_positions) {
            REQUIRE(r.report.diff[k] % step == 0);
            REQUIRE(r.report.abs_diff[k] % step == 0);
        }
        experiments_with_change += !r.report.identical();
    }
    CHECK(experiments_with_change == 60);
}

TEST_CASE("k1 flip errors") {
    const auto img = make_random_image(4, 4, 1);
    CHECK_THROWS_AS(k1_bitflip_experiment(img, reference_key(), {5, 1, 0}), FlipOutOfRange);
    CHECK_THROWS_AS(k1_bitflip_experiment(img, reference_key(), {1, 0, 0}), FlipOutOfRange);
    CHECK_THROWS_AS(k1_bitflip_experiment(img, reference_key(), {1, 1, 8}), FlipOutOfRange);
    const SecretKey bad(ByteMatrix{{2}}, ByteVector{1});
    CHECK_THROWS_AS(k1_bitflip_experiment(img, bad, {1, 1, 0}), InvalidKey);
}

TEST_CASE("iv flip: m = 1 hand example") {
    const SecretKey key(ByteMatrix{{1}}, ByteVector{1});
    const auto r = iv_bitflip_experiment(GrayImage(3, 1, {1, 1, 1}), key, {1, 1});
    CHECK(r.k2 == ByteMatrix{{1}});
    CHECK(r.k2_tilde == ByteMatrix{{3}});
    CHECK(r.d2 == ByteMatrix{{2}});
    CHECK(r.delta == 2);
    CHECK(r.first_row_law_holds);
    // Blocks: 1*1, 1*1 vs 1*3, 1*1 vs 1*9.
    CHECK(r.report.diff == std::vector<std::uint8_t>{0, 2, 8});
}

TEST_CASE("iv flip: reference key, bit 5 of IV[1]") {
    const auto r = iv_bitflip_experiment(make_random_image(64, 64, 1), reference_key(), {1, 5});
    CHECK(r.delta == 32);
    CHECK(r.predicted_first_row == ByteVector{96, 64, 96, 224});
    CHECK(std::ranges::equal(r.d2.row(0), r.predicted_first_row.bytes()));
    CHECK(r.first_row_law_holds);
    std::size_t offsets_hit = 0;
    for (std::size_t o = 1; o <= 4; ++o) offsets_hit += r.offset_histogram[o] > 0;
    CHECK(offsets_hit > 1);
}

TEST_CASE("iv flip: first-row law over random keys and positions") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 60; ++t) {
        const std::size_t m = 1 + t % 6;
        const auto key = random_valid_key(rng, m);
        const IvFlip flip{1 + rng() % m, unsigned(rng() % 8)};
        const auto r = iv_bitflip_experiment(make_random_image(8, 8, rng()), key, flip);
        REQUIRE(r.first_row_law_holds);
        const bool set_before = (key.iv[flip.index - 1] >> flip.bit) & 1u;
        REQUIRE(r.delta == std::uint8_t(set_before ? 256 - (1u << flip.bit) : (1u << flip.bit)));
        REQUIRE(r.flipped_key_valid == (flip.bit != 0));
    }
}

TEST_CASE("plaintext flip") {
    const SecretKey id(ByteMatrix{{1}}, ByteVector{1});
    const auto img = make_random_image(5, 5, 4);
    for (unsigned bit = 0; bit < 8; ++bit) {
        const auto r = plaintext_flip_experiment(img, id, {7, bit});
        REQUIRE(r.report.affected_positions == std::vector<std::size_t>{6});
        REQUIRE(r.report.abs_diff[6] == (1u << bit));
        REQUIRE(r.block_local);
    }

    std::mt19937_64 rng(22);
    const auto key = random_valid_key(rng, 4);
    const auto big = make_random_image(16, 16, 5);
    for (int t = 0; t < 100; ++t) {
        const PixelFlip flip{1 + rng() % big.size(), unsigned(rng() % 8)};
        const auto r = plaintext_flip_experiment(big, key, flip);
        REQUIRE(r.block_local);
        REQUIRE(r.report.affected_positions.size() <= 4);
        REQUIRE(r.affected_blocks.size() <= 1);
    }

    CHECK_THROWS_AS(plaintext_flip_experiment(img, id, {0, 1}), FlipOutOfRange);
    CHECK_THROWS_AS(plaintext_flip_experiment(img, id, {26, 1}), FlipOutOfRange);
}

TEST_CASE("make_test_pattern golden 8x8") {
    const std::vector<std::uint8_t> golden{
        255, 255, 255, 255, 255, 255, 255, 255, //
        255, 128, 128, 128, 128, 128, 128, 255, //
        255, 128, 128, 128, 128, 128, 128, 255, //
        255, 255, 255, 255, 255, 255, 255, 255, //
        0,   32,  64,  96,  128, 160, 192, 224, //
        0,   32,  64,  96,  128, 160, 192, 224, //
        0,   32,  64,  96,  128, 160, 192, 224, //
        0,   32,  64,  96,  128, 160, 192, 224, //
    };
    CHECK(std::ranges::equal(make_test_pattern(8, 8).pixels(), golden));
    CHECK(make_test_pattern(8, 8) == make_test_pattern(8, 8));
    CHECK_THROWS_AS(make_test_pattern(0, 4), OutOfRange);
}

TEST_CASE("test pattern keeps its structure through encryption") {
    const SecretKey key = reference_key();
    const std::size_t m = key.m();
    const std::size_t w = 256, h = 256;
    const auto plain = make_test_pattern(w, h);
    const auto cipher = encrypt(plain, key);

    // Zero blocks of the band on the left stay zero.
    const auto pb = blockify(plain, m), cb = blockify(cipher, m);
    std::size_t zero_blocks = 0;
    for (std::size_t l = 0; l < pb.size(); ++l) {
        if (std::ranges::all_of(pb[l].bytes(), [](auto v) { return v == 0; })) {
            REQUIRE(std::ranges::all_of(cb[l].bytes(), [](auto v) { return v == 0; }));
            ++zero_blocks;
        }
    }
    CHECK(zero_blocks > 0);

    // Equal plaintext blocks at block indices congruent modulo the key period
    // encrypt to equal cipher blocks.
    const auto period = matrix_period(key.k1, key.iv);
    REQUIRE(period);
    REQUIRE(period->preperiod == 0);
    const std::size_t p = period->period;
    std::size_t equal_pairs = 0;
    for (std::size_t l = 0; l + p < pb.size(); ++l) {
        if (pb[l] == pb[l + p]) {
            REQUIRE(cb[l] == cb[l + p]);
            ++equal_pairs;
        }
    }
    CHECK(equal_pairs > 1000);
}

TEST_CASE("write_diff_report writes every plane") {
    const auto dir = std::filesystem::temp_directory_path() / "hillcrack_analysis_test";
    std::filesystem::create_directories(dir);
    const auto r = k1_bitflip_experiment(make_random_image(16, 16, 1), reference_key(), {1, 2, 5});
    const auto summary = write_diff_report(r, dir / "k1");
    CHECK(summary.find("plane5") != std::string::npos);
    for (unsigned b = 0; b < 8; ++b) {
        const auto mask = read_pgm(dir / ("k1.plane" + std::to_string(b) + ".pgm"));
        REQUIRE(mask.size() == 256);
        std::size_t set = 0;
        for (auto v : mask.pixels()) {
            REQUIRE((v == 0 || v == 255));
            set += v == 255;
        }
        REQUIRE(set == r.report.per_plane_count[b]);
    }
    CHECK(read_pgm(dir / "k1.absdiff.pgm").pixels().size() == 256);
    CHECK(read_file(dir / "k1.txt") == summary);
    std::filesystem::remove_all(dir);
}
