#include "cli.hpp"

#include "hillcrack/analysis.hpp"
#include "hillcrack/attack.hpp"
#include "hillcrack/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace hillcrack;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    const char* env = std::getenv("HILLCRACK_TEST_TMP");
    fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "hillcrack_cli";
    fs::create_directories(dir);
    return dir;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

const SecretKey kRefKey(ByteMatrix{{11, 2, 3, 7}, {8, 5, 19, 103}, {201, 203, 119, 150}, {7, 9, 21, 35}},
                         ByteVector{3, 9, 17, 33});

} // namespace

TEST_CASE("check-key") {
    const auto dir = tmp_dir();
    write_key(kRefKey, dir / "ref.key");
    auto r = run({"check-key", "--key", (dir / "ref.key").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("valid") == 0);
    CHECK(r.out.find("249") != std::string::npos);

    write_file(dir / "even.key", "2\n2 3\n1 0\n0 1\n");
    r = run({"check-key", "--key", (dir / "even.key").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("InvalidKey") != std::string::npos);
}

TEST_CASE("encrypt and decrypt match the library") {
    const auto dir = tmp_dir();
    write_key(kRefKey, dir / "k.key");
    const auto plain = make_random_image(31, 7, 3);
    write_pgm(plain, dir / "p.pgm");
    REQUIRE(run({"encrypt", "--key", (dir / "k.key").string(), "--in", (dir / "p.pgm").string(), "--out",
                 (dir / "c.pgm").string()})
                .code == 0);
    CHECK(read_file(dir / "c.pgm") == serialize_pgm(encrypt(plain, kRefKey)));
    REQUIRE(run({"decrypt", "--key", (dir / "k.key").string(), "--in", (dir / "c.pgm").string(), "--out",
                 (dir / "d.pgm").string()})
                .code == 0);
    CHECK(read_file(dir / "d.pgm") == read_file(dir / "p.pgm"));
}

TEST_CASE("usage and domain errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"encrypt"}).code == 2);
    CHECK(run({"keygen", "--m", "17", "--out", "x"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    const auto dir = tmp_dir();
    write_file(dir / "bad.pgm", "P2\n1 1\n255\n0");
    write_key(kRefKey, dir / "k.key");
    const auto r = run({"encrypt", "--key", (dir / "k.key").string(), "--in", (dir / "bad.pgm").string(), "--out",
                        (dir / "x.pgm").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("BadMagic") != std::string::npos);
}

TEST_CASE("keygen and chosen-plaintext attack") {
    const auto dir = tmp_dir();
    REQUIRE(run({"keygen", "--m", "3", "--seed", "5", "--out", (dir / "g.key").string()}).code == 0);
    const auto key = read_key(dir / "g.key");
    CHECK(validate_key(key).valid());
    const auto r = run({"attack-chosen", "--m", "3", "--width", "15", "--height", "16", "--dir",
                        (dir / "chosen").string(), "--key", (dir / "g.key").string()});
    REQUIRE(r.code == 0);
    const auto eq = read_equivalent_key(dir / "chosen" / "equivalent.key");
    CHECK(eq.coverage == 1.0);
    const auto truth = key_matrices(key, eq.matrices.size());
    for (std::size_t l = 0; l < truth.size(); ++l) CHECK(*eq.matrices[l] == truth[l]);
}

TEST_CASE("census and gl-stats") {
    auto r = run({"census", "--iv", "1,3,5", "--trials", "50", "--seed", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("period,count\n", 0) == 0);
    CHECK(run({"census", "--trials", "5"}).code == 1);

    r = run({"gl-stats", "--m", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("315/1024") != std::string::npos);
    CHECK(r.out.find("0.307617") != std::string::npos);
}

TEST_CASE("attack-single") {
    const auto dir = tmp_dir();
    const SecretKey key(ByteMatrix{{1}}, ByteVector{3});
    const auto plain = make_random_image(64, 8, 4);
    write_pgm(plain, dir / "s.pgm");
    write_pgm(encrypt(plain, key), dir / "s.enc.pgm");
    for (const char* extra : {"", "70"}) {
        std::vector<std::string> args{"attack-single", "--m", "1", "--plain", (dir / "s.pgm").string(), "--cipher",
                                      (dir / "s.enc.pgm").string(), "--out", (dir / "s.key").string()};
        if (*extra) args.insert(args.end(), {"--max-period", extra});
        const auto r = run(args);
        REQUIRE(r.code == 0);
        CHECK(r.out.find("verify 1") != std::string::npos);
        CHECK(read_equivalent_key(dir / "s.key").period == 64);
    }
}
