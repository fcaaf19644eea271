#include "cli.hpp"

#include "hillcrack/analysis.hpp"
#include "hillcrack/attack.hpp"
#include "hillcrack/error.hpp"
#include "hillcrack/io.hpp"
#include "hillcrack/keystats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>

namespace hillcrack {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 1;

ByteVector to_byte_vector(const std::vector<int>& values) {
    if (values.empty() || values.size() > kMaxSide) throw OutOfRange("vector must have 1..16 entries");
    std::vector<std::uint8_t> bytes;
    for (int v : values) {
        if (v < 0 || v > 255) throw OutOfRange("byte value " + std::to_string(v) + " not in [0, 255]");
        bytes.push_back(static_cast<std::uint8_t>(v));
    }
    return ByteVector(std::move(bytes));
}

// Random valid key: odd IV entries and K1 redrawn until det is odd.
SecretKey random_valid_key(std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> iv(m);
    for (auto& b : iv) b = static_cast<std::uint8_t>(rng() | 1u);
    for (;;) {
        std::vector<std::uint8_t> e(m * m);
        for (auto& b : e) b = static_cast<std::uint8_t>(rng());
        ByteMatrix k1(m, std::move(e));
        if (is_invertible(k1)) return SecretKey(std::move(k1), ByteVector(iv));
    }
}

struct ImageSource {
    std::string path;
    std::size_t width = 64;
    std::size_t height = 64;
    std::uint64_t seed = kDefaultSeed;

    void add_to(CLI::App* app) {
        app->add_option("--in", path, "Plain-image (PGM); a seeded random image when omitted");
        app->add_option("--width", width, "Width of the random image")->check(CLI::PositiveNumber);
        app->add_option("--height", height, "Height of the random image")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "Seed of the random image");
    }

    GrayImage load() const { return path.empty() ? make_random_image(width, height, seed) : read_pgm(path); }
};

std::vector<GrayImage> load_all(const std::vector<std::string>& paths) {
    std::vector<GrayImage> images;
    for (const auto& p : paths) images.push_back(read_pgm(p));
    return images;
}

void report_key(std::ostream& out, const EquivalentKey& key) {
    out << "m " << key.m << "\n";
    out << "period " << key.period << (key.periodic() ? "" : " (dense)") << "\n";
    out << "matrices " << key.matrices.size() << "\n";
    out << "coverage " << std::fixed << std::setprecision(6) << key.coverage << "\n";
    out << "unresolved " << key.unresolved.size() << "\n";
    if (key.no_period_found) out << "no_period_found\n";
}

void census_summary(std::ostream& out, const PeriodCensus& c) {
    out << "iv " << to_string(c.iv) << " trials " << c.trials << " seed " << c.seed
        << (c.invertible_only ? " invertible-only" : " unrestricted") << "\n";
    for (auto [period, count] : c.histogram) {
        out << "  N_" << period << " = " << count << " (" << std::fixed << std::setprecision(4)
            << double(count) / double(c.trials) << ")\n";
    }
    if (c.overflows) out << "  overflow " << c.overflows << "\n";
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hill-cipher image encryption scheme and its cryptanalysis"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::function<void()> action;

    // encrypt / decrypt
    std::string key_path, in_path, out_path;
    for (const char* name : {"encrypt", "decrypt"}) {
        auto* sub = app.add_subcommand(name, std::string(name) + " a PGM image with a key file");
        sub->add_option("--key", key_path, "Key file")->required()->check(CLI::ExistingFile);
        sub->add_option("--in", in_path, "Input PGM")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "Output PGM")->required();
        const bool enc = std::string(name) == "encrypt";
        sub->callback([&, enc] {
            action = [&, enc] {
                const SecretKey key = read_key(key_path);
                const GrayImage in = read_pgm(in_path);
                write_pgm(enc ? encrypt(in, key) : decrypt(in, key), out_path);
                out << (enc ? "encrypted " : "decrypted ") << in.width() << "x" << in.height() << " -> "
                    << out_path << "\n";
            };
        });
    }

    // check-key
    auto* check = app.add_subcommand("check-key", "Report whether a key can be decrypted with");
    check->add_option("--key", key_path, "Key file")->required()->check(CLI::ExistingFile);
    check->callback([&] {
        action = [&] {
            const SecretKey key = read_key(key_path);
            const KeyCheck c = validate_key(key);
            out << c.describe() << "\n";
            out << "det(K1) mod 256 = " << int(c.det_k1) << "\n";
            if (!c.valid()) throw InvalidKey(c.describe());
        };
    });

    // keygen
    std::size_t m = 3;
    std::uint64_t seed = kDefaultSeed;
    std::vector<int> iv_values;
    auto* keygen = app.add_subcommand("keygen", "Write a random valid key");
    keygen->add_option("--m", m, "Block size")->check(CLI::Range(1, 16));
    keygen->add_option("--seed", seed, "Seed");
    keygen->add_option("--iv", iv_values, "Fixed IV, comma separated")->delimiter(',');
    keygen->add_option("--out", out_path, "Key file")->required();
    keygen->callback([&] {
        action = [&] {
            SecretKey key = random_valid_key(iv_values.empty() ? m : iv_values.size(), seed);
            if (!iv_values.empty()) key.iv = to_byte_vector(iv_values);
            write_key(key, out_path);
            out << validate_key(key).describe() << "\n";
        };
    });

    // make-random / make-pattern
    std::size_t width = 64, height = 64;
    auto* mk_random = app.add_subcommand("make-random", "Write a seeded uniform random image");
    auto* mk_pattern = app.add_subcommand("make-pattern", "Write the structured test pattern");
    for (auto* sub : {mk_random, mk_pattern}) {
        sub->add_option("--width", width, "Width")->check(CLI::PositiveNumber);
        sub->add_option("--height", height, "Height")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_path, "Output PGM")->required();
    }
    mk_random->add_option("--seed", seed, "Seed");
    mk_random->callback([&] { action = [&] { write_pgm(make_random_image(width, height, seed), out_path); }; });
    mk_pattern->callback([&] { action = [&] { write_pgm(make_test_pattern(width, height), out_path); }; });

    // attack-known
    std::vector<std::string> plain_paths, cipher_paths;
    std::string decrypt_in, decrypt_out;
    auto* known = app.add_subcommand("attack-known", "Recover the equivalent key from >= m image pairs");
    known->add_option("--m", m, "Block size")->required()->check(CLI::Range(1, 16));
    known->add_option("--plain", plain_paths, "Plain-images")->required()->check(CLI::ExistingFile);
    known->add_option("--cipher", cipher_paths, "Cipher-images, same order")->required()->check(CLI::ExistingFile);
    known->add_option("--out", out_path, "Equivalent-key file")->required();
    known->add_option("--decrypt", decrypt_in, "Cipher-image to decrypt with the recovered key");
    known->add_option("--decrypt-out", decrypt_out, "Where to write that decryption");
    known->callback([&] {
        action = [&] {
            if (plain_paths.size() != cipher_paths.size()) throw DimensionMismatch("--plain and --cipher counts differ");
            PairSet pairs;
            const auto plains = load_all(plain_paths);
            const auto ciphers = load_all(cipher_paths);
            for (std::size_t i = 0; i < plains.size(); ++i) pairs.push_back({plains[i], ciphers[i]});
            const EquivalentKey key = reconstruct_from_pairs(pairs, m);
            write_equivalent_key(key, out_path);
            report_key(out, key);
            out << "verify " << verify_equivalent_key(key, pairs) << "\n";
            if (!decrypt_in.empty()) {
                if (decrypt_out.empty()) throw ParseError("--decrypt needs --decrypt-out");
                write_pgm(decrypt_with(key, read_pgm(decrypt_in)), decrypt_out);
            }
        };
    });

    // attack-chosen
    std::string dir;
    auto* chosen = app.add_subcommand(
        "attack-chosen",
        "Write the m chosen plain-images to --dir; with --key also encrypt them, then recover the key "
        "from <dir>/chosen<i>.enc.pgm");
    chosen->add_option("--m", m, "Block size")->required()->check(CLI::Range(1, 16));
    chosen->add_option("--width", width, "Width")->check(CLI::PositiveNumber);
    chosen->add_option("--height", height, "Height")->check(CLI::PositiveNumber);
    chosen->add_option("--dir", dir, "Working directory")->required();
    chosen->add_option("--key", key_path, "Key used as the encryption oracle")->check(CLI::ExistingFile);
    chosen->add_option("--out", out_path, "Equivalent-key file (default <dir>/equivalent.key)");
    chosen->callback([&] {
        action = [&] {
            fs::create_directories(dir);
            const auto images = chosen_plaintext_images(m, width, height);
            auto plain_at = [&](std::size_t i) { return fs::path(dir) / ("chosen" + std::to_string(i + 1) + ".pgm"); };
            auto cipher_at = [&](std::size_t i) {
                return fs::path(dir) / ("chosen" + std::to_string(i + 1) + ".enc.pgm");
            };
            for (std::size_t i = 0; i < m; ++i) write_pgm(images[i], plain_at(i));
            if (!key_path.empty()) {
                const SecretKey key = read_key(key_path);
                if (key.m() != m) throw DimensionMismatch("key block size differs from --m");
                for (std::size_t i = 0; i < m; ++i) write_pgm(encrypt(images[i], key), cipher_at(i));
            }
            PairSet pairs;
            for (std::size_t i = 0; i < m; ++i) {
                if (!fs::exists(cipher_at(i))) {
                    out << "wrote " << m << " chosen plain-images to " << dir
                        << "; encrypt them to chosen<i>.enc.pgm and rerun\n";
                    return;
                }
                pairs.push_back({images[i], read_pgm(cipher_at(i))});
            }
            const EquivalentKey key = reconstruct_from_pairs(pairs, m);
            write_equivalent_key(key, out_path.empty() ? fs::path(dir) / "equivalent.key" : fs::path(out_path));
            report_key(out, key);
        };
    });

    // attack-single
    std::string plain_path, cipher_path;
    auto* single = app.add_subcommand("attack-single", "Recover a periodic equivalent key from one image pair");
    single->add_option("--m", m, "Block size")->required()->check(CLI::Range(1, 16));
    single->add_option("--plain", plain_path, "Plain-image")->required()->check(CLI::ExistingFile);
    single->add_option("--cipher", cipher_path, "Cipher-image")->required()->check(CLI::ExistingFile);
    single->add_option("--out", out_path, "Equivalent-key file")->required();
    single->add_option("--decrypt", decrypt_in, "Cipher-image to decrypt with the recovered key");
    single->add_option("--decrypt-out", decrypt_out, "Where to write that decryption");
    std::size_t max_period = 0;
    single->add_option("--max-period", max_period,
                       "Try every period 1..N instead of the powers of two up to 4096")
        ->check(CLI::PositiveNumber);
    single->callback([&] {
        action = [&] {
            const GrayImage plain = read_pgm(plain_path);
            const GrayImage cipher = read_pgm(cipher_path);
            std::vector<std::size_t> periods = default_candidate_periods();
            if (max_period) {
                periods.resize(max_period);
                for (std::size_t i = 0; i < max_period; ++i) periods[i] = i + 1;
            }
            const SingleImageResult r = single_image_attack(plain, cipher, m, periods);
            write_equivalent_key(r.key, out_path);
            for (const auto& c : r.candidates) {
                out << "candidate " << c.period << ": unsolvable_classes " << c.unsolvable_classes.size()
                    << " mismatched_blocks " << c.mismatched_blocks << (c.verified ? " verified" : "") << "\n";
            }
            report_key(out, r.key);
            out << "verify " << verify_equivalent_key(r.key, {{plain, cipher}}) << "\n";
            if (!decrypt_in.empty()) {
                if (decrypt_out.empty()) throw ParseError("--decrypt needs --decrypt-out");
                write_pgm(decrypt_with(r.key, read_pgm(decrypt_in)), decrypt_out);
            }
        };
    });

    // flip-k1 / flip-iv / flip-plain
    ImageSource source;
    std::string stem;
    std::size_t row = 1, col = 1, index = 1;
    unsigned bit = 0;
    auto* flip_k1 = app.add_subcommand("flip-k1", "Flip one bit of K1 and write difference bit-planes");
    auto* flip_iv = app.add_subcommand("flip-iv", "Flip one bit of IV and write difference bit-planes");
    auto* flip_plain = app.add_subcommand("flip-plain", "Flip one plain-image bit and write difference bit-planes");
    for (auto* sub : {flip_k1, flip_iv, flip_plain}) {
        sub->add_option("--key", key_path, "Key file")->required()->check(CLI::ExistingFile);
        source.add_to(sub);
        sub->add_option("--bit", bit, "Bit position n (0 = least significant)")->required()->check(CLI::Range(0, 7));
        sub->add_option("--stem", stem, "Output path stem")->required();
    }
    flip_k1->add_option("--row", row, "1-based row of K1")->required();
    flip_k1->add_option("--col", col, "1-based column of K1")->required();
    flip_iv->add_option("--index", index, "1-based IV index")->required();
    flip_plain->add_option("--index", index, "1-based raster index of the pixel")->required();
    flip_k1->callback([&] {
        action = [&] {
            const auto r = k1_bitflip_experiment(source.load(), read_key(key_path), {row, col, bit});
            out << write_diff_report(r, stem);
            out << "column_confined " << (r.column_confined ? "yes" : "no") << "\n";
            out << "divisible_by_2^" << bit << " " << (r.divisible ? "yes" : "no") << "\n";
        };
    });
    flip_iv->callback([&] {
        action = [&] {
            const auto r = iv_bitflip_experiment(source.load(), read_key(key_path), {index, bit});
            out << write_diff_report(r, stem);
            out << "D2 first row " << to_string(ByteVector(std::vector<std::uint8_t>(r.d2.row(0).begin(), r.d2.row(0).end())))
                << "\n";
            out << "predicted    " << to_string(r.predicted_first_row) << "\n";
            out << "first_row_law " << (r.first_row_law_holds ? "holds" : "fails") << "\n";
        };
    });
    flip_plain->callback([&] {
        action = [&] {
            const auto r = plaintext_flip_experiment(source.load(), read_key(key_path), {index, bit});
            out << write_diff_report(r, stem);
            out << "block_local " << (r.block_local ? "yes" : "no") << "\n";
        };
    });

    // period-scan
    std::size_t max_steps = kDefaultMaxSteps;
    std::size_t column = 0;
    auto* scan = app.add_subcommand("period-scan", "Preperiod and period of the key-matrix sequence");
    scan->add_option("--key", key_path, "Key file")->required()->check(CLI::ExistingFile);
    scan->add_option("--column", column, "1-based column (default: all)");
    scan->add_option("--max-steps", max_steps, "Give up after this many steps")->check(CLI::PositiveNumber);
    scan->callback([&] {
        action = [&] {
            const SecretKey key = read_key(key_path);
            auto show = [&](const std::string& label, const std::optional<Period>& p) {
                out << label << ": ";
                if (p) out << "preperiod " << p->preperiod << " period " << p->period << "\n";
                else out << "overflow after " << max_steps << " steps\n";
            };
            if (column > key.m()) throw OutOfRange("--column beyond m");
            for (std::size_t j = 1; j <= key.m(); ++j) {
                if (column && j != column) continue;
                show("column " + std::to_string(j), column_period(key.k1, key.iv, j - 1, max_steps));
            }
            if (!column) show("matrix", matrix_period(key.k1, key.iv, max_steps));
        };
    });

    // census
    CensusOptions census_opts;
    census_opts.seed = kDefaultSeed;
    bool table1 = false;
    std::string out_dir;
    auto* census = app.add_subcommand("census", "Histogram of column-1 periods over random K1");
    census->add_option("--iv", iv_values, "IV, comma separated")->delimiter(',');
    census->add_flag("--table1", table1, "Run every reference IV");
    census->add_option("--trials", census_opts.trials, "Trials per IV")->check(CLI::PositiveNumber);
    census->add_option("--seed", census_opts.seed, "Seed");
    census->add_flag("--invertible-only", census_opts.invertible_only, "Draw only invertible K1");
    census->add_option("--max-steps", census_opts.max_steps, "Give up after this many steps")->check(CLI::PositiveNumber);
    census->add_option("--threads", census_opts.threads, "Worker threads (0 = all cores)");
    census->add_option("--out", out_path, "CSV file (single IV; stdout when omitted)");
    census->add_option("--out-dir", out_dir, "Directory for per-IV CSV files (--table1)");
    census->callback([&] {
        action = [&] {
            if (table1 == !iv_values.empty()) throw ParseError("give exactly one of --iv or --table1");
            if (!table1) {
                const PeriodCensus c = period_census(to_byte_vector(iv_values), census_opts);
                if (out_path.empty()) {
                    out << census_csv(c);
                } else {
                    write_file(out_path, census_csv(c));
                    census_summary(out, c);
                }
                return;
            }
            if (!out_dir.empty()) fs::create_directories(out_dir);
            for (const ReferenceRow& row : reference_rows()) {
                const PeriodCensus c = period_census(to_byte_vector({row.iv.begin(), row.iv.end()}), census_opts);
                census_summary(out, c);
                out << "  reference:";
                for (std::size_t i = 0; i < kReferencePeriods.size(); ++i)
                    out << " N_" << kReferencePeriods[i] << "=" << row.counts[i];
                out << " (of " << kReferenceTrials << ")\n";
                if (!out_dir.empty()) {
                    const std::string name = "census_" + std::to_string(row.iv[0]) + "_" + std::to_string(row.iv[1]) +
                                             "_" + std::to_string(row.iv[2]) + ".csv";
                    write_file(fs::path(out_dir) / name, census_csv(c));
                }
            }
        };
    });

    // gl-stats
    std::size_t max_m = 0;
    auto* gl = app.add_subcommand("gl-stats", "Count invertible matrices and the invertible fraction");
    gl->add_option("--m", m, "Block size")->check(CLI::Range(1, 16));
    gl->add_option("--max-m", max_m, "Print every m from 1 to this")->check(CLI::Range(1, 16));
    gl->callback([&] {
        action = [&] {
            const std::size_t lo = max_m ? 1 : m;
            const std::size_t hi = max_m ? max_m : m;
            for (std::size_t k = lo; k <= hi; ++k) {
                const auto p = invertible_probability(k);
                out << "m " << k << "\n  |GL| = " << gl_count(k) << "\n  p_m = " << p.exact << " = "
                    << p.decimal(6) << "\n";
            }
            out << "limit (m = 64) = " << invertible_probability(64).decimal(6) << "\n";
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (action) action();
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.name() << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return 1;
}

} // namespace hillcrack
