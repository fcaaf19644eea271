#include "hillcrack/io.hpp"

#include "hillcrack/attack.hpp"
#include "hillcrack/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hillcrack {

namespace {

constexpr std::string_view kTailTag = "hillcrack-tail";
constexpr std::string_view kUnresolvedTag = "unresolved";
constexpr std::string_view kPartialTag = "partial";

long parse_integer(std::string_view token, const char* what) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(std::string(what) + ": '" + std::string(token) + "' is not an integer");
    }
    return value;
}

std::uint8_t parse_byte(std::string_view token, const char* what) {
    const long v = parse_integer(token, what);
    if (v < 0 || v > 255) throw ParseError(std::string(what) + ": value " + std::to_string(v) + " not in [0, 255]");
    return static_cast<std::uint8_t>(v);
}

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream is{std::string(line)};
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

// Cursor over a PGM header: whitespace-separated tokens with '#' comments.
struct HeaderReader {
    const std::string& bytes;
    std::size_t pos = 0;
    std::vector<std::uint8_t> tail;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            const unsigned char c = static_cast<unsigned char>(bytes[pos]);
            if (std::isspace(c)) {
                ++pos;
            } else if (c == '#') {
                const std::size_t end = std::min(bytes.find('\n', pos), bytes.size());
                comment(std::string_view(bytes).substr(pos + 1, end - pos - 1));
                pos = end;
            } else {
                break;
            }
        }
    }

    void comment(std::string_view text) {
        const auto tokens = split_ws(text);
        if (tokens.empty() || tokens.front() != kTailTag) return;
        tail.clear();
        for (std::size_t i = 1; i < tokens.size(); ++i) tail.push_back(parse_byte(tokens[i], "PGM tail"));
    }

    long number(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) throw ParseError(std::string("PGM header: missing ") + what);
        return parse_integer(std::string_view(bytes).substr(start, pos - start), what);
    }
};

} // namespace

GrayImage parse_pgm(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw BadMagic("not a binary PGM (expected P5)");
    HeaderReader h{bytes, 2, {}};
    const long width = h.number("width");
    const long height = h.number("height");
    const long maxval = h.number("maxval");
    if (width <= 0 || height <= 0) throw ParseError("PGM header: dimensions must be positive");
    if (maxval != 255) throw BadMaxval("maxval " + std::to_string(maxval) + " (only 255 is supported)");
    if (h.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[h.pos]))) {
        throw TruncatedPayload("PGM header not followed by whitespace");
    }
    ++h.pos;
    const std::size_t n = std::size_t(width) * std::size_t(height);
    if (bytes.size() - h.pos < n) {
        throw TruncatedPayload("expected " + std::to_string(n) + " payload bytes, found " +
                               std::to_string(bytes.size() - h.pos));
    }
    std::vector<std::uint8_t> px(bytes.begin() + static_cast<std::ptrdiff_t>(h.pos),
                                 bytes.begin() + static_cast<std::ptrdiff_t>(h.pos + n));
    GrayImage img(std::size_t(width), std::size_t(height), std::move(px));
    img.set_tail(std::move(h.tail));
    return img;
}

std::string serialize_pgm(const GrayImage& image) {
    std::ostringstream os;
    os << "P5\n";
    if (!image.tail().empty()) {
        os << "# " << kTailTag;
        for (auto b : image.tail()) os << ' ' << int(b);
        os << '\n';
    }
    os << image.width() << ' ' << image.height() << "\n255\n";
    std::string out = os.str();
    out.append(image.pixels().begin(), image.pixels().end());
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
    write_file(path, serialize_pgm(image));
}

namespace {

std::vector<std::uint8_t> parse_row(const std::string& line, std::size_t m, const char* what) {
    const auto tokens = split_ws(line);
    if (tokens.size() != m) {
        throw ParseError(std::string(what) + ": expected " + std::to_string(m) + " values, got " +
                         std::to_string(tokens.size()));
    }
    std::vector<std::uint8_t> row;
    for (const auto& t : tokens) row.push_back(parse_byte(t, what));
    return row;
}

std::size_t parse_side(const std::string& line) {
    const auto tokens = split_ws(line);
    if (tokens.size() != 1) throw ParseError("expected block size m on its own line");
    const long m = parse_integer(tokens[0], "block size");
    if (m < 1 || m > long(kMaxSide)) throw ParseError("block size " + std::to_string(m) + " not in [1, 16]");
    return std::size_t(m);
}

void write_matrix(std::ostream& os, const ByteMatrix& a) { os << to_string(a); }

} // namespace

SecretKey parse_key(const std::string& text) {
    auto lines = lines_of(text);
    while (!lines.empty() && blank(lines.back())) lines.pop_back();
    if (lines.empty()) throw ParseError("key file is empty");
    const std::size_t m = parse_side(lines[0]);
    if (lines.size() != m + 2) {
        throw ParseError("key file needs " + std::to_string(m + 2) + " lines, has " + std::to_string(lines.size()));
    }
    ByteVector iv(parse_row(lines[1], m, "IV"));
    std::vector<std::uint8_t> entries;
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = parse_row(lines[2 + i], m, "K1 row");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return SecretKey(ByteMatrix(m, std::move(entries)), std::move(iv));
}

std::string serialize_key(const SecretKey& key) {
    std::ostringstream os;
    os << key.m() << '\n' << to_string(key.iv) << '\n';
    write_matrix(os, key.k1);
    return os.str();
}

SecretKey read_key(const std::filesystem::path& path) { return parse_key(read_file(path)); }

void write_key(const SecretKey& key, const std::filesystem::path& path) { write_file(path, serialize_key(key)); }

EquivalentKey parse_equivalent_key(const std::string& text) {
    const auto lines = lines_of(text);
    std::vector<std::string> body;
    std::vector<std::size_t> unresolved;
    std::size_t last_rows = 0;
    for (const auto& line : lines) {
        if (blank(line)) continue;
        if (line.front() == '#') {
            const auto tokens = split_ws(std::string_view(line).substr(1));
            if (!tokens.empty() && tokens.front() == kUnresolvedTag) {
                for (std::size_t i = 1; i < tokens.size(); ++i)
                    unresolved.push_back(std::size_t(parse_integer(tokens[i], "unresolved block")));
            }
            if (tokens.size() == 2 && tokens.front() == kPartialTag) {
                last_rows = std::size_t(parse_integer(tokens[1], "partial rows"));
            }
            continue;
        }
        body.push_back(line);
    }
    if (body.size() < 2) throw ParseError("equivalent-key file needs m and period lines");
    EquivalentKey key;
    key.m = parse_side(body[0]);
    const auto ptoks = split_ws(body[1]);
    if (ptoks.size() != 1) throw ParseError("expected period on its own line");
    const long period = parse_integer(ptoks[0], "period");
    if (period < 0) throw ParseError("period must be non-negative");
    key.period = std::size_t(period);

    const std::size_t rows = body.size() - 2;
    if (rows % key.m != 0) throw ParseError("matrix rows are not a multiple of m");
    const std::size_t count = rows / key.m;
    if (key.periodic() && count != key.period) {
        throw ParseError("periodic key lists " + std::to_string(count) + " matrices for period " +
                         std::to_string(key.period));
    }
    for (std::size_t t = 0; t < count; ++t) {
        std::vector<std::uint8_t> entries;
        for (std::size_t i = 0; i < key.m; ++i) {
            const auto row = parse_row(body[2 + t * key.m + i], key.m, "key matrix row");
            entries.insert(entries.end(), row.begin(), row.end());
        }
        key.matrices.emplace_back(ByteMatrix(key.m, std::move(entries)));
    }
    for (std::size_t l : unresolved) {
        if (l < 1 || l > count) throw ParseError("unresolved index " + std::to_string(l) + " out of range");
        key.matrices[l - 1].reset();
    }
    if (last_rows >= key.m || (last_rows && key.periodic())) throw ParseError("bad partial row count");
    key.last_rows = last_rows;
    key.refresh();
    return key;
}

std::string serialize_equivalent_key(const EquivalentKey& key) {
    std::ostringstream os;
    os << key.m << '\n' << key.period << '\n';
    for (std::size_t t = 0; t < key.matrices.size(); ++t) {
        os << '\n';
        write_matrix(os, key.matrices[t] ? *key.matrices[t] : ByteMatrix(key.m));
    }
    std::vector<std::size_t> missing;
    for (std::size_t t = 0; t < key.matrices.size(); ++t)
        if (!key.matrices[t]) missing.push_back(t + 1);
    if (!missing.empty()) {
        os << "\n# " << kUnresolvedTag;
        for (auto l : missing) os << ' ' << l;
        os << '\n';
    }
    if (key.last_rows) os << "\n# " << kPartialTag << ' ' << key.last_rows << '\n';
    return os.str();
}

EquivalentKey read_equivalent_key(const std::filesystem::path& path) {
    return parse_equivalent_key(read_file(path));
}

void write_equivalent_key(const EquivalentKey& key, const std::filesystem::path& path) {
    write_file(path, serialize_equivalent_key(key));
}

} // namespace hillcrack
