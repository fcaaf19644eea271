#include "hillcrack/attack.hpp"

#include "hillcrack/error.hpp"

#include <algorithm>
#include <array>

namespace hillcrack {

const ByteMatrix* EquivalentKey::matrix_for_block(std::size_t l) const {
    if (l == 0 || matrices.empty()) return nullptr;
    const std::size_t idx = periodic() ? (l - 1) % period : l - 1;
    if (idx >= matrices.size() || !matrices[idx]) return nullptr;
    return &*matrices[idx];
}

void EquivalentKey::refresh() {
    unresolved.clear();
    for (std::size_t i = 0; i < matrices.size(); ++i)
        if (!matrices[i]) unresolved.push_back(i + 1);
    coverage = matrices.empty()
                   ? 0.0
                   : double(matrices.size() - unresolved.size()) / double(matrices.size());
}

std::optional<std::vector<std::size_t>> select_invertible_rows(std::span<const ByteVector> rows,
                                                               std::size_t m) {
    // GF(2) echelon basis indexed by leading bit.
    std::array<std::uint32_t, 32> basis{};
    std::vector<std::size_t> picked;
    for (std::size_t r = 0; r < rows.size() && picked.size() < m; ++r) {
        if (rows[r].size() != m) throw DimensionMismatch("select_invertible_rows: row length differs from m");
        std::uint32_t bits = 0;
        for (std::size_t j = 0; j < m; ++j) bits |= std::uint32_t(rows[r][j] & 1u) << j;
        for (int b = int(m) - 1; b >= 0 && bits; --b) {
            if (!((bits >> b) & 1u)) continue;
            if (!basis[b]) {
                basis[b] = bits;
                picked.push_back(r);
                break;
            }
            bits ^= basis[b];
        }
    }
    if (picked.size() < m) return std::nullopt;
    return picked;
}

std::optional<ByteMatrix> solve_block_key(std::span<const ByteVector> plain_rows,
                                          std::span<const ByteVector> cipher_rows) {
    if (plain_rows.size() != cipher_rows.size()) throw DimensionMismatch("solve_block_key: row counts differ");
    if (plain_rows.empty()) return std::nullopt;
    const std::size_t m = plain_rows.front().size();
    const auto picked = select_invertible_rows(plain_rows, m);
    if (!picked) return std::nullopt;

    ByteMatrix p(m), c(m);
    for (std::size_t i = 0; i < m; ++i) {
        const ByteVector& pr = plain_rows[(*picked)[i]];
        const ByteVector& cr = cipher_rows[(*picked)[i]];
        if (cr.size() != m) throw DimensionMismatch("solve_block_key: cipher row length differs from m");
        std::copy(pr.bytes().begin(), pr.bytes().end(), p.row(i).begin());
        std::copy(cr.bytes().begin(), cr.bytes().end(), c.row(i).begin());
    }
    return mat_mul(inverse_mod(p), c);
}

namespace {

void check_pairs(const PairSet& pairs) {
    for (const auto& pair : pairs) {
        if (!pair.plain.same_shape(pair.cipher) || !pair.plain.same_shape(pairs.front().plain)) {
            throw DimensionMismatch("pair set images must all share one size");
        }
    }
}

// Blocks of one plain/cipher pair. When the cipher has a partial last block
// and no tail, that block is kept out of `complete` and only its visible
// bytes can be checked.
struct BlockedPair {
    std::vector<ByteVector> plain;
    std::vector<ByteVector> cipher;
    std::size_t complete = 0;
    std::size_t visible_last = 0;
};

BlockedPair split_pair(const GrayImage& plain, const GrayImage& cipher, std::size_t m) {
    BlockedPair out{blockify(plain, m), blockify(cipher, m), 0, 0};
    out.complete = out.plain.size();
    const std::size_t r = cipher.size() % m;
    if (r != 0 && cipher.tail().size() != m - r) {
        --out.complete;
        out.visible_last = r;
    }
    return out;
}

bool block_matches(const ByteVector& plain, const ByteVector& cipher, const ByteMatrix& k,
                   std::size_t visible) {
    const ByteVector c = mat_vec_mul(plain, k);
    return std::equal(c.bytes().begin(), c.bytes().begin() + static_cast<std::ptrdiff_t>(visible),
                      cipher.bytes().begin());
}

// Partial final block: plain rows are zero past column r, so only rows 0..r-1
// of K_l enter the cipher. Solves those rows (all m columns with a tail, the
// r x r corner without) and completes them to an invertible matrix.
std::optional<ByteMatrix> solve_partial_key(const std::vector<BlockedPair>& blocked, std::size_t l, std::size_t r,
                                            bool have_tail) {
    const std::size_t m = blocked.front().plain[l].size();
    const std::size_t cols = have_tail ? m : r;
    std::vector<ByteVector> heads;
    for (const auto& b : blocked) {
        ByteVector h(r);
        for (std::size_t j = 0; j < r; ++j) h[j] = b.plain[l][j];
        heads.push_back(h);
    }
    const auto picked = select_invertible_rows(heads, r);
    if (!picked) return std::nullopt;

    ByteMatrix p(r), top(m);
    for (std::size_t i = 0; i < r; ++i) {
        const std::size_t src = (*picked)[i];
        for (std::size_t j = 0; j < r; ++j) p(i, j) = heads[src][j];
    }
    const ByteMatrix p_inv = inverse_mod(p);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            unsigned acc = 0;
            for (std::size_t k = 0; k < r; ++k) acc += unsigned(p_inv(i, k)) * blocked[(*picked)[k]].cipher[l][j];
            top(i, j) = static_cast<std::uint8_t>(acc);
        }

    // Complete with unit rows on the columns that carry no GF(2) pivot.
    std::vector<std::uint32_t> echelon;
    std::vector<bool> pivot(m, false);
    for (std::size_t i = 0; i < r; ++i) {
        std::uint32_t bits = 0;
        for (std::size_t j = 0; j < m; ++j) bits |= std::uint32_t(top(i, j) & 1u) << j;
        for (auto e : echelon)
            if (bits & (e & -e)) bits ^= e;
        if (!bits) return std::nullopt;
        for (auto& e : echelon)
            if (e & (bits & -bits)) e ^= bits;
        echelon.push_back(bits);
        pivot[std::size_t(__builtin_ctz(bits))] = true;
    }
    std::size_t row = r;
    for (std::size_t j = 0; j < m; ++j)
        if (!pivot[j]) top(row++, j) = 1;
    return top;
}

} // namespace

EquivalentKey reconstruct_from_pairs(const PairSet& pairs, std::size_t m) {
    if (m < 1 || m > kMaxSide) throw OutOfRange("reconstruct_from_pairs: m not in [1, 16]");
    if (pairs.size() < m) {
        throw TooFewPairs("need at least " + std::to_string(m) + " pairs, got " + std::to_string(pairs.size()));
    }
    check_pairs(pairs);

    std::vector<BlockedPair> blocked;
    blocked.reserve(pairs.size());
    for (const auto& pair : pairs) blocked.push_back(split_pair(pair.plain, pair.cipher, m));

    EquivalentKey key;
    key.m = m;
    const std::size_t blocks = blocked.front().complete;
    key.matrices.resize(blocked.front().plain.size());
    std::vector<ByteVector> prow, crow;
    for (std::size_t l = 0; l < blocks; ++l) {
        prow.clear();
        crow.clear();
        for (const auto& b : blocked) {
            prow.push_back(b.plain[l]);
            crow.push_back(b.cipher[l]);
        }
        key.matrices[l] = solve_block_key(prow, crow);
    }
    const std::size_t r = pairs.front().plain.size() % m;
    if (r != 0) {
        const bool have_tail = blocks == key.matrices.size();
        const std::size_t last = key.matrices.size() - 1;
        key.matrices[last] = solve_partial_key(blocked, last, r, have_tail);
        if (key.matrices[last]) key.last_rows = r;
    }
    key.refresh();
    return key;
}

std::vector<GrayImage> chosen_plaintext_images(std::size_t m, std::size_t width, std::size_t height) {
    if (m < 1 || m > kMaxSide) throw OutOfRange("chosen_plaintext_images: m not in [1, 16]");
    if (width * height < m) throw OutOfRange("chosen_plaintext_images: image smaller than one block");
    std::vector<GrayImage> images;
    for (std::size_t i = 0; i < m; ++i) {
        GrayImage img(width, height);
        for (std::size_t k = i; k < img.size(); k += m) img[k] = 1;
        images.push_back(std::move(img));
    }
    return images;
}

GrayImage chosen_single_image(std::size_t m, std::size_t width, std::size_t height,
                              std::size_t period_bound) {
    if (m < 1 || m > kMaxSide) throw OutOfRange("chosen_single_image: m not in [1, 16]");
    if (period_bound < 1) throw OutOfRange("chosen_single_image: period bound must be positive");
    GrayImage img(width, height);
    for (std::size_t l = 0; l * m < img.size(); ++l) {
        const std::size_t k = l * m + (l / period_bound) % m;
        if (k < img.size()) img[k] = 1;
    }
    return img;
}

std::vector<std::size_t> default_candidate_periods() {
    std::vector<std::size_t> periods;
    for (std::size_t p = 1; p <= 4096; p *= 2) periods.push_back(p);
    return periods;
}

namespace {

struct ClassSolve {
    std::vector<std::optional<ByteMatrix>> keys;
    std::vector<bool> class_verified;
    CandidateOutcome outcome;
};

ClassSolve solve_candidate(const BlockedPair& b, std::size_t p) {
    ClassSolve s;
    s.outcome.period = p;
    s.keys.resize(p);
    s.class_verified.assign(p, false);

    std::vector<ByteVector> prow, crow;
    for (std::size_t r = 0; r < p; ++r) {
        prow.clear();
        crow.clear();
        for (std::size_t l = r; l < b.complete; l += p) {
            prow.push_back(b.plain[l]);
            crow.push_back(b.cipher[l]);
        }
        s.keys[r] = solve_block_key(prow, crow);
        if (!s.keys[r]) s.outcome.unsolvable_classes.push_back(r);
    }

    std::vector<std::size_t> class_misses(p, 0);
    for (std::size_t l = 0; l < b.plain.size(); ++l) {
        const auto& k = s.keys[l % p];
        if (!k) continue;
        const std::size_t visible = l < b.complete ? b.plain[l].size() : b.visible_last;
        if (!block_matches(b.plain[l], b.cipher[l], *k, visible)) {
            ++class_misses[l % p];
            ++s.outcome.mismatched_blocks;
        }
    }
    for (std::size_t r = 0; r < p; ++r) s.class_verified[r] = s.keys[r] && class_misses[r] == 0;
    s.outcome.verified = s.outcome.unsolvable_classes.empty() && s.outcome.mismatched_blocks == 0;
    return s;
}

} // namespace

SingleImageResult single_image_attack(const GrayImage& plain, const GrayImage& cipher, std::size_t m,
                                      std::span<const std::size_t> candidate_periods) {
    if (m < 1 || m > kMaxSide) throw OutOfRange("single_image_attack: m not in [1, 16]");
    if (!plain.same_shape(cipher)) throw DimensionMismatch("single_image_attack: image sizes differ");

    const BlockedPair b = split_pair(plain, cipher, m);
    const std::size_t blocks = b.plain.size();

    SingleImageResult result;
    std::optional<ClassSolve> best;
    bool any_solved = false;
    for (std::size_t p : candidate_periods) {
        if (p == 0 || b.complete < m * p) continue;
        ClassSolve s = solve_candidate(b, p);
        result.candidates.push_back(s.outcome);
        if (s.outcome.verified) {
            result.key.m = m;
            result.key.period = p;
            result.key.matrices = std::move(s.keys);
            result.key.refresh();
            return result;
        }
        any_solved = any_solved || s.outcome.unsolvable_classes.size() < p;
        const auto covered = std::count(s.class_verified.begin(), s.class_verified.end(), true);
        if (covered == 0) continue;
        if (!best) {
            best = std::move(s);
            continue;
        }
        // Compare by covered block count rather than class count.
        auto blocks_covered = [&](const ClassSolve& c) {
            std::size_t n = 0;
            for (std::size_t l = 0; l < blocks; ++l) n += c.class_verified[l % c.keys.size()];
            return n;
        };
        if (blocks_covered(s) > blocks_covered(*best)) best = std::move(s);
    }

    if (!any_solved) throw Unrecoverable("no residue class could be solved for any candidate period");

    // Dense fallback; empty when classes solved but none verified.
    result.key.m = m;
    result.key.period = 0;
    result.key.no_period_found = true;
    result.key.matrices.resize(blocks);
    if (best) {
        const std::size_t p = best->keys.size();
        for (std::size_t l = 0; l < blocks; ++l)
            if (best->class_verified[l % p]) result.key.matrices[l] = best->keys[l % p];
    }
    result.key.refresh();
    return result;
}

SingleImageResult single_image_attack(const GrayImage& plain, const GrayImage& cipher, std::size_t m) {
    const auto periods = default_candidate_periods();
    return single_image_attack(plain, cipher, m, periods);
}

namespace {

template <typename Transform>
GrayImage apply_blockwise(const EquivalentKey& key, const GrayImage& in, Transform transform) {
    const std::size_t m = key.m;
    if (m < 1) throw DimensionMismatch("equivalent key has no block size");
    GrayImage out(in.width(), in.height());
    auto dst = out.pixels();
    const auto blocks = blockify(in, m);
    for (std::size_t l = 0; l < blocks.size(); ++l) {
        const ByteMatrix* k = key.matrix_for_block(l + 1);
        if (!k) throw Unrecoverable("no key matrix for block " + std::to_string(l + 1));
        const ByteVector v = transform(blocks[l], *k, l);
        const std::size_t start = l * m;
        const std::size_t n = std::min(m, dst.size() - start);
        std::copy_n(v.bytes().begin(), n, dst.begin() + static_cast<std::ptrdiff_t>(start));
        if (n < m) out.set_tail({v.bytes().begin() + static_cast<std::ptrdiff_t>(n), v.bytes().end()});
    }
    return out;
}

} // namespace

GrayImage encrypt_with(const EquivalentKey& key, const GrayImage& plain) {
    return apply_blockwise(key, plain, [](const ByteVector& p, const ByteMatrix& k, std::size_t) {
        return mat_vec_mul(p, k);
    });
}

GrayImage decrypt_with(const EquivalentKey& key, const GrayImage& cipher) {
    const std::size_t m = key.m;
    const std::size_t r = m ? cipher.size() % m : 0;
    const bool partial = r != 0 && cipher.tail().size() != m - r;
    const std::size_t last = m ? block_count(cipher.size(), m) - 1 : 0;
    GrayImage out = apply_blockwise(key, cipher, [&](const ByteVector& c, const ByteMatrix& k, std::size_t l) {
        if (partial && l == last) return solve_partial_block(c, k, r);
        return mat_vec_mul(c, inverse_mod(k));
    });
    out.set_tail({});
    return out;
}

double verify_equivalent_key(const EquivalentKey& key, const PairSet& pairs) {
    if (pairs.empty()) return 1.0;
    check_pairs(pairs);
    if (key.m < 1) throw DimensionMismatch("equivalent key has no block size");
    const std::size_t m = key.m;
    std::size_t total = 0, matched = 0;
    for (const auto& pair : pairs) {
        const auto plain = blockify(pair.plain, m);
        const auto px = pair.cipher.pixels();
        total += px.size();
        for (std::size_t l = 0; l < plain.size(); ++l) {
            const ByteMatrix* k = key.matrix_for_block(l + 1);
            if (!k) continue;
            const ByteVector c = mat_vec_mul(plain[l], *k);
            for (std::size_t j = 0; j < m && l * m + j < px.size(); ++j) matched += c[j] == px[l * m + j];
        }
    }
    return total ? double(matched) / double(total) : 1.0;
}

} // namespace hillcrack
