#ifndef HILLCRACK_ATTACK_HPP
#define HILLCRACK_ATTACK_HPP

// Known/chosen-plaintext key recovery.
//
// The cipher is linear per block with a key stream that ignores the data, so
// m plaintext blocks that are linearly independent mod 2 at the same block
// index pin down K_l: K_l = stack(P)^{-1} * stack(C). The recovered matrices
// form an equivalent key; K1 and IV themselves are never reconstructed.

#include "hillcrack/cipher.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hillcrack {

/// Per-block key matrices recovered by an attack.
///
/// Dense form (period == 0): matrices[l-1] is K_l for l = 1..matrices.size().
/// Periodic form (period == p): K_l = matrices[(l-1) mod p] for every l.
struct EquivalentKey {
    std::size_t m = 0;
    std::size_t period = 0;
    std::vector<std::optional<ByteMatrix>> matrices;
    /// 1-based block indices (dense) or class residues + 1 (periodic) that
    /// could not be resolved.
    std::vector<std::size_t> unresolved;
    /// Fraction of entries in `matrices` that are resolved.
    double coverage = 0.0;
    /// Set by single_image_attack when no candidate period verified.
    bool no_period_found = false;
    /// Nonzero when the last dense matrix comes from a partial final block:
    /// only its first `last_rows` rows are determined (only the leading
    /// corner when the cipher had no tail), the rest is an invertible completion.
    std::size_t last_rows = 0;

    bool periodic() const noexcept { return period != 0; }

    /// K_l for a 1-based block index, or nullptr when unknown.
    const ByteMatrix* matrix_for_block(std::size_t l) const;

    /// Recomputes `unresolved` and `coverage` from `matrices`.
    void refresh();
};

struct ImagePair {
    GrayImage plain;
    GrayImage cipher;
};

using PairSet = std::vector<ImagePair>;

/// Picks the first m rows (in order) that are linearly independent mod 2 and
/// returns their indices, or nullopt if the rows span less than rank m.
/// Greedy selection is complete here: independence mod 2 is a matroid.
std::optional<std::vector<std::size_t>> select_invertible_rows(std::span<const ByteVector> rows,
                                                               std::size_t m);

/// Solves rows(P) * K = rows(C) for K from any invertible m-subset of the
/// given plaintext rows. nullopt when no such subset exists.
std::optional<ByteMatrix> solve_block_key(std::span<const ByteVector> plain_rows,
                                          std::span<const ByteVector> cipher_rows);

/// Dense reconstruction from >= m pairs sharing one unknown key.
EquivalentKey reconstruct_from_pairs(const PairSet& pairs, std::size_t m);

/// The m chosen plain-images whose every block is the unit vector e_i, making
/// the stacked plaintext of every block the identity.
std::vector<GrayImage> chosen_plaintext_images(std::size_t m, std::size_t width, std::size_t height);

/// One chosen plain-image for the single-image attack: blocks cycle through
/// e_1..e_m in runs of `period_bound` blocks, so every residue class modulo
/// any power of two p <= period_bound sees all m unit vectors once the image
/// holds m * period_bound blocks.
GrayImage chosen_single_image(std::size_t m, std::size_t width, std::size_t height,
                              std::size_t period_bound);

struct CandidateOutcome {
    std::size_t period = 0;
    /// Residue classes (0-based) whose plaintext rows have rank < m mod 2.
    std::vector<std::size_t> unsolvable_classes;
    /// Blocks whose cipher bytes the candidate key failed to reproduce.
    std::size_t mismatched_blocks = 0;
    bool verified = false;
};

struct SingleImageResult {
    EquivalentKey key;
    std::vector<CandidateOutcome> candidates;
};

/// Candidate periods tried by default: 1, 2, 4, ..., 4096.
std::vector<std::size_t> default_candidate_periods();

/// Recovers a periodic equivalent key from one plain/cipher pair. Candidate
/// periods are tried in ascending order; the first whose residue classes all
/// resolve and whose key reproduces every cipher block is returned. Without
/// such a period the best-coverage dense reconstruction is returned with
/// no_period_found set. Throws Unrecoverable when no class is solvable for
/// any admissible candidate.
SingleImageResult single_image_attack(const GrayImage& plain, const GrayImage& cipher, std::size_t m,
                                      std::span<const std::size_t> candidate_periods);
SingleImageResult single_image_attack(const GrayImage& plain, const GrayImage& cipher, std::size_t m);

/// Encrypts with the recovered matrices. Throws Unrecoverable if a block's
/// matrix is unknown.
GrayImage encrypt_with(const EquivalentKey& key, const GrayImage& plain);

/// Decrypts with the recovered matrices. Throws Unrecoverable if a block's
/// matrix is unknown and NotInvertible if it is singular.
GrayImage decrypt_with(const EquivalentKey& key, const GrayImage& cipher);

/// Fraction of cipher pixels reproduced by re-encrypting each plaintext with
/// the recovered key; blocks without a matrix count as misses. An empty pair
/// set yields 1.
double verify_equivalent_key(const EquivalentKey& key, const PairSet& pairs);

} // namespace hillcrack

#endif
