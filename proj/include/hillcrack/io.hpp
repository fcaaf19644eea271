#ifndef HILLCRACK_IO_HPP
#define HILLCRACK_IO_HPP

// File formats: binary PGM (P5, maxval 255), the text key file, and the
// text equivalent-key file.

#include "hillcrack/cipher.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace hillcrack {

struct EquivalentKey;

/// Parses a P5 image. Header comments are skipped. A comment of the form
/// "# hillcrack-tail <b1> <b2> ..." restores a cipher-image tail.
GrayImage parse_pgm(const std::string& bytes);

/// Canonical "P5\n<w> <h>\n255\n" header followed by the raw payload. Images
/// with a tail get one extra "# hillcrack-tail ..." comment line after the magic.
std::string serialize_pgm(const GrayImage& image);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

/// Key file: m, then the m IV bytes, then the m rows of K1.
SecretKey parse_key(const std::string& text);
std::string serialize_key(const SecretKey& key);
SecretKey read_key(const std::filesystem::path& path);
void write_key(const SecretKey& key, const std::filesystem::path& path);

/// Equivalent-key file: m, then the period (0 for dense form), then the
/// matrices as blocks of m lines separated by blank lines. Unresolved dense
/// blocks are written as zero matrices and listed in a trailing
/// "# unresolved <l1> <l2> ..." comment (1-based block indices). A key whose
/// last matrix is only partly determined carries "# partial <rows>".
EquivalentKey parse_equivalent_key(const std::string& text);
std::string serialize_equivalent_key(const EquivalentKey& key);
EquivalentKey read_equivalent_key(const std::filesystem::path& path);
void write_equivalent_key(const EquivalentKey& key, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

} // namespace hillcrack

#endif
