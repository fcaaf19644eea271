#ifndef HILLCRACK_ERROR_HPP
#define HILLCRACK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hillcrack {

/// Base class for every domain error raised by the toolkit. `name()` is the
/// stable identifier the CLI prints on its diagnostic stream.
class Error : public std::runtime_error {
  public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

  private:
    std::string name_;
};

#define HILLCRACK_DEFINE_ERROR(Type)                                           \
    class Type : public Error {                                                \
      public:                                                                  \
        explicit Type(const std::string& what) : Error(#Type, what) {}         \
    }

HILLCRACK_DEFINE_ERROR(DimensionMismatch);
HILLCRACK_DEFINE_ERROR(OutOfRange);
HILLCRACK_DEFINE_ERROR(NotInvertible);
HILLCRACK_DEFINE_ERROR(InvalidKey);
HILLCRACK_DEFINE_ERROR(FlipOutOfRange);
HILLCRACK_DEFINE_ERROR(TooFewPairs);
HILLCRACK_DEFINE_ERROR(Unrecoverable);
HILLCRACK_DEFINE_ERROR(ParseError);
HILLCRACK_DEFINE_ERROR(BadMagic);
HILLCRACK_DEFINE_ERROR(BadMaxval);
HILLCRACK_DEFINE_ERROR(TruncatedPayload);
HILLCRACK_DEFINE_ERROR(IoError);

#undef HILLCRACK_DEFINE_ERROR

} // namespace hillcrack

#endif
