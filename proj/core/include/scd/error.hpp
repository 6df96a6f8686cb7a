#ifndef SCD_ERROR_HPP
#define SCD_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scd {

/// Malformed or truncated on-disk data. Carries the byte offset at which
/// parsing stopped making sense.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what + " (byte " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace scd

#endif // SCD_ERROR_HPP
