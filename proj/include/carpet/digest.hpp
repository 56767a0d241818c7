#ifndef CARPET_DIGEST_HPP
#define CARPET_DIGEST_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace carpet {

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a64(std::string_view bytes);

/// fnv1a64 as 16 lowercase hex digits.
std::string hex_digest(std::string_view bytes);

/// Shortest round-trip formatting of a double (%.17g).
std::string format_double(double v);

/// Digest of a vector's entries formatted with format_double, comma separated.
std::string vector_digest(const Eigen::VectorXd& v);

}  // namespace carpet

#endif  // CARPET_DIGEST_HPP
