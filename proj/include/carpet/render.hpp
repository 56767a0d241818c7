#ifndef CARPET_RENDER_HPP
#define CARPET_RENDER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "carpet/symbolic.hpp"

namespace carpet {

using Rgb = std::array<std::uint8_t, 3>;

struct RasterSpec {
  int width = 512;
  int height = 512;
  int n = 6;  // scale exponent of the approximate squares
  Rgb paint{0, 0, 0};
  Rgb background{255, 255, 255};

  /// Throws InputError unless width and height lie in [16, 8192].
  void validate() const;
};

/// 8-bit RGB raster, row 0 at the top.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  Rgb paint{0, 0, 0};

  bool painted(int col, int row) const;
  std::size_t painted_count() const;
  double coverage() const { return static_cast<double>(painted_count()) / (static_cast<double>(width) * height); }
};

/// Paints f_u([0,1]) x g_v([0,1]) for every approximate square (u, v) of
/// scale spec.n. Half-open pixel coverage, at least one pixel per axis,
/// y axis pointing up.
Image render_carpet(const CarpetSystem& carpet, const RasterSpec& spec, std::optional<std::size_t> cap = std::nullopt);

/// Approximate squares of scale n met by the attractor of the IFS whose
/// maps are the given cell words. Each word is a sequence of cell indices.
std::vector<ApproxSquare> subsystem_squares(const CarpetSystem& carpet, const std::vector<Word>& words, int n,
                                            std::optional<std::size_t> cap = std::nullopt);

/// render_carpet restricted to subsystem_squares. Throws InputError for an
/// empty word list or an empty word.
Image render_subsystem(const CarpetSystem& carpet, const std::vector<Word>& words, const RasterSpec& spec,
                       std::optional<std::size_t> cap = std::nullopt);

/// Binary PPM (P6, maxval 255).
void write_ppm(const Image& img, std::ostream& out);
std::string to_ppm(const Image& img);

}  // namespace carpet

#endif  // CARPET_RENDER_HPP
