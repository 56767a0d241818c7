#include "carpet/render.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "carpet/error.hpp"

namespace carpet {
namespace {

constexpr double kPixelTol = 1e-9;

// Half-open pixel span of [a, b] on an axis of `size` pixels.
std::pair<int, int> pixel_span(double a, double b, int size) {
  int lo = static_cast<int>(std::floor(a * size + kPixelTol));
  int hi = static_cast<int>(std::ceil(b * size - kPixelTol));
  lo = std::clamp(lo, 0, size - 1);
  hi = std::clamp(hi, lo + 1, size);
  return {lo, hi};
}

Image blank(const RasterSpec& spec) {
  spec.validate();
  Image img;
  img.width = spec.width;
  img.height = spec.height;
  img.paint = spec.paint;
  img.rgb.resize(static_cast<std::size_t>(spec.width) * spec.height * 3);
  for (std::size_t i = 0; i < img.rgb.size(); i += 3) std::copy(spec.background.begin(), spec.background.end(), &img.rgb[i]);
  return img;
}

void paint_squares(Image& img, const CarpetSystem& carpet, const std::vector<ApproxSquare>& squares) {
  const auto& xm = carpet.x_ifs().maps();
  const auto& ym = carpet.y_ifs().maps();
  for (const ApproxSquare& sq : squares) {
    const Interval ix = word_image(xm, sq.x_word);
    const Interval iy = word_image(ym, sq.y_word);
    const auto [c0, c1] = pixel_span(ix.lo, ix.hi, img.width);
    const auto [r0, r1] = pixel_span(iy.lo, iy.hi, img.height);
    for (int r = r0; r < r1; ++r) {
      const int row = img.height - 1 - r;
      for (int c = c0; c < c1; ++c) {
        std::copy(img.paint.begin(), img.paint.end(), &img.rgb[(static_cast<std::size_t>(row) * img.width + c) * 3]);
      }
    }
  }
}

class NormCache {
 public:
  explicit NormCache(const CoordinateIFS& ifs) : ifs_(ifs) {}
  double operator()(const Word& w) {
    auto it = memo_.find(w);
    if (it == memo_.end()) it = memo_.emplace(w, ifs_.sup_deriv(w).hi).first;
    return it->second;
  }

 private:
  const CoordinateIFS& ifs_;
  std::map<Word, double> memo_;
};

}  // namespace

void RasterSpec::validate() const {
  if (width < 16 || width > 8192 || height < 16 || height > 8192) {
    throw InputError("raster size must lie in [16, 8192] on both axes");
  }
  if (n < 0) throw InputError("scale exponent must be nonnegative");
}

bool Image::painted(int col, int row) const {
  const std::size_t i = (static_cast<std::size_t>(row) * width + col) * 3;
  return rgb[i] == paint[0] && rgb[i + 1] == paint[1] && rgb[i + 2] == paint[2];
}

std::size_t Image::painted_count() const {
  std::size_t count = 0;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) count += painted(c, r) ? 1 : 0;
  }
  return count;
}

Image render_carpet(const CarpetSystem& carpet, const RasterSpec& spec, std::optional<std::size_t> cap) {
  Image img = blank(spec);
  paint_squares(img, carpet, enumerate_delta_n(carpet, spec.n, cap));
  return img;
}

std::vector<ApproxSquare> subsystem_squares(const CarpetSystem& carpet, const std::vector<Word>& words, int n,
                                            std::optional<std::size_t> cap) {
  if (words.empty()) throw InputError("empty subsystem: nothing to render");
  for (const Word& w : words) {
    if (w.empty()) throw InputError("subsystem words must be nonempty");
    for (int l : w) {
      if (l < 0 || static_cast<std::size_t>(l) >= carpet.size()) throw InputError("cell index out of range in word");
    }
  }
  if (n < 0) throw InputError("scale exponent must be nonnegative");
  const std::size_t limit = cap.value_or(dim_cap());
  const double thr = std::ldexp(1.0, -n);
  NormCache wx(carpet.x_ifs()), wy(carpet.y_ifs());

  using State = std::tuple<Word, Word, bool, bool>;
  std::set<State> seen;
  std::set<ApproxSquare> found;
  std::vector<State> stack{{Word{}, Word{}, false, false}};
  while (!stack.empty()) {
    State s = std::move(stack.back());
    stack.pop_back();
    for (const Word& w : words) {
      auto [xw, yw, xf, yf] = s;
      for (int l : w) {
        const CellIndex& cell = carpet.cells()[static_cast<std::size_t>(l)];
        if (!xf) {
          xw.push_back(cell.first);
          xf = wx(xw) < thr;
        }
        if (!yf) {
          yw.push_back(cell.second);
          yf = wy(yw) < thr;
        }
        if (xf && yf) break;
      }
      if (xf && yf) {
        found.insert({xw, yw, n});
        if (found.size() > limit) {
          throw ResourceError("more than " + std::to_string(limit) + " approximate squares at scale " +
                              std::to_string(n) + "; use a smaller scale or raise CARPET_DIM_CAP");
        }
      } else if (seen.emplace(xw, yw, xf, yf).second) {
        if (seen.size() > limit) throw ResourceError("subsystem state space exceeds the cap");
        stack.emplace_back(std::move(xw), std::move(yw), xf, yf);
      }
    }
  }
  return {found.begin(), found.end()};
}

Image render_subsystem(const CarpetSystem& carpet, const std::vector<Word>& words, const RasterSpec& spec,
                       std::optional<std::size_t> cap) {
  spec.validate();
  const std::vector<ApproxSquare> squares = subsystem_squares(carpet, words, spec.n, cap);
  Image img = blank(spec);
  paint_squares(img, carpet, squares);
  return img;
}

void write_ppm(const Image& img, std::ostream& out) {
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

std::string to_ppm(const Image& img) {
  std::ostringstream os;
  write_ppm(img, os);
  return os.str();
}

}  // namespace carpet
