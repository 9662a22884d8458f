#ifndef BRLGAN_TOOLS_COMMON_HPP_
#define BRLGAN_TOOLS_COMMON_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "brl/dataset.hpp"

namespace brlgan {

inline constexpr const char* kVersion = "brlgan 0.1.0";

// Repeatable exit codes: 0 ok, 1 check failed, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Named rng substreams so subcommands derive independent, stable sequences
// from one --seed.
enum Stream : std::uint64_t {
  kStreamVerify = 4,
  kStreamGradcheck = 5,
  kStreamData = 7,
  kStreamClassifier = 8,
  kStreamEvalPick = 9,
};

/// First `count` entries of the fixed color table (up to 8 colors).
std::vector<std::array<double, 3>> palette_colors(std::size_t count);

/// Builds a dataset spec from CLI-level values; shape list is
/// comma-separated names ("square,circle,triangle").
brl::data::ShapeWorldSpec make_spec(std::size_t image_size, std::size_t colors,
                                    const std::string& shapes, std::size_t per_class,
                                    double noise_std);

/// Writes text to path, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

void ensure_dir(const std::string& dir);

std::string format_double(double v, int precision = 9);

}  // namespace brlgan

#endif  // BRLGAN_TOOLS_COMMON_HPP_
