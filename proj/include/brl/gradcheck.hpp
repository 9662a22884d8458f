#ifndef BRL_GRADCHECK_HPP_
#define BRL_GRADCHECK_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace brl::gradcheck {

struct Result {
  std::string name;
  double max_rel_err = 0.0;
  bool pass = false;
};

/// Pass criterion: |ad - fd| <= max(kRelTol * |fd|, kAbsFloor) per element,
/// i.e. max_rel_err (denominator floored at kAbsFloor/kRelTol) <= kRelTol.
inline constexpr double kRelTol = 1e-4;
inline constexpr double kAbsFloor = 1e-7;

/// Check names: the four conditioning layers plus both adversarial losses.
std::vector<std::string> all_checks();

/// Compares reverse-mode gradients against central finite differences
/// (h = 1e-5) over `draws` random parameter draws. Draws whose leaky-relu
/// inputs sit too close to the kink are rejected and redrawn, since a
/// central difference straddling the kink measures neither branch.
Result run_check(const std::string& name, std::size_t draws, std::uint64_t seed);

std::vector<Result> run(const std::vector<std::string>& which, std::size_t draws,
                        std::uint64_t seed);

}  // namespace brl::gradcheck

#endif  // BRL_GRADCHECK_HPP_
