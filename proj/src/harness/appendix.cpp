#include <array>
#include <utility>

#include "cpskit/harness.hpp"

namespace cpskit {
namespace {

// Two predictor values; the response of each observation in the two-point
// law equals its predictor label.
enum class Site { kMinus, kPlus };

struct Point {
  Site x;
  Rational y;
};

// The conformity measure for n = 1: only the scored observation matters.
// y at the plus site, 3y + 2 at the minus site.
Rational score(const Point& scored) {
  return scored.x == Site::kPlus ? scored.y : Rational(3) * scored.y + Rational(2);
}

// Conformal predictive distribution for training {z1} and test predictor x2
// at response y, averaged over tau ~ U: (smaller + equal / 2) / 2 with the
// self-tie counted in `equal`.
Rational mean_over_tau(const Point& z1, Site x2, const Rational& y) {
  const Rational alpha1 = score(z1);
  const Rational alpha2 = score(Point{x2, y});
  const int smaller = alpha1 < alpha2 ? 1 : 0;
  const int equal = 1 + (alpha1 == alpha2 ? 1 : 0);
  return (Rational(smaller) + Rational(equal, 2)) / Rational(2);
}

// y solving alpha_1 = alpha_2, where the band jumps.
Rational jump_position(const Point& z1, Site x2) {
  const Rational alpha1 = score(z1);
  return x2 == Site::kPlus ? alpha1 : (alpha1 - Rational(2)) / Rational(3);
}

const Point kMinusPoint{Site::kMinus, Rational(-1)};
const Point kPlusPoint{Site::kPlus, Rational(1)};

struct Sequence {
  Point train;
  Point test;
  Rational probability;
};

std::pair<Rational, Rational> both_sides(std::span<const Sequence> law,
                                         const Rational& y) {
  Rational lhs(0);
  Rational rhs(0);
  for (const auto& s : law) {
    lhs += s.probability * mean_over_tau(s.train, s.test.x, y);
    if (s.test.y <= y) rhs += s.probability;
  }
  return {lhs, rhs};
}

}  // namespace

ExchangeableCalibration marginal_calibration_exchangeable() {
  const std::array<Sequence, 2> law{{
      {kMinusPoint, kPlusPoint, Rational(1, 2)},
      {kPlusPoint, kMinusPoint, Rational(1, 2)},
  }};
  const auto [lhs, rhs] = both_sides(law, Rational(0));
  return ExchangeableCalibration{
      lhs, rhs,
      {jump_position(law[0].train, law[0].test.x),
       jump_position(law[1].train, law[1].test.x)}};
}

IidCalibration marginal_calibration_iid() {
  const std::array<Sequence, 4> law{{
      {kMinusPoint, kPlusPoint, Rational(1, 4)},
      {kPlusPoint, kMinusPoint, Rational(1, 4)},
      {kMinusPoint, kMinusPoint, Rational(1, 4)},
      {kPlusPoint, kPlusPoint, Rational(1, 4)},
  }};
  const auto [lhs, rhs] = both_sides(law, Rational(0));
  IidCalibration result{lhs, rhs, {}};
  for (std::size_t k = 0; k < law.size(); ++k) {
    result.per_sequence[k] = mean_over_tau(law[k].train, law[k].test.x, Rational(0));
  }
  return result;
}

}  // namespace cpskit
