#pragma once

#include <compare>
#include <cstdlib>
#include <string>

namespace rpbeats {

// Spin or magnetic quantum number stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_twice(int t) { return HalfInt(t); }
  static constexpr HalfInt from_int(int v) { return HalfInt(2 * v); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  // 2I+1 for a total spin I.
  constexpr int multiplicity() const { return twice_ + 1; }

  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

 private:
  constexpr explicit HalfInt(int t) : twice_(t) {}
  int twice_ = 0;
};

constexpr HalfInt kHalf = HalfInt::from_twice(1);

inline constexpr HalfInt abs(HalfInt h) { return HalfInt::from_twice(h.twice() < 0 ? -h.twice() : h.twice()); }

}  // namespace rpbeats
