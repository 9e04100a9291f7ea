#pragma once
// Exact rationals over int64 with overflow checks.
// Intermediates go through __int128; anything that does not fit after
// normalization throws std::overflow_error instead of wrapping.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <compare>
#include <functional>

namespace pimet {

class Q {
public:
  constexpr Q() = default;
  constexpr Q(std::int64_t n) : n_(n), d_(1) {}  // NOLINT implicit on purpose
  Q(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return n_; }
  std::int64_t den() const { return d_; }

  Q operator-() const;
  Q& operator+=(const Q& o);
  Q& operator-=(const Q& o);
  Q& operator*=(const Q& o);
  Q& operator/=(const Q& o);

  friend Q operator+(Q a, const Q& b) { return a += b; }
  friend Q operator-(Q a, const Q& b) { return a -= b; }
  friend Q operator*(Q a, const Q& b) { return a *= b; }
  friend Q operator/(Q a, const Q& b) { return a /= b; }

  friend bool operator==(const Q& a, const Q& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
  friend std::strong_ordering operator<=>(const Q& a, const Q& b);

  bool is_zero() const { return n_ == 0; }
  double to_double() const { return double(n_) / double(d_); }

  // "p/q", or "p" when q == 1
  std::string str() const;
  // plain decimal, 12 significant digits; for humans only
  std::string decimal() const;

  // "0.25", "-3", "7/8", "1e-3"
  static Q parse(const std::string& s);
  // nearest dyadic with denominator 2^bits (used for lengths coming from floats)
  static Q from_double(double x, int bits = 24);

private:
  static Q make(__int128 n, __int128 d);
  std::int64_t n_ = 0;
  std::int64_t d_ = 1;
};

inline Q qmin(const Q& a, const Q& b) { return b < a ? b : a; }
inline Q qmax(const Q& a, const Q& b) { return a < b ? b : a; }
Q pow2_inv(int k);  // 2^-k

}  // namespace pimet

template <>
struct std::hash<pimet::Q> {
  size_t operator()(const pimet::Q& q) const noexcept {
    return std::hash<std::int64_t>()(q.num()) * 1000003u ^ std::hash<std::int64_t>()(q.den());
  }
};
