#include "pimet/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pimet {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 uabs(i128 x) { return x < 0 ? u128(-x) : u128(x); }

u128 gcd128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  // binary gcd; denominators here are mostly powers of two
  int shift = 0;
  while (((a | b) & 1) == 0) { a >>= 1; b >>= 1; ++shift; }
  while ((a & 1) == 0) a >>= 1;
  do {
    while ((b & 1) == 0) b >>= 1;
    if (a > b) { u128 t = a; a = b; b = t; }
    b -= a;
  } while (b != 0);
  return a << shift;
}

bool fits(i128 x) {
  return x >= i128(std::numeric_limits<std::int64_t>::min() + 1) &&
         x <= i128(std::numeric_limits<std::int64_t>::max());
}

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  int shift = __builtin_ctzll(a | b);
  a >>= __builtin_ctzll(a);
  do {
    b >>= __builtin_ctzll(b);
    if (a > b) { std::uint64_t t = a; a = b; b = t; }
    b -= a;
  } while (b != 0);
  return a << shift;
}

}  // namespace

Q Q::make(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational: zero denominator");
  if (d < 0) { n = -n; d = -d; }
  if (n == 0) return Q();
  if (fits(n) && fits(d)) {
    std::int64_t a = std::int64_t(n), b = std::int64_t(d);
    if ((b & (b - 1)) == 0) {  // dyadic: the gcd is a power of two
      int sh = std::min(__builtin_ctzll(std::uint64_t(a)), __builtin_ctzll(std::uint64_t(b)));
      Q q;
      q.n_ = a >> sh;
      q.d_ = b >> sh;
      return q;
    }
    std::uint64_t g = gcd64(a < 0 ? std::uint64_t(-a) : std::uint64_t(a), std::uint64_t(b));
    Q q;
    q.n_ = a / std::int64_t(g);
    q.d_ = b / std::int64_t(g);
    return q;
  }
  u128 g = gcd128(uabs(n), u128(d));
  if (g > 1) { n /= i128(g); d /= i128(g); }
  if (!fits(n) || !fits(d)) throw std::overflow_error("rational: int64 overflow");
  Q q;
  q.n_ = std::int64_t(n);
  q.d_ = std::int64_t(d);
  return q;
}

Q::Q(std::int64_t n, std::int64_t d) { *this = make(n, d); }

Q Q::operator-() const {
  Q q = *this;
  q.n_ = -q.n_;
  return q;
}

Q& Q::operator+=(const Q& o) {
  if (d_ == o.d_) return *this = make(i128(n_) + o.n_, d_);
  return *this = make(i128(n_) * o.d_ + i128(o.n_) * d_, i128(d_) * o.d_);
}

Q& Q::operator-=(const Q& o) {
  if (d_ == o.d_) return *this = make(i128(n_) - o.n_, d_);
  return *this = make(i128(n_) * o.d_ - i128(o.n_) * d_, i128(d_) * o.d_);
}

Q& Q::operator*=(const Q& o) { return *this = make(i128(n_) * o.n_, i128(d_) * o.d_); }

Q& Q::operator/=(const Q& o) {
  if (o.n_ == 0) throw std::domain_error("rational: division by zero");
  return *this = make(i128(n_) * o.d_, i128(d_) * o.n_);
}

std::strong_ordering operator<=>(const Q& a, const Q& b) {
  if (a.d_ == b.d_) return a.n_ <=> b.n_;
  i128 l = i128(a.n_) * b.d_, r = i128(b.n_) * a.d_;
  return l < r ? std::strong_ordering::less
               : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Q::str() const {
  if (d_ == 1) return std::to_string(n_);
  return std::to_string(n_) + "/" + std::to_string(d_);
}

std::string Q::decimal() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", to_double());
  return buf;
}

Q Q::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rational: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Q a = parse(s.substr(0, slash)), b = parse(s.substr(slash + 1));
    return a / b;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') { neg = s[i] == '-'; ++i; }
  i128 num = 0, den = 1;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (dot) den *= 10;
      digits = true;
      if (num > i128(1) << 100 || den > i128(1) << 100)
        throw std::overflow_error("rational: too many digits in '" + s + "'");
    } else if (c == '.' && !dot) {
      dot = true;
    } else if ((c == 'e' || c == 'E') && digits) {
      int ex = std::stoi(s.substr(i + 1));
      for (int k = 0; k < std::abs(ex); ++k) (ex > 0 ? num : den) *= 10;
      break;
    } else {
      throw std::invalid_argument("rational: bad number '" + s + "'");
    }
  }
  if (!digits) throw std::invalid_argument("rational: bad number '" + s + "'");
  return make(neg ? -num : num, den);
}

Q Q::from_double(double x, int bits) {
  double scaled = std::nearbyint(std::ldexp(x, bits));
  return make(i128(scaled), i128(1) << bits);
}

Q pow2_inv(int k) {
  if (k < 0 || k > 62) throw std::overflow_error("pow2_inv out of range");
  return Q(1, std::int64_t(1) << k);
}

}  // namespace pimet
