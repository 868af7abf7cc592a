#include "fluorep/exact.hpp"

#include <array>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fluorep {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
  if (num == 0) den = 1;
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::domain_error("Rational: division by zero");
  return Rational(num * o.den, den * o.num);
}

double Rational::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

QSqrt2 QSqrt2::operator+(const QSqrt2& o) const { return QSqrt2(a + o.a, b + o.b); }

QSqrt2 QSqrt2::operator*(const QSqrt2& o) const {
  return QSqrt2(a * o.a + Rational(2) * (b * o.b), a * o.b + b * o.a);
}

QSqrt2 QSqrt2::times_rational(const Rational& r) const { return QSqrt2(a * r, b * r); }

namespace {

// Three nodes, two storage levels each. A basis key holds the level
// occupations (mb0, mr0, mb1, mr1, mb2, mr2) of the unnormalized multinomial
// basis states B(mb, mr): the plain sum over all atom configurations with
// the given occupations, so <B|B> = N! / (mb! mr! (N-mb-mr)!).
using Key = std::array<int, 6>;
using State = std::map<Key, QSqrt2>;

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

std::int64_t multinomial_count(int n_atoms, int mb, int mr) {
  const int rest = n_atoms - mb - mr;
  if (mb < 0 || mr < 0 || rest < 0) return 0;
  return factorial(n_atoms) / (factorial(mb) * factorial(mr) * factorial(rest));
}

// Collective promotion of one reservoir atom into the given level, in the
// multinomial basis: S+ B(m, .) = (m + 1) B(m + 1, .), zero once the node
// holds n_atoms excitations. Integer coefficients only.
State apply_creation(const State& state, int n_atoms, int node, int level) {
  State out;
  const int slot = 2 * node + level;
  const int other = 2 * node + (1 - level);
  for (const auto& [key, amp] : state) {
    if (key[slot] + key[other] >= n_atoms) continue;
    Key up = key;
    up[slot] += 1;
    const QSqrt2 term = amp.times_rational(Rational(up[slot]));
    auto it = out.find(up);
    if (it == out.end())
      out.emplace(up, term);
    else
      it->second = it->second + term;
  }
  return out;
}

State add(const State& x, const State& y) {
  State out = x;
  for (const auto& [key, amp] : y) {
    auto it = out.find(key);
    if (it == out.end())
      out.emplace(key, amp);
    else
      it->second = it->second + amp;
  }
  return out;
}

// Storage-level rotation on one node, derived from the operator map
// b+ -> (b+ + r+)/sqrt2, r+ -> (b+ - r+)/sqrt2 and
// B(mb, mr) = b+^mb r+^mr |0> / (mb! mr!).
State rotate_node(const State& state, int n_atoms, int node) {
  // Columns over the per-node basis, built once per occupied source.
  std::map<std::pair<int, int>, std::map<std::pair<int, int>, QSqrt2>> columns;
  auto column = [&](int mb, int mr) -> const std::map<std::pair<int, int>, QSqrt2>& {
    auto found = columns.find({mb, mr});
    if (found != columns.end()) return found->second;
    // Work in a scratch single-node state (node index 0 of a Key).
    State block;
    block[{0, 0, 0, 0, 0, 0}] = QSqrt2(Rational(1));
    for (int k = 0; k < mb; ++k)
      block = add(apply_creation(block, n_atoms, 0, 0), apply_creation(block, n_atoms, 0, 1));
    for (int k = 0; k < mr; ++k) {
      State minus;
      for (const auto& [key, amp] : apply_creation(block, n_atoms, 0, 1))
        minus[key] = amp.times_rational(Rational(-1));
      block = add(apply_creation(block, n_atoms, 0, 0), minus);
    }
    // Scale by (1/sqrt2)^(mb+mr) / (mb! mr!); 1/sqrt2 = 0 + (1/2) sqrt2.
    QSqrt2 scale(Rational(1, factorial(mb) * factorial(mr)));
    for (int k = 0; k < mb + mr; ++k) scale = scale * QSqrt2(Rational(0), Rational(1, 2));
    std::map<std::pair<int, int>, QSqrt2> col;
    for (const auto& [key, amp] : block) col[{key[0], key[1]}] = amp * scale;
    return columns.emplace(std::make_pair(mb, mr), std::move(col)).first->second;
  };

  State out;
  for (const auto& [key, amp] : state) {
    const int mb = key[2 * node];
    const int mr = key[2 * node + 1];
    for (const auto& [target, coeff] : column(mb, mr)) {
      Key up = key;
      up[2 * node] = target.first;
      up[2 * node + 1] = target.second;
      const QSqrt2 term = amp * coeff;
      auto it = out.find(up);
      if (it == out.end())
        out.emplace(up, term);
      else
        it->second = it->second + term;
    }
  }
  return out;
}

// |amp|^2 as an exact rational. Every amplitude in this computation is either
// pure rational or a pure multiple of sqrt2 (rotation scales each total-
// occupation sector uniformly), so the square never keeps a sqrt2 part.
Rational amp_squared(const QSqrt2& amp) {
  if (!amp.a.is_zero() && !amp.b.is_zero())
    throw std::logic_error("mixed Q(sqrt2) amplitude; squared probability not rational");
  return amp.a * amp.a + Rational(2) * (amp.b * amp.b);
}

Rational sector_weight(const State& state, int n_atoms, bool only_single_node1) {
  Rational sum(0);
  for (const auto& [key, amp] : state) {
    if (only_single_node1 && key[2] + key[3] != 1) continue;
    std::int64_t configs = 1;
    for (int node = 0; node < 3; ++node)
      configs *= multinomial_count(n_atoms, key[2 * node], key[2 * node + 1]);
    sum = sum + amp_squared(amp) * Rational(configs);
  }
  return sum;
}

}  // namespace

Rational brute_force_swap_success(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("brute_force_swap_success: n_atoms >= 1");
  if (n_atoms > 6)
    throw std::length_error("brute_force_swap_success: enumeration capped at n_atoms <= 6");

  // Two heralded links: blue shared by nodes (0, 1), red by nodes (1, 2).
  State vac;
  vac[{0, 0, 0, 0, 0, 0}] = QSqrt2(Rational(1));
  State blue = add(apply_creation(vac, n_atoms, 0, 0), apply_creation(vac, n_atoms, 1, 0));
  State both = add(apply_creation(blue, n_atoms, 1, 1), apply_creation(blue, n_atoms, 2, 1));

  State rotated = rotate_node(both, n_atoms, 1);

  const Rational single = sector_weight(rotated, n_atoms, true);
  const Rational total = sector_weight(rotated, n_atoms, false);
  return single / total;
}

}  // namespace fluorep
