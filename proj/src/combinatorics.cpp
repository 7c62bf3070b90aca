#include "mgc/combinatorics.hpp"

#include <stdexcept>

namespace mgc {

BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

BigInt multinomial(const std::vector<int>& parts) {
  int total = 0;
  BigInt den = 1;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("negative multinomial part");
    total += p;
    den *= factorial(p);
  }
  return factorial(total) / den;
}

BigInt catalan(int n) { return binomial(2 * n, n) / (n + 1); }

double to_double(const BigRational& q) { return q.convert_to<double>(); }

double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

double to_double(const BigInt& z) { return z.convert_to<double>(); }

}  // namespace mgc
