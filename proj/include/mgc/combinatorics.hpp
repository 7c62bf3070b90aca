#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace mgc {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
// Casimir eigenvalues are small rationals
using Rational = boost::rational<long long>;

BigInt factorial(int n);
BigInt binomial(int n, int k);
BigInt multinomial(const std::vector<int>& parts);
BigInt catalan(int n);

double to_double(const BigRational& q);
double to_double(const Rational& q);
double to_double(const BigInt& z);

}  // namespace mgc
