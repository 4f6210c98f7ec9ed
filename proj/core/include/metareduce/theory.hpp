#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "metareduce/clause.hpp"

namespace metareduce {

using BigInt = boost::multiprecision::cpp_int;

// P(A,B) <- Q(A,C),R(A,D),S(B,C),T(B,D),U(C,D)
Metarule witness_ci();

// The a-by-a grid clause: head P(A1..Aa), literals Q_ij(A_i, B_j1..B_j(a-1))
// for all i, j and R_j(B_1j..B_aj) for j < a. Body size a^2+a-1.
// Throws std::invalid_argument unless 2 <= a <= 4.
Metarule witness_ca(unsigned a);

// C_I with the Q/R pair expanded m times; body size 3m+5.
// Throws std::invalid_argument unless 1 <= m <= 10.
Metarule witness_cim(unsigned m);

// P(X1..Xa) <- Q1(X1),...,Qa(Xa). Throws unless 1 <= a <= 4.
Metarule witness_datalog_s(unsigned a);

// P(A1..Aa) <- P1(A1,B1),P2(A1,B1),...,P(2a-1)(Aa,Ba),P(2a)(Aa,Ba).
// Throws unless 2 <= a <= 4.
Metarule witness_singleton_s(unsigned a);

// Upper bound (p^(m+1) * k)^n on programs with n clauses, p predicate
// symbols, k metarules and at most m body literals each.
BigInt hypothesis_space_size(unsigned long p, unsigned long k, unsigned long m,
                             unsigned long n);

}  // namespace metareduce
