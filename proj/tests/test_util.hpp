#pragma once

#include "doctest.h"
#include "fnmc/fox.hpp"
#include "fnmc/tree.hpp"

namespace doctest {
template <>
struct StringMaker<fnmc::FnTree> {
  static String convert(const fnmc::FnTree& t) { return fnmc::format_tree(t).c_str(); }
};
template <>
struct StringMaker<fnmc::FnChain> {
  static String convert(const fnmc::FnChain& c) { return fnmc::format_chain(c).c_str(); }
};
template <>
struct StringMaker<fnmc::FoxPolynomial> {
  static String convert(const fnmc::FoxPolynomial& p) { return fnmc::format_polynomial(p).c_str(); }
};
template <>
struct StringMaker<fnmc::FoxMonomial> {
  static String convert(const fnmc::FoxMonomial& m) { return fnmc::format_monomial(m).c_str(); }
};
}  // namespace doctest
