#ifndef CHANNELKIT_TESTS_FIXTURES_HPP
#define CHANNELKIT_TESTS_FIXTURES_HPP

// Canonical fixtures: Y = {a,b}, Z = {p}, sigma collapses Y onto p,
// M over Y has x1 : {a} and x2 : {a,b}, N over Z has u : {p}.

#include <string>

#include "channelkit/channelkit.hpp"

namespace fixtures {

using namespace channelkit;

inline FinSet Y() { return FinSet{"a", "b"}; }
inline FinSet Z() { return FinSet{"p"}; }

inline SetFn sigma() { return SetFn::from_names(Y(), Z(), {{"a", "p"}, {"b", "p"}}); }

inline Classification M() {
  return Classification::from_rows(FinSet{"x1", "x2"}, Y(), {{"a"}, {"a", "b"}});
}

inline Classification N() { return Classification::from_rows(FinSet{"u"}, Z(), {{"p"}}); }

/// (sigma, u -> x2) : M -> N, a valid infomorphism.
inline Infomorphism f() {
  return Infomorphism(M(), N(), sigma(), SetFn::from_names(FinSet{"u"}, FinSet{"x1", "x2"}, {{"u", "x2"}}));
}

/// (sigma, u -> x1): breaks the fundamental condition at (u, b).
inline Infomorphism f_bad() {
  return Infomorphism(M(), N(), sigma(), SetFn::from_names(FinSet{"u"}, FinSet{"x1", "x2"}, {{"u", "x1"}}));
}

inline Sequent seq(const FinSet& lang, const std::string& literal) {
  return parse_sequent(lang, literal);
}

inline Theory theory(const FinSet& lang, std::initializer_list<const char*> literals) {
  Theory t(lang);
  for (const char* l : literals) t.insert(seq(lang, l));
  return t;
}

// Pushout span A0 -> A1, A0 -> A2 with m |-> b and m |-> b'.
inline Classification A0() {
  return Classification::from_rows(FinSet{"o1", "o2"}, FinSet{"m"}, {{"m"}, {}});
}
inline Classification A1() {
  return Classification::from_rows(FinSet{"y1", "y2", "y3"}, FinSet{"a", "b"},
                                   {{"a", "b"}, {"b"}, {"a"}});
}
inline Classification A2() {
  return Classification::from_rows(FinSet{"z1", "z2"}, FinSet{"b'", "c"}, {{"b'", "c"}, {}});
}

inline DistributedSystem pushout_system() {
  const Infomorphism left(A0(), A1(), SetFn::from_names(FinSet{"m"}, A1().types(), {{"m", "b"}}),
                          SetFn::from_names(A1().instances(), A0().instances(),
                                            {{"y1", "o1"}, {"y2", "o1"}, {"y3", "o2"}}));
  const Infomorphism right(A0(), A2(), SetFn::from_names(FinSet{"m"}, A2().types(), {{"m", "b'"}}),
                           SetFn::from_names(A2().instances(), A0().instances(),
                                             {{"z1", "o1"}, {"z2", "o2"}}));
  return DistributedSystem({A0(), A1(), A2()}, {{0, 1, left}, {0, 2, right}}, {"A0", "A1", "A2"});
}

}  // namespace fixtures

#endif  // CHANNELKIT_TESTS_FIXTURES_HPP
