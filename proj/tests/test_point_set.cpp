#include <doctest.h>

#include <random>

#include "tanglekit/error.hpp"
#include "tanglekit/point_set.hpp"

using tanglekit::PointSet;

TEST_SUITE("point_set") {

TEST_CASE("basic membership and counts") {
  PointSet s = PointSet::from_indices(10, {1, 3, 9});
  CHECK(s.count() == 3);
  CHECK(s.test(3));
  CHECK_FALSE(s.test(2));
  CHECK(s.first() == 1);
  CHECK(s.next_after(3) == 9);
  CHECK_FALSE(s.next_after(9).has_value());
  CHECK(s.indices() == std::vector<std::size_t>{1, 3, 9});
  CHECK(s.complement().count() == 7);
  CHECK(s.complement().complement() == s);
  CHECK(PointSet::full(10).is_full());
  CHECK(PointSet(10).empty());
}

TEST_CASE("out of range index is rejected") {
  CHECK_THROWS_AS(PointSet::from_indices(4, {4}), tanglekit::Error);
}

TEST_CASE("large universes spill past the inline words") {
  PointSet s(300);
  s.set(0);
  s.set(150);
  s.set(299);
  CHECK(s.count() == 3);
  CHECK(s.complement().count() == 297);
  CHECK(s.complement().is_full() == false);
  CHECK((s | s.complement()).is_full());
  CHECK(s.next_after(150) == 299);
}

TEST_CASE("lex order compares sorted member lists") {
  const auto a = PointSet::from_indices(6, {0, 5});
  const auto b = PointSet::from_indices(6, {1, 2});
  const auto p = PointSet::from_indices(6, {0});
  CHECK(tanglekit::lex_less(a, b));
  CHECK_FALSE(tanglekit::lex_less(b, a));
  CHECK(tanglekit::lex_less(p, a));  // a prefix comes first
  CHECK_FALSE(tanglekit::lex_less(a, a));
}

TEST_CASE("set algebra agrees with per-bit evaluation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 140;
    PointSet a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() & 1) a.set(i);
      if (rng() & 1) b.set(i);
      if (rng() % 3 == 0) c.set(i);
    }
    bool any3 = false;
    bool sub = true;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK((a & b).test(i) == (a.test(i) && b.test(i)));
      CHECK((a | b).test(i) == (a.test(i) || b.test(i)));
      CHECK((a - b).test(i) == (a.test(i) && !b.test(i)));
      any3 = any3 || (a.test(i) && b.test(i) && c.test(i));
      sub = sub && (!a.test(i) || b.test(i));
      cnt += a.test(i);
    }
    CHECK(PointSet::meet(a, b, c) == any3);
    CHECK(a.is_subset_of(b) == sub);
    CHECK(a.count() == cnt);
    CHECK(a.intersects(b) == !(a & b).empty());
    if (a == b) CHECK(a.hash() == b.hash());
    if (n <= 64) CHECK(((a <=> b) < 0) == (a.word(0) < b.word(0)));
  }
}

}  // TEST_SUITE
