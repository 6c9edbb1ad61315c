#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rsp/layout.hpp"

using namespace rsp;

TEST_CASE("strides are trailing products and subsystem 0 is most significant") {
  const SubsystemLayout l = make_layout({3, 2, 2});
  CHECK(l.total_dim() == 12);
  CHECK(l.strides() == std::vector<long>{4, 2, 1});
  CHECK(l.flatten({0, 0, 0}) == 0);
  CHECK(l.flatten({0, 0, 1}) == 1);
  CHECK(l.flatten({1, 0, 0}) == 4);
  CHECK(l.flatten({2, 1, 1}) == 11);
}

TEST_CASE("flatten and unflatten are inverse over a mixed-radix register") {
  const SubsystemLayout l = make_layout({4, 3, 2, 5});
  for (long flat = 0; flat < l.total_dim(); ++flat) {
    const std::vector<int> idx = l.unflatten(flat);
    REQUIRE(idx.size() == 4);
    for (int i = 0; i < l.count(); ++i) {
      CHECK(idx[i] >= 0);
      CHECK(idx[i] < l.dims[i]);
      CHECK(l.digit(flat, i) == idx[i]);
    }
    CHECK(l.flatten(idx) == flat);
  }
}

TEST_CASE("labels must be absent or complete") {
  CHECK_NOTHROW(make_layout({2, 2}));
  CHECK_NOTHROW(make_layout({2, 2}, {"a", "b"}));
  CHECK_THROWS_AS(make_layout({2, 2}, {"a"}), std::invalid_argument);
}

TEST_CASE("dimensions below two or oversized registers are rejected") {
  CHECK_THROWS_AS(make_layout({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_layout({0}), std::invalid_argument);
  CHECK_THROWS_AS(make_layout(std::vector<int>(21, 2)), std::invalid_argument);
  // 2^20 = 1048576 > 1000000; 2^19 is fine.
  CHECK_NOTHROW(make_layout(std::vector<int>(19, 2)));
}

TEST_CASE("without() drops one subsystem and keeps the others in order") {
  const SubsystemLayout l = make_layout({3, 2, 5}, {"a", "b", "c"});
  const SubsystemLayout r = l.without(1);
  CHECK(r.dims == std::vector<int>{3, 5});
  CHECK(r.labels == std::vector<std::string>{"a", "c"});
}

TEST_CASE("out-of-range digits are rejected by flatten") {
  const SubsystemLayout l = make_layout({3, 2});
  CHECK_THROWS_AS(l.flatten({3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(l.flatten({0, -1}), std::invalid_argument);
  CHECK_THROWS_AS(l.flatten({0}), std::invalid_argument);
}
