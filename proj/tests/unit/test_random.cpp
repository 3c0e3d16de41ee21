#include <stdexcept>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rcbound/parallel.hpp"
#include "rcbound/random.hpp"

using namespace rcb;

TEST_CASE("philox4x32-10 known answers") {
  using B = Philox4x32::Block;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate_block(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate_block(B{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, K{0xffffffffu, 0xffffffffu}) ==
        B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate_block(B{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, K{0xa4093822u, 0x299f31d0u}) ==
        B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("replicate engines are reproducible and distinct") {
  const Stream s{123, 456};
  auto a = s.engine(7);
  auto b = s.engine(7);
  auto c = s.engine(8);
  std::vector<std::uint64_t> xa, xb, xc;
  for (int i = 0; i < 16; ++i) {
    xa.push_back(a());
    xb.push_back(b());
    xc.push_back(c());
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
  CHECK(s.derive(1).tag != s.derive(2).tag);
  CHECK(s.derive("x").tag == s.derive("x").tag);
}

namespace {

struct Moments {
  double m1 = 0, m2 = 0, m4 = 0;
};

template <class F>
Moments moments(F draw, int n) {
  auto eng = Stream{99, 1}.engine(0);
  Moments m;
  for (int i = 0; i < n; ++i) {
    const double x = draw(eng);
    m.m1 += x;
    m.m2 += x * x;
    m.m4 += x * x * x * x;
  }
  m.m1 /= n;
  m.m2 /= n;
  m.m4 /= n;
  return m;
}

}  // namespace

TEST_CASE("variate generators match their first moments") {
  const int n = 200000;
  const auto u = moments([](Philox4x32& e) { return uniform_open(e); }, n);
  CHECK(std::abs(u.m1 - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(u.m2 - 1.0 / 3.0) < 4.0 * std::sqrt(4.0 / 45.0 / n));

  const auto z = moments([](Philox4x32& e) { return standard_normal(e); }, n);
  CHECK(std::abs(z.m1) < 4.0 / std::sqrt(n));
  CHECK(std::abs(z.m2 - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(z.m4 - 3.0) < 4.0 * std::sqrt(96.0 / n));

  const auto x = moments([](Philox4x32& e) { return standard_exponential(e); }, n);
  CHECK(std::abs(x.m1 - 1.0) < 4.0 / std::sqrt(n));
  CHECK(std::abs(x.m2 - 2.0) < 4.0 * std::sqrt(20.0 / n));
}

TEST_CASE("uniform draws stay inside the open interval") {
  auto eng = Stream{1, 2}.engine(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform_open(eng);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("compensated summation") {
  const std::vector<double> v{1e16, 1.0, -1e16};
  CHECK(compensated_sum(v) == 1.0);
  CompensatedSum acc;
  for (double x : v) acc.add(x);
  CHECK(acc.value() == 1.0);
}

TEST_CASE("parallel aggregate is independent of the worker count") {
  const std::size_t n = 50001;
  const Stream s{5, 6};
  std::vector<double> reference;
  for (int workers : {1, 2, 3, 7, 16}) {
    std::vector<double> out(n);
    parallel_for(n, workers, [&](std::size_t i) {
      auto e = s.engine(i);
      out[i] = standard_normal(e) * 1e8 + uniform_open(e);
    });
    const double total = compensated_sum(out);
    if (reference.empty()) {
      reference = out;
      reference.push_back(total);
    } else {
      out.push_back(total);
      CHECK(out == reference);
    }
  }
}

TEST_CASE("parallel_for rethrows body exceptions") {
  CHECK_THROWS(parallel_for(100, 4, [](std::size_t i) {
    if (i == 57) throw std::runtime_error("boom");
  }));
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
}
