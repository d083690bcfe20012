#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gaboredge/colorspace.hpp"
#include "gaboredge/esm.hpp"
#include "gaboredge/synthetic.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gaboredge;

TEST_SUITE("esm") {

TEST_CASE("channel ESM is the max magnitude over orientations") {
  std::mt19937_64 rng(21);
  const auto img = testing::random_plane(15, 11, rng);
  GaborParams p;
  p.frequencies = {0.3};
  p.orientations = 6;
  const auto bank = build_bank(p);
  const auto got = channel_esm(img, bank.scale(0));
  std::vector<RealPlane> mags;
  for (const auto& k : bank.scale(0)) {
    RealPlane m(15, 11);
    const auto r = oracle::convolve(img, k);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = std::abs(r.data()[i]);
    mags.push_back(m);
  }
  for (int y = 0; y < 11; ++y) {
    for (int x = 0; x < 15; ++x) {
      int best = 0;
      for (int k = 1; k < 6; ++k) {
        if (mags[k](x, y) > mags[best](x, y)) best = k;
      }
      CHECK(got.esm.strength(x, y) == doctest::Approx(mags[best](x, y)).epsilon(1e-12));
      if (mags[best](x, y) > 1e-6) CHECK(got.orientation.k_star(x, y) == best);
    }
  }
  CHECK(got.orientation.orientations == 6);
}

TEST_CASE("ties go to the smallest orientation index") {
  std::vector<RealPlane> same(4, RealPlane(3, 3, 2.0));
  same[2](1, 1) = 5.0;
  same[3](1, 1) = 5.0;
  const auto e = channel_esm_from_magnitudes(same);
  CHECK(e.orientation.k_star(0, 0) == 0);
  CHECK(e.orientation.k_star(1, 1) == 2);
  CHECK(e.esm.strength(1, 1) == 5.0);
}

TEST_CASE("kernels from different scales are refused") {
  const auto bank = build_bank(GaborParams{});
  std::vector<GaborKernel> mixed{bank.at(0, 0), bank.at(1, 1)};
  CHECK_THROWS_AS(channel_esm(RealPlane(4, 4), mixed), ParameterError);
}

TEST_CASE("vertical step peaks on the step column with the horizontal carrier") {
  const auto gray = rgb_to_lab(synthetic::vertical_step(64, 64, 32, {40, 40, 40}, {220, 220, 220}).image);
  const auto color = rgb_to_lab(synthetic::vertical_step(64, 64, 32, {200, 60, 50}, {40, 90, 200}).image);
  const auto bank = build_bank(GaborParams{});
  for (const RealPlane* ch : {&gray.l, &color.a, &color.b}) {
    for (int s = 0; s < bank.scales(); ++s) {
      const auto e = channel_esm(*ch, bank.scale(s));
      for (int y = 8; y < 56; y += 8) {
        int arg = 0;
        for (int x = 1; x < 64; ++x) {
          if (e.esm.strength(x, y) > e.esm.strength(arg, y)) arg = x;
        }
        // The color change lies between columns 31 and 32.
        CHECK((arg == 31 || arg == 32));
        CHECK(e.orientation.k_star(arg, y) == 0);
      }
    }
  }
}

TEST_CASE("fusion is the geometric mean") {
  std::mt19937_64 rng(8);
  std::vector<EsmMap> maps;
  for (int i = 0; i < 6; ++i) maps.push_back({testing::random_plane(5, 4, rng, 0.0, 10.0)});
  maps[3].strength(2, 2) = 0.0;
  const auto fused = fuse(maps);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 5; ++x) {
      double logsum = 0.0;
      bool zero = false;
      for (const auto& m : maps) {
        zero = zero || m.strength(x, y) == 0.0;
        logsum += std::log(m.strength(x, y));
      }
      if (zero) CHECK(fused.strength(x, y) == 0.0);
      else CHECK(fused.strength(x, y) == doctest::Approx(std::exp(logsum / 6)).epsilon(1e-12));
    }
  }
  std::vector<EsmMap> one{maps[0]};
  CHECK(fuse(one).strength == maps[0].strength);
  CHECK_THROWS_AS(fuse(std::vector<EsmMap>{}), ParameterError);
  std::vector<EsmMap> mismatched{maps[0], {RealPlane(2, 2, 1.0)}};
  CHECK_THROWS_AS(fuse(mismatched), ParameterError);
}

TEST_CASE("global and local means against brute force") {
  std::mt19937_64 rng(13);
  for (auto [w, h] : {std::pair{9, 7}, {1, 1}, {2, 5}, {20, 3}}) {
    const EsmMap m{testing::random_plane(w, h, rng, 0.0, 4.0)};
    double s = 0.0;
    for (int y = h - 1; y >= 0; --y) {
      for (int x = w - 1; x >= 0; --x) s += m.strength(x, y);
    }
    CHECK(global_mean(m) == doctest::Approx(s / (w * h)).epsilon(1e-12));
    for (int win : {3, 7}) {
      const auto got = local_mean(m, win);
      const auto want = oracle::box_mean(m.strength, win);
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::abs(got.data()[i] - want.data()[i]) <= 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(local_mean({RealPlane(4, 4)}, 4), ParameterError);
  CHECK_THROWS_AS(local_mean({RealPlane(4, 4)}, 1), ParameterError);
}

TEST_CASE("contrast equalization") {
  std::mt19937_64 rng(17);
  const EsmMap m{testing::random_plane(12, 9, rng, 0.0, 3.0)};
  const auto e = contrast_equalize(m, 7);
  CHECK_FALSE(e.degenerate);
  CHECK(e.window == 7);
  const auto local = oracle::box_mean(m.strength, 7);
  const double mean = global_mean(m);
  for (std::size_t i = 0; i < m.strength.size(); ++i) {
    CHECK(e.strength.data()[i] ==
          doctest::Approx(m.strength.data()[i] / (mean + 0.5 * local.data()[i])).epsilon(1e-12));
  }
  EsmMap scaled = m;
  for (auto& v : scaled.strength.data()) v *= 37.5;
  const auto es = contrast_equalize(scaled, 7);
  for (std::size_t i = 0; i < m.strength.size(); ++i) {
    CHECK(std::abs(es.strength.data()[i] - e.strength.data()[i]) <= 1e-9);
  }
  const auto z = contrast_equalize({RealPlane(6, 6, 0.0)}, 3);
  CHECK(z.degenerate);
  for (double v : z.strength.data()) CHECK(v == 0.0);
}

TEST_CASE("fused orientation sums energy before the argmax") {
  std::vector<RealPlane> a(3, RealPlane(2, 1, 0.0)), b(3, RealPlane(2, 1, 0.0));
  a[0](0, 0) = 5.0;  // channel a alone prefers k = 0
  b[1](0, 0) = 3.0;
  b[2](0, 0) = 3.0;
  a[2](0, 0) = 2.5;  // summed: k0 = 5, k1 = 3, k2 = 5.5
  a[1](1, 0) = 1.0;
  b[2](1, 0) = 1.0;  // tie at x = 1 -> k = 1
  std::vector<std::vector<RealPlane>> stacks{a, b};
  const auto o = fused_orientation(stacks);
  CHECK(o.k_star(0, 0) == 2);
  CHECK(o.k_star(1, 0) == 1);
  OrientationEnergy acc(2, 1, 3);
  acc.add(a);
  acc.add(b);
  CHECK(acc.argmax().k_star == o.k_star);
  CHECK_THROWS_AS(acc.add(std::vector<RealPlane>(2, RealPlane(2, 1))), ParameterError);
}

}
