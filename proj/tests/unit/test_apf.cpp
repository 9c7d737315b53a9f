#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "apsense/apf/imageproc.hpp"
#include "apsense/apf/pipeline.hpp"
#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"
#include "apsense/imagery/codec.hpp"
#include "support/oracles.hpp"

using namespace apsense;
using namespace apsense::apf;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("apsense_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

Mask random_mask(int h, int w, double density, std::mt19937_64& rng) {
  Mask m(h, w);
  std::bernoulli_distribution on(density);
  for (auto& v : m.v) v = on(rng) ? 1 : 0;
  return m;
}

// Union-find relabeling; numbering follows the raster order of each
// component's first pixel, matching the library convention.
std::vector<int> dsu_labels(const Mask& m, int* count_out) {
  const int n = m.h * m.w;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto join = [&](int a, int b) { parent[find(a)] = find(b); };

  for (int y = 0; y < m.h; ++y)
    for (int x = 0; x < m.w; ++x) {
      if (!m.at(y, x)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int ny = y + dy, nx = x + dx;
          if (ny < 0 || ny >= m.h || nx < 0 || nx >= m.w) continue;
          if (m.at(ny, nx)) join(y * m.w + x, ny * m.w + nx);
        }
    }

  std::vector<int> out(static_cast<std::size_t>(n), -1);
  std::map<int, int> renumber;
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (!m.v[static_cast<std::size_t>(i)]) continue;
    const int root = find(i);
    auto it = renumber.find(root);
    if (it == renumber.end()) it = renumber.emplace(root, next++).first;
    out[static_cast<std::size_t>(i)] = it->second;
  }
  if (count_out) *count_out = next;
  return out;
}

double point_to_ring_distance(const std::array<double, 2>& p,
                              const std::vector<std::array<double, 2>>& ring) {
  double best = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % ring.size()];
    const double vx = b[0] - a[0], vy = b[1] - a[1];
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? ((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(p[0] - a[0] - t * vx, p[1] - a[1] - t * vy));
  }
  return best;
}

}  // namespace

TEST_SUITE("apf") {

TEST_CASE("component labeling agrees with a union-find oracle") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> dim(1, 24);
  std::uniform_real_distribution<double> dens(0.1, 0.9);
  for (int it = 0; it < 40; ++it) {
    const Mask m = random_mask(dim(rng), dim(rng), dens(rng), rng);
    std::vector<int> labels;
    const int n = label_components(m, labels);
    int expect_n = 0;
    const std::vector<int> expect = dsu_labels(m, &expect_n);
    CHECK(n == expect_n);
    CHECK(labels == expect);
  }
}

TEST_CASE("distance transform matches the quadratic-time oracle") {
  std::mt19937_64 rng(72);
  std::uniform_int_distribution<int> dim(1, 20);
  std::uniform_real_distribution<double> dens(0.05, 0.95);
  for (int it = 0; it < 30; ++it) {
    const int h = dim(rng), w = dim(rng);
    const Mask m = random_mask(h, w, dens(rng), rng);
    const std::vector<double> got = distance_transform(m);
    const std::vector<double> want = testsupport::brute_edt(m.v, h, w);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(std::abs(got[i] - want[i]) <= 1e-9);
  }

  // No background anywhere: saturates at the diagonal.
  Mask full(3, 4);
  std::fill(full.v.begin(), full.v.end(), 1);
  const std::vector<double> sat = distance_transform(full);
  const double diag = std::sqrt(3.0 * 3.0 + 4.0 * 4.0);
  for (double d : sat) CHECK(d == doctest::Approx(diag));
}

TEST_CASE("local maxima are exactly the pixels with no greater neighbor") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  const int h = 12, w = 17;
  Mask m = random_mask(h, w, 0.7, rng);
  std::vector<double> field(static_cast<std::size_t>(h) * w);
  for (double& f : field) f = val(rng);
  const double min_value = 0.2;

  const std::vector<Peak> peaks = local_maxima(field, m, min_value);
  std::set<std::pair<int, int>> reported;
  for (const Peak& p : peaks) {
    CHECK(m.at(p.y, p.x) != 0);
    CHECK(p.value == field[static_cast<std::size_t>(p.y) * w + p.x]);
    CHECK(p.value >= min_value);
    reported.insert({p.y, p.x});
  }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!m.at(y, x)) continue;
      const double v = field[static_cast<std::size_t>(y) * w + x];
      bool greater_neighbor = false;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dy == 0 && dx == 0) continue;
          const int ny = y + dy, nx = x + dx;
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          if (field[static_cast<std::size_t>(ny) * w + nx] > v)
            greater_neighbor = true;
        }
      const bool expected = v >= min_value && !greater_neighbor;
      CHECK(reported.count({y, x}) == (expected ? 1u : 0u));
    }

  // Plateaus are non-strict maxima.
  Mask flat(1, 3);
  std::fill(flat.v.begin(), flat.v.end(), 1);
  const std::vector<Peak> plateau = local_maxima({2.0, 2.0, 2.0}, flat, 0.0);
  CHECK(plateau.size() == 3);

  CHECK_THROWS_AS(local_maxima({1.0}, flat, 0.0), Error);
}

TEST_CASE("peak merging keeps a dominant, well-separated subset") {
  std::mt19937_64 rng(74);
  std::uniform_int_distribution<int> coord(0, 30);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  const double radius = 5.0;

  std::vector<Peak> peaks;
  for (int i = 0; i < 60; ++i) peaks.push_back({coord(rng), coord(rng), val(rng)});
  const std::vector<Peak> kept = merge_peaks(peaks, radius);

  auto d2 = [](const Peak& a, const Peak& b) {
    return double(a.y - b.y) * (a.y - b.y) + double(a.x - b.x) * (a.x - b.x);
  };
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j)
      CHECK(d2(kept[i], kept[j]) > radius * radius);

  // Every input peak is represented: either kept or blocked by a kept
  // peak of greater or equal value within the radius.
  for (const Peak& p : peaks) {
    bool ok = false;
    for (const Peak& q : kept) {
      if (q.y == p.y && q.x == p.x && q.value == p.value) ok = true;
      if (d2(p, q) <= radius * radius && q.value >= p.value) ok = true;
    }
    CHECK(ok);
  }

  // Kept peaks come out sorted by value.
  for (std::size_t i = 1; i < kept.size(); ++i)
    CHECK(kept[i - 1].value >= kept[i].value);
}

TEST_CASE("watershed floods a corridor to a hand-checked split") {
  Mask m(1, 5);
  std::fill(m.v.begin(), m.v.end(), 1);
  const std::vector<double> field = {2.0, 1.0, 0.0, 1.0, 2.0};
  const std::vector<Peak> seeds = {{0, 0, 2.0}, {0, 4, 2.0}};
  const std::vector<int> labels = watershed(field, m, seeds);
  CHECK(labels == std::vector<int>{1, 1, 1, 2, 2});
}

TEST_CASE("watershed covers seeded components, skips unseeded ones, and repeats exactly") {
  std::mt19937_64 rng(75);
  const int h = 18, w = 23;
  Mask m = random_mask(h, w, 0.3, rng);
  const std::vector<double> field = distance_transform(m);

  std::vector<int> comp_labels;
  const int n_comp = label_components(m, comp_labels);
  REQUIRE(n_comp >= 2);

  // Seed only the first component (its first pixel in raster order).
  std::vector<Peak> seeds;
  for (std::size_t i = 0; i < comp_labels.size() && seeds.empty(); ++i)
    if (comp_labels[i] == 0)
      seeds.push_back({static_cast<int>(i) / w, static_cast<int>(i) % w, 0.0});

  const std::vector<int> ws = watershed(field, m, seeds);
  const std::vector<int> ws2 = watershed(field, m, seeds);
  CHECK(ws == ws2);

  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (comp_labels[i] == 0)
      CHECK(ws[i] == 1);  // seeded component fully flooded
    else
      CHECK(ws[i] == 0);  // background and unseeded components untouched
  }

  CHECK_THROWS_AS(watershed(field, m, {{-1, 0, 0.0}}), Error);
  Mask bg(2, 2);
  CHECK_THROWS_AS(
      watershed(std::vector<double>(4, 0.0), bg, {{0, 0, 0.0}}), Error);
}

TEST_CASE("multi-seed watershed assigns every foreground pixel of seeded components") {
  std::mt19937_64 rng(76);
  for (int it = 0; it < 10; ++it) {
    Mask m = random_mask(15, 15, 0.75, rng);
    if (m.count() == 0) continue;
    const std::vector<double> field = distance_transform(m);
    // Every component contains at least one local maximum of its
    // distance field, so seeding all maxima guarantees coverage.
    const std::vector<Peak> seeds = local_maxima(field, m, 0.0);
    const std::vector<int> ws = watershed(field, m, seeds);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (m.v[i])
        CHECK(ws[i] > 0);  // every maximum is a seed, so full coverage
      else
        CHECK(ws[i] == 0);
    }
  }
}

TEST_CASE("boundary tracing walks known shapes clockwise") {
  // 3x3 block inside a 5x5 raster.
  Mask m(5, 5);
  for (int y = 1; y <= 3; ++y)
    for (int x = 1; x <= 3; ++x) m.at(y, x) = 1;
  std::vector<int> labels;
  label_components(m, labels);

  const auto ring = trace_boundary(labels, 5, 5, 0);
  const std::vector<std::array<double, 2>> expect = {
      {1, 1}, {2, 1}, {3, 1}, {3, 2}, {3, 3}, {2, 3}, {1, 3}, {1, 2}};
  REQUIRE(ring.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(ring[i][0] == expect[i][0]);
    CHECK(ring[i][1] == expect[i][1]);
  }
  CHECK(polygon_area(ring) == doctest::Approx(4.0));

  // A single pixel is its own (degenerate) ring.
  Mask solo(3, 3);
  solo.at(1, 2) = 1;
  std::vector<int> solo_labels;
  label_components(solo, solo_labels);
  const auto dot = trace_boundary(solo_labels, 3, 3, 0);
  REQUIRE(dot.size() == 1);
  CHECK(dot[0][0] == 2.0);
  CHECK(dot[0][1] == 1.0);

  // A horizontal bar is traced out and back.
  Mask bar(1, 4);
  std::fill(bar.v.begin(), bar.v.end(), 1);
  std::vector<int> bar_labels;
  label_components(bar, bar_labels);
  const auto bar_ring = trace_boundary(bar_labels, 1, 4, 0);
  CHECK(bar_ring.size() == 6);  // 0,1,2,3,2,1

  // Unknown label: empty ring.
  CHECK(trace_boundary(labels, 5, 5, 9).empty());
}

TEST_CASE("ring simplification stays within tolerance and keeps corners") {
  const std::vector<std::array<double, 2>> square_ring = {
      {1, 1}, {2, 1}, {3, 1}, {3, 2}, {3, 3}, {2, 3}, {1, 3}, {1, 2}};
  const auto simple = simplify_ring(square_ring, 0.5);
  const std::vector<std::array<double, 2>> corners = {
      {1, 1}, {3, 1}, {3, 3}, {1, 3}};
  REQUIRE(simple.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(simple[i][0] == corners[i][0]);
    CHECK(simple[i][1] == corners[i][1]);
  }
  CHECK(polygon_area(simple) == doctest::Approx(4.0));

  // Property: every original vertex lies within the tolerance of the
  // simplified closed chain.
  std::mt19937_64 rng(77);
  for (int it = 0; it < 12; ++it) {
    Mask m = random_mask(14, 14, 0.65, rng);
    std::vector<int> labels;
    const int n = label_components(m, labels);
    for (int lab = 0; lab < n; ++lab) {
      const auto ring = trace_boundary(labels, 14, 14, lab);
      if (ring.size() < 4) continue;
      const double tol = 2.0;
      const auto simp = simplify_ring(ring, tol);
      // Thin out-and-back limbs can collapse to their two anchors.
      CHECK(simp.size() >= 2);
      for (const auto& p : ring)
        CHECK(point_to_ring_distance(p, simp) <= tol + 1e-9);
    }
  }
}

TEST_CASE("shoelace area handles orientation and degenerate rings") {
  CHECK(polygon_area({{0, 0}, {4, 0}, {0, 3}}) == doctest::Approx(6.0));
  CHECK(polygon_area({{0, 0}, {0, 3}, {4, 0}}) == doctest::Approx(6.0));
  CHECK(polygon_area({{0, 0}, {1, 1}}) == 0.0);
  CHECK(polygon_area({}) == 0.0);
}

TEST_CASE("otsu threshold splits a bimodal raster between the modes") {
  std::vector<double> values;
  for (int i = 0; i < 50; ++i) values.push_back(0.2);
  for (int i = 0; i < 50; ++i) values.push_back(0.8);
  const double tau = otsu_threshold(values);
  CHECK(tau == doctest::Approx(52.0 / 255.0));
  CHECK(tau > 0.2);
  CHECK(tau < 0.8);
  CHECK_THROWS_AS(otsu_threshold({}), Error);
}

TEST_CASE("band thresholds scale with raster height") {
  const BandRule at640 = BandRule::for_height(640);
  CHECK(at640.upper_rows == 300);
  CHECK(at640.lower_start == 360);

  const BandRule at320 = BandRule::for_height(320);
  CHECK(at320.upper_rows == 150);
  CHECK(at320.lower_start == 180);

  const BandRule at224 = BandRule::for_height(224);
  CHECK(at224.upper_rows == 105);
  CHECK(at224.lower_start == 126);

  const BandRule at333 = BandRule::for_height(333);
  CHECK(at333.upper_rows == 156);   // rounds 156.09
  CHECK(at333.lower_start == 187);  // rounds 187.31

  CHECK_THROWS_AS(BandRule::for_height(0), Error);
}

TEST_CASE("band filtering keeps exactly the blobs that reach the near road") {
  const int h = 640, w = 16;
  Mask m(h, w);
  auto blob = [&](int y0, int y1, int x0, int x1) {
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) m.at(y, x) = 1;
  };
  blob(100, 250, 1, 2);    // sky / far band only: removed
  blob(400, 500, 4, 5);    // fully in the near band: kept
  blob(320, 420, 7, 8);    // straddles the boundary: kept whole
  blob(310, 350, 10, 11);  // ends above the near band: removed
  blob(360, 360, 13, 13);  // touches the first near-band row: kept

  const BandRule rule = BandRule::for_height(h);
  const Mask out = band_filter(m, rule);

  auto blob_count = [&](int y0, int y1, int x0, int x1) {
    std::size_t c = 0;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (out.at(y, x)) ++c;
    return c;
  };
  CHECK(blob_count(100, 250, 1, 2) == 0);
  CHECK(blob_count(400, 500, 4, 5) == 2 * 101);
  CHECK(blob_count(320, 420, 7, 8) == 2 * 101);  // kept in full
  CHECK(blob_count(310, 350, 10, 11) == 0);
  CHECK(blob_count(360, 360, 13, 13) == 1);
  CHECK(out.count() == 2 * 101 + 2 * 101 + 1);
}

TEST_CASE("band filtering is idempotent on random masks") {
  std::mt19937_64 rng(78);
  std::uniform_int_distribution<int> dim(4, 40);
  std::uniform_real_distribution<double> dens(0.1, 0.9);
  for (int it = 0; it < 100; ++it) {
    const int h = dim(rng), w = dim(rng);
    const Mask m = random_mask(h, w, dens(rng), rng);
    const BandRule rule = BandRule::for_height(h);
    const Mask once = band_filter(m, rule);
    const Mask twice = band_filter(once, rule);
    CHECK(once.v == twice.v);
  }

  Mask m(4, 4);
  BandRule bad;
  bad.lower_start = 5;
  CHECK_THROWS_AS(band_filter(m, bad), Error);
}

TEST_CASE("binarization is inclusive at the threshold") {
  const std::vector<double> heat = {0.0, 0.4999, 0.5, 0.5001, 1.0, 0.2};
  const Mask m = binarize(heat, 2, 3, 0.5);
  CHECK(m.v == std::vector<std::uint8_t>{0, 0, 1, 1, 1, 0});
  CHECK_THROWS_AS(binarize(heat, 2, 2, 0.5), Error);
}

TEST_CASE("contour extraction reports area and outlines per region") {
  Mask m(20, 20);
  auto disk = [&](int cy, int cx, int r) {
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 20; ++x)
        if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= r * r) m.at(y, x) = 1;
  };
  disk(5, 5, 3);
  disk(14, 14, 3);

  const ContourSet cs = extract_contours(m);
  CHECK(cs.area_fraction_percent ==
        doctest::Approx(100.0 * double(m.count()) / 400.0));
  CHECK(cs.contours.size() == 2);
  for (const auto& ring : cs.contours) {
    CHECK(ring.size() >= 3);
    for (const auto& p : ring) {
      CHECK(p[0] >= 0.0);
      CHECK(p[0] <= 19.0);
      CHECK(p[1] >= 0.0);
      CHECK(p[1] <= 19.0);
    }
  }

  const ContourSet again = extract_contours(m);
  CHECK(again.contours == cs.contours);

  const ContourSet empty = extract_contours(Mask(8, 8));
  CHECK(empty.area_fraction_percent == 0.0);
  CHECK(empty.contours.empty());
}

TEST_CASE("the full chain binarizes, filters and outlines a heatmap") {
  // 32-row scene: the near band starts at row 18. A hot blob spanning
  // rows 12..24 survives; one confined to rows 2..8 does not.
  cam::Heatmap heat;
  heat.h = 32;
  heat.w = 32;
  heat.v.assign(32 * 32, 0.0);
  auto paint = [&](int y0, int y1, int x0, int x1, double v) {
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) heat.v[static_cast<std::size_t>(y) * 32 + x] = v;
  };
  paint(2, 8, 4, 10, 0.9);
  paint(12, 24, 16, 24, 0.8);

  const BandRule rule = BandRule::for_height(32);
  CHECK(rule.lower_start == 18);
  const ContourSet cs = run_pipeline(heat, 0.5, rule);

  CHECK(cs.mask.count() == 13 * 9);
  REQUIRE(cs.contours.size() == 1);
  // A clean rectangle simplifies to its four corners.
  CHECK(polygon_area(cs.contours[0]) == doctest::Approx(8.0 * 12.0));

  const Mask expected_region = band_filter(binarize(heat, 0.5), rule);
  CHECK(cs.mask.v == expected_region.v);
}

TEST_CASE("overlay, mask and contour files round-trip") {
  Mask m(10, 12);
  for (int y = 4; y <= 8; ++y)
    for (int x = 2; x <= 9; ++x) m.at(y, x) = 1;
  const ContourSet cs = extract_contours(m);
  REQUIRE(cs.contours.size() == 1);

  imagery::ImageU8 base(10, 12, 3);  // black
  const imagery::ImageU8 over = render_overlay(base, cs);
  CHECK(over.at(4, 2, 0) == 255);  // boundary pixel turned red
  CHECK(over.at(4, 2, 1) == 0);
  CHECK(over.at(4, 2, 2) == 0);
  CHECK(over.at(0, 0, 0) == 0);  // background untouched

  imagery::ImageU8 small(4, 4, 3);
  CHECK_THROWS_AS(render_overlay(small, cs), Error);

  const auto dir = temp_dir("apf");
  write_mask_png(dir / "mask.png", m);
  const imagery::ImageU8 back = imagery::read_image(dir / "mask.png");
  CHECK(back.c == 1);
  for (std::size_t i = 0; i < m.v.size(); ++i)
    CHECK(back.v[i] == (m.v[i] ? 255 : 0));

  write_contours_json(dir / "contours.json", cs);
  const auto j = nlohmann::json::parse(fs::read_text(dir / "contours.json"));
  CHECK(j.at("height") == 10);
  CHECK(j.at("width") == 12);
  CHECK(j.at("area_fraction_percent").get<double>() ==
        doctest::Approx(cs.area_fraction_percent));
  REQUIRE(j.at("contours").size() == 1);
  CHECK(j.at("contours")[0].size() == cs.contours[0].size());
  CHECK(j.at("contours")[0][0][0].get<double>() == cs.contours[0][0][0]);
  CHECK(j.at("contours")[0][0][1].get<double>() == cs.contours[0][0][1]);

  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
