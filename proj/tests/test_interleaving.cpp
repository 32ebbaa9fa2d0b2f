#include <doctest.h>

#include <cmath>

#include "sheafenergy/interleaving.hpp"
#include "test_util.hpp"

using namespace sheafenergy;
using testutil::random_barcode;

namespace {
const double pi = std::acos(-1.0);
}

TEST_CASE("translate shifts endpoints only") {
  CHECK(translate(Barcode::single(0, 1), 2.0) == Barcode::single(2, 3));
  Barcode f({Bar(0, 1, 0, 2), Bar(-1, kInf, 1)});
  CHECK(translate(f, 0.0) == f);
  CHECK(translate(Barcode::single(-pi / 2, 0), pi / 2) == Barcode::single(0, pi / 2));

  CounterRng rng(5);
  for (int i = 0; i < 30; ++i) {
    Barcode g = random_barcode(rng, 4, true);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    CHECK(translate(translate(g, a), b).approx_equal(translate(g, a + b), 1e-12));
    CHECK(translate(g, 0.0) == g);
  }
}

TEST_CASE("tau_is_zero vanishing rule") {
  CHECK(tau_is_zero(Barcode::single(0, 1), 1.0));
  CHECK_FALSE(tau_is_zero(Barcode::single(0, 1), 0.0));
  CHECK(tau_is_zero(Barcode{}, 0.0));
  CHECK_FALSE(tau_is_zero(Barcode::single(0, kInf), 1e6));
  CHECK_THROWS_AS(tau_is_zero(Barcode::single(0, 1), -1.0), std::invalid_argument);

  CounterRng rng(6);
  for (int i = 0; i < 50; ++i) {
    Barcode f = random_barcode(rng, 4, true);
    const double c = rng.uniform(0, 4);
    const double cc = c + rng.uniform(0, 2);
    if (tau_is_zero(f, c)) CHECK(tau_is_zero(f, cc));
  }
}

TEST_CASE("hom_dims closed-form rule table") {
  // identity case
  CHECK(hom_dims(Bar(0, 1), Bar(0, 1)) == HomDims{{0, 1}});
  // right-shifted overlap carries the degree-0 generator
  CHECK(hom_dims(Bar(0, 2), Bar(1, 3)) == HomDims{{0, 1}});
  // disjoint far-separated bars have no maps at all
  CHECK(hom_dims(Bar(0, 1), Bar(5, 6)).empty());
  // left-adjacent target carries only the extension class
  CHECK(hom_dims(Bar(1, 2), Bar(0, 1)) == HomDims{{1, 1}});
  // degree offsets shift the answer
  CHECK(hom_dims(Bar(0, 2, 3), Bar(1, 3, 5)) == HomDims{{2, 1}});
  // multiplicities multiply
  CHECK(hom_dims(Bar(0, 1, 0, 2), Bar(0, 1, 0, 3)) == HomDims{{0, 6}});
  // rays: nonzero map onto a later ray, none backwards
  CHECK(hom_dims(Bar(0, kInf), Bar(2, kInf)) == HomDims{{0, 1}});
  CHECK(hom_dims(Bar(2, kInf), Bar(0, kInf)).empty());
  // extension of a ray by a bounded bar ending at its birth
  CHECK(hom_dims(Bar(0, kInf), Bar(-1, 0)) == HomDims{{1, 1}});
}

TEST_CASE("is_interleaved identity and zero cases") {
  Barcode f({Bar(0, 1), Bar(2, 5, -1)});
  auto cert = is_interleaved(f, f, 0, 0);
  CHECK(cert.interleaved);
  CHECK(cert.verify(f, f));

  // tau_1 of [0,1) vanishes, so the zero object is (a,b)-interleaved with
  // it whenever a + b = 1
  for (double a : {0.0, 0.25, 1.0}) {
    auto c = is_interleaved(Barcode{}, Barcode::single(0, 1), a, 1.0 - a);
    CHECK(c.interleaved);
    CHECK(c.verify(Barcode{}, Barcode::single(0, 1)));
  }
  auto c0 = is_interleaved(Barcode{}, Barcode::single(0, 1), 0.0, 0.5);
  CHECK_FALSE(c0.interleaved);
  CHECK(c0.failed_factorization == 2);

  // rays never become interleaved with the zero object
  auto cr = is_interleaved(Barcode{}, Barcode::single(0, kInf), 10.0, 10.0);
  CHECK_FALSE(cr.interleaved);
  CHECK_THROWS_AS(is_interleaved(f, f, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("is_interleaved monotone in (a, b)") {
  CounterRng rng(7);
  int yes = 0;
  for (int i = 0; i < 60; ++i) {
    Barcode f = random_barcode(rng, 3);
    Barcode g = random_barcode(rng, 3);
    const double a = rng.uniform(0, 3), b = rng.uniform(0, 3);
    auto c = is_interleaved(f, g, a, b);
    if (c.interleaved) {
      ++yes;
      CHECK(c.verify(f, g));
      CHECK(is_interleaved(f, g, a + rng.uniform(0, 1), b + rng.uniform(0, 1)).interleaved);
    }
  }
  CHECK(yes > 0);
}

TEST_CASE("matching decision agrees with exhaustive bilinear solve") {
  CounterRng rng(8);
  int yes = 0, no = 0;
  for (int i = 0; i < 120; ++i) {
    Barcode f = random_barcode(rng, 2);
    Barcode g = random_barcode(rng, 2);
    const double a = rng.uniform(0, 2), b = rng.uniform(0, 2);
    const bool fast = detail::factorization_feasible(f, g, a, b, nullptr);
    const bool brute = detail::factorization_feasible_bruteforce(f, g, a, b);
    CHECK(fast == brute);
    (fast ? yes : no)++;
  }
  CHECK(yes > 0);
  CHECK(no > 0);
}

TEST_CASE("distance thresholds agree with the bilinear decision") {
  // The production distance rests on matching feasibility; the value must
  // be consistent with the exhaustive bilinear solver on both sides of
  // the threshold.
  CounterRng rng(12);
  auto bilinear_pair = [](const Barcode& f, const Barcode& g, double a, double b) {
    return detail::factorization_feasible_bruteforce(f, g, a, b) &&
           detail::factorization_feasible_bruteforce(g, f, b, a);
  };
  int finite = 0;
  for (int i = 0; i < 12; ++i) {
    const Barcode f = random_barcode(rng, 2);
    const Barcode g = random_barcode(rng, 2);
    const double d = interleaving_distance(f, g);
    if (d == kInf) continue;
    ++finite;
    // feasible just above the distance for some split drawn from the
    // endpoint-difference thresholds
    const double up = d + 1e-6;
    std::vector<double> splits{0.0, up, up / 2};
    for (const Barcode* bc : {&f, &g})
      for (const Bar& x : bc->bars())
        for (const Bar& y : bc == &f ? g.bars() : f.bars()) {
          for (double t : {x.birth - y.birth, x.birth - y.death, x.death - y.birth}) {
            if (t >= 0 && t <= up) {
              splits.push_back(t);
              splits.push_back(up - t);
              splits.push_back(std::min(up, t + 5e-7));
            }
          }
        }
    bool feasible_above = false;
    for (double a : splits)
      if (a >= 0 && a <= up && bilinear_pair(f, g, a, up - a)) {
        feasible_above = true;
        break;
      }
    CHECK(feasible_above);
    // infeasible for every sampled split strictly below
    if (d > 1e-4) {
      const double down = d - 1e-4;
      for (int k = 0; k <= 16; ++k)
        CHECK_FALSE(bilinear_pair(f, g, down * k / 16.0, down - down * k / 16.0));
    }
  }
  CHECK(finite > 0);
}

TEST_CASE("interleaving distance basics") {
  Barcode f({Bar(0, 2), Bar(1, 4, -1)});
  CHECK(interleaving_distance(f, f) == 0.0);
  CHECK(interleaving_distance(Barcode{}, Barcode::single(1.5, 4.0)) ==
        doctest::Approx(2.5).epsilon(1e-12));
  CHECK(interleaving_distance(Barcode{}, Barcode::single(0, kInf)) == kInf);
  // two rays at distance 5: a = 5 one way, 0 the other
  CHECK(interleaving_distance(Barcode::single(0, kInf), Barcode::single(5, kInf)) ==
        doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("distance_to_zero equals the interleaving distance to zero") {
  CHECK(distance_to_zero(Barcode{}) == 0.0);
  CHECK(distance_to_zero(Barcode::single(0, pi / 2)) == doctest::Approx(pi / 2));
  CHECK(distance_to_zero(Barcode({Bar(0, 1), Bar(0, 3)})) == 3.0);
  CHECK(distance_to_zero(Barcode::single(0, kInf)) == kInf);

  CounterRng rng(9);
  for (int i = 0; i < 25; ++i) {
    Barcode f = random_barcode(rng, 3);
    CHECK(distance_to_zero(f) ==
          doctest::Approx(interleaving_distance(Barcode{}, f)).epsilon(1e-9));
  }
}

TEST_CASE("interleaving distance: symmetry and triangle inequality") {
  CounterRng rng(10);
  for (int i = 0; i < 40; ++i) {
    Barcode f = random_barcode(rng, 3);
    Barcode g = random_barcode(rng, 3);
    Barcode h = random_barcode(rng, 3);
    const double dfg = interleaving_distance(f, g);
    CHECK(dfg == doctest::Approx(interleaving_distance(g, f)).epsilon(1e-12));
    const double dgh = interleaving_distance(g, h);
    const double dfh = interleaving_distance(f, h);
    CHECK(dfh <= dfg + dgh + 1e-9);
  }
}

TEST_CASE("epigraph distance closed form") {
  auto zero = EpigraphSheaf::sample_1d([](double) { return 0.0; }, -pi, pi, 2001);
  auto sine = EpigraphSheaf::sample_1d([](double q) { return std::sin(q); }, -pi, pi, 2001);
  auto shift = EpigraphSheaf::sample_1d([](double) { return 0.7; }, -pi, pi, 2001);

  CHECK(epigraph_distance(sine, sine) == 0.0);
  CHECK(epigraph_distance(zero, shift) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(epigraph_distance(zero, sine) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(epigraph_distance(zero, sine) == epigraph_distance(sine, zero));

  // vanishes only on equal samples
  EpigraphSheaf tweaked = sine;
  tweaked.values[17] += 1e-9;
  CHECK(epigraph_distance(sine, tweaked) > 0.0);

  auto other = EpigraphSheaf::sample_1d([](double) { return 0.0; }, -1, 1, 5);
  CHECK_THROWS_AS(epigraph_distance(zero, other), std::invalid_argument);
}

TEST_CASE("epigraph distance matches fiberwise interleaving decisions") {
  // Discretized model: one ray k_{[V(q),inf)} per node, a shared (a, b)
  // across nodes. The distance is the least a+b making every node pair
  // interleaved.
  CounterRng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const int nodes = 5;
    EpigraphSheaf v, w;
    v.axes = w.axes = {{0, 1, 2, 3, 4}};
    for (int i = 0; i < nodes; ++i) {
      v.values.push_back(rng.uniform(-1, 1));
      w.values.push_back(rng.uniform(-1, 1));
    }
    auto all_nodes_interleaved = [&](double a, double b) {
      for (int i = 0; i < nodes; ++i) {
        if (!is_interleaved(Barcode::single(v.values[i], kInf),
                            Barcode::single(w.values[i], kInf), a, b)
                 .interleaved)
          return false;
      }
      return true;
    };
    const double d = epigraph_distance(v, w);
    double need_a = 0, need_b = 0;
    for (int i = 0; i < nodes; ++i) {
      need_a = std::max(need_a, v.values[i] - w.values[i]);
      need_b = std::max(need_b, w.values[i] - v.values[i]);
    }
    CHECK(all_nodes_interleaved(need_a, need_b));
    CHECK(d == doctest::Approx(need_a + need_b).epsilon(1e-12));
    if (need_a > 1e-6) CHECK_FALSE(all_nodes_interleaved(need_a - 1e-3, need_b));
    if (need_b > 1e-6) CHECK_FALSE(all_nodes_interleaved(need_a, need_b - 1e-3));
  }
}
