#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "cergm/ergm_exact.hpp"
#include "cergm/errors.hpp"

using namespace cergm;

namespace {

ModelSpec edge_triangle(int N, double z1, double z2, std::optional<ConstraintSpec> c = std::nullopt) {
  return make_model(N, {GraphMotif::triangle()}, {z1, z2}, c);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("ergm_exact") {
  TEST_CASE("independently computed reference values") {
    const ConstraintSpec w{0.5, 0.1};
    CHECK(rel(psi_exact(edge_triangle(4, 0.2, 0.2)), 0.36184444291031864) <= 1e-12);
    CHECK(rel(expectation_exact(edge_triangle(4, 0.2, 0.2), GraphMotif::edge()), 0.49438249221999164) <= 1e-12);
    CHECK(rel(expectation_exact(edge_triangle(4, 0.2, 0.2), GraphMotif::triangle()), 0.11648443370199697) <= 1e-12);

    CHECK(rel(psi_cond_exact(edge_triangle(4, 0.2, 0.2, w)), 0.28467637686718095) <= 1e-12);
    CHECK(rel(expectation_exact(edge_triangle(4, 0.2, 0.2, w), GraphMotif::edge()), 0.5) <= 1e-12);
    CHECK(rel(expectation_exact(edge_triangle(4, 0.2, 0.2, w), GraphMotif::triangle()), 0.07910026973067023) <= 1e-12);

    CHECK(rel(psi_cond_exact(edge_triangle(5, 0.3, 0.2, w)), 0.41757191699190926) <= 1e-12);
    CHECK(rel(expectation_exact(edge_triangle(5, 0.3, 0.2, w), GraphMotif::edge()), 0.5035402025552375) <= 1e-12);
    CHECK(rel(expectation_exact(edge_triangle(5, 0.3, 0.2, w), GraphMotif::triangle()), 0.10620588360497708) <= 1e-12);

    CHECK(rel(psi_cond_exact(edge_triangle(6, 0.2, 0.2, w)), 0.3872537644069704) <= 1e-12);
    CHECK(rel(expectation_exact(edge_triangle(6, 0.2, 0.2, w), GraphMotif::edge()), 0.5106370907980162) <= 1e-12);
    CHECK(rel(expectation_exact(edge_triangle(6, 0.2, 0.2, w), GraphMotif::triangle()), 0.11857513793192466) <= 1e-12);

    const ModelSpec star = make_model(4, {GraphMotif::star(2)}, {-0.3, 0.5}, ConstraintSpec{0.4, 0.15});
    CHECK(rel(psi_cond_exact(star), 0.22100248724420707) <= 1e-12);
    CHECK(rel(expectation_exact(star, GraphMotif::edge()), 0.38664468962688253) <= 1e-12);
    CHECK(rel(expectation_exact(star, GraphMotif::star(2)), 0.1867448198985776) <= 1e-12);
  }

  TEST_CASE("edge-only closed form") {
    for (int N = 2; N <= 6; ++N)
      for (double z : {-1.0, 0.0, 1.0}) {
        const double expected = pair_count(N) * std::log1p(std::exp(2.0 * z)) / (N * N);
        CHECK(rel(psi_exact(make_model(N, {}, {z})), expected) <= 1e-12);
      }
    CHECK(rel(psi_exact(make_model(3, {}, {0.0})), 0.23104906018664842) <= 1e-14);
    CHECK(rel(psi_exact(make_model(3, {}, {1.0})), 0.7089760036809909) <= 1e-14);
  }

  TEST_CASE("zero parameters reduce to the truncated binomial") {
    for (int N = 3; N <= 7; ++N)
      for (const ConstraintSpec& w : {ConstraintSpec{0.5, 0.05}, ConstraintSpec{1.0 / 3.0, 0.12}}) {
        // N = 3 has no graph with density in [0.45, 0.55]: both sides must say so.
        bool feasible = true;
        try {
          window_edge_range(w, N);
        } catch (const InfeasibleError&) {
          feasible = false;
        }
        if (!feasible) {
          CHECK_THROWS_AS(psi_cond_exact(edge_triangle(N, 0.0, 0.0, w)), InfeasibleError);
          CHECK_THROWS_AS(truncated_binomial_psi(N, w), InfeasibleError);
          continue;
        }
        const double exact = psi_cond_exact(edge_triangle(N, 0.0, 0.0, w));
        CHECK(rel(exact, truncated_binomial_psi(N, w)) <= 1e-12);
      }
    CHECK(rel(truncated_binomial_psi(7, {0.5, 0.05}), std::log(497420.0) / 49.0) <= 1e-15);
    CHECK(rel(truncated_binomial_psi(6, {0.5, 0.05}), std::log(5005.0) / 36.0) <= 1e-15);
    CHECK(rel(truncated_binomial_psi(3, {1.0 / 3.0, 0.12}), std::log(6.0) / 9.0) <= 1e-15);

    const std::vector<double> pmf = truncated_binomial_pmf(6, {0.5, 0.05});
    double total = 0.0;
    for (double p : pmf) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pmf[8] == 0.0);
    CHECK(pmf[9] == 1.0);
    CHECK(pmf[10] == 0.0);

    const std::vector<double> wide = truncated_binomial_pmf(4, {0.5, 0.2});
    CHECK(wide[2] == 0.0);
    CHECK(wide[3] == doctest::Approx(20.0 / 41.0).epsilon(1e-14));
    CHECK(wide[5] == doctest::Approx(6.0 / 41.0).epsilon(1e-14));
  }

  TEST_CASE("worker count does not change results") {
    const std::vector<GraphMotif> motifs{GraphMotif::edge(), GraphMotif::triangle(), GraphMotif::star(2)};
    ExactOptions one, four;
    four.threads = 4;
    const CountHistogram a = enumerate_counts(7, motifs, one);
    const CountHistogram b = enumerate_counts(7, motifs, four);
    REQUIRE(a.entries().size() == b.entries().size());
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
      CHECK(a.entries()[i].homs == b.entries()[i].homs);
      CHECK(a.entries()[i].multiplicity == b.entries()[i].multiplicity);
    }
    CHECK(a.total_graphs() == (std::uint64_t{1} << 21));
    const std::vector<double> z{0.3, -0.2, 0.1};
    CHECK(a.psi(z, ConstraintSpec{0.4, 0.1}) == b.psi(z, ConstraintSpec{0.4, 0.1}));
  }

  TEST_CASE("probability mass") {
    const ModelSpec m = make_model(3, {}, {0.0}, ConstraintSpec{1.0 / 3.0, 0.12});
    SimpleGraph one(3);
    one.add_edge(0, 1);
    CHECK(cond_prob_mass(m, one) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(cond_prob_mass(m, SimpleGraph(3)) == 0.0);
    CHECK(cond_prob_mass(m, SimpleGraph::complete(3)) == 0.0);

    const ModelSpec et = edge_triangle(4, 0.4, -0.3, ConstraintSpec{0.45, 0.15});
    const CountHistogram hist = enumerate_counts(4, et.motifs);
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < 64; ++mask) total += cond_prob_mass(et, hist, SimpleGraph::from_pair_mask(4, mask));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("expectations") {
    for (int N = 2; N <= 6; ++N)
      CHECK(expectation_exact(make_model(N, {}, {0.0}), GraphMotif::edge()) ==
            doctest::Approx((N - 1.0) / (2.0 * N)).epsilon(1e-13));
    CHECK(expectation_exact(make_model(3, {}, {0.0}, ConstraintSpec{1.0 / 3.0, 0.12}), GraphMotif::edge()) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    // A motif outside the model is appended to the enumeration.
    CHECK(expectation_exact(make_model(4, {}, {0.0}), GraphMotif::triangle()) ==
          doctest::Approx(4.0 * 3 * 2 / 8.0 / 64.0).epsilon(1e-13));
  }

  TEST_CASE("a window covering [0, 1] removes the constraint") {
    for (int N = 3; N <= 5; ++N) {
      const ModelSpec m = edge_triangle(N, 0.7, -0.4, ConstraintSpec{0.5, 1.0});
      CHECK(psi_cond_exact(m) == doctest::Approx(psi_exact(m)).epsilon(1e-14));
    }
  }

  TEST_CASE("size gate") {
    ExactOptions small;
    small.max_vertices = 5;
    CHECK_THROWS_AS(psi_exact(make_model(6, {}, {0.0}), small), SizeError);
    CHECK_THROWS_AS(psi_exact(make_model(8, {}, {0.0})), SizeError);
    ExactOptions huge;
    huge.max_vertices = 12;
    CHECK_THROWS_AS(psi_exact(make_model(9, {}, {0.0}), huge), SizeError);

    ::setenv("CERGM_MAX_N", "5", 1);
    CHECK(ExactOptions::from_environment().max_vertices == 5);
    CHECK_THROWS_AS(psi_exact(make_model(6, {}, {0.0}), ExactOptions::from_environment()), SizeError);
    ::setenv("CERGM_MAX_N", "five", 1);
    CHECK_THROWS_AS(ExactOptions::from_environment(), ConfigError);
    ::unsetenv("CERGM_MAX_N");
    CHECK(ExactOptions::from_environment().max_vertices == kDefaultExactMaxVertices);
  }

  TEST_CASE("progress callback") {
    int calls = 0, last = 0, total = 0;
    ExactOptions o;
    o.threads = 2;
    o.progress = [&](int done, int of) {
      ++calls;
      last = std::max(last, done);
      total = of;
    };
    enumerate_counts(7, std::vector<GraphMotif>{GraphMotif::edge()}, o);
    CHECK(calls == total);
    CHECK(last == total);
    CHECK(total > 1);
  }

  TEST_CASE("infeasible windows") {
    CHECK_THROWS_AS(psi_cond_exact(make_model(3, {}, {0.0}, ConstraintSpec{0.9, 0.001})), InfeasibleError);
    CHECK_THROWS_AS(truncated_binomial_psi(3, {0.9, 0.001}), InfeasibleError);
    try {
      window_edge_range({0.9, 0.001}, 3);
    } catch (const InfeasibleError& e) {
      CHECK(std::string(e.what()).find("nearest") != std::string::npos);
    }
  }
}
