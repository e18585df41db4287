#include <doctest.h>

#include <set>

#include "sofic/builder.hpp"
#include "sofic/error.hpp"
#include "support.hpp"

using namespace sofic;
using namespace sofic::test;

namespace {
  AmalgamSpec s3_double() {
    return double_over(s3_h(), 2);
  }

  AmalgamSpec s3_loop() {
    return decompose_graph(one_loop(), s3_h());
  }

  // Exhaustive check that every factor map is a homomorphism (injective when
  // asked) and that all factors agree on the common group.
  void check_action_exhaustively(AmalgamSpec const& spec, AmalgamAction const& act, bool faithful = true) {
    auto const& c = *spec.common();
    for (std::size_t i = 0; i < spec.size(); ++i) {
      auto const&                   f = spec.factor(i);
      auto const&                   a = *f.base();
      std::set<std::vector<Point>>  distinct;
      for (Element x = 0; x < a.order(); ++x) {
        distinct.insert(act.base_images[i][x].images());
        for (Element y = 0; y < a.order(); ++y) {
          CHECK(act.base_images[i][a.mul(x, y)] == act.base_images[i][x] * act.base_images[i][y]);
        }
      }
      if (faithful) {
        CHECK(distinct.size() == a.order());
      }
      for (Element h = 0; h < c.order(); ++h) {
        CHECK(act.base_images[i][f.embedding()[h]] == act.base_images[0][spec.factor(0).embedding()[h]]);
      }
    }
  }

  // Rebuild F.F with multiply and recount the defects from the table.
  void reverify(AmalgamSpec const& spec, Certificate const& c) {
    REQUIRE(c.approx.has_value());
    auto const& m  = *c.approx;
    auto const  nF = c.domain.finite_set.size();
    CHECK(nF == c.ball_size);
    std::size_t worst = 0, fixed = 0;
    for (std::size_t i = 0; i < nF; ++i) {
      auto const& a = c.support[c.domain.finite_set[i]];
      for (std::size_t j = 0; j < nF; ++j) {
        auto const& b = c.support[c.domain.finite_set[j]];
        auto        p = c.domain.product(i, j);
        CHECK(c.support[p] == multiply(spec, a, b));
        worst = std::max(worst, displaced(m.table[p], m.table[c.domain.finite_set[i]] * m.table[c.domain.finite_set[j]]));
      }
      if (!a.is_identity()) {
        fixed = std::max(fixed, m.table[c.domain.finite_set[i]].fixed_points());
      }
    }
    CHECK(worst == 0);
    CHECK(fixed == 0);
    auto again = verify(m, c.domain, c.epsilon, Execution::serial);
    CHECK(again == *c.report);
  }
}  // namespace

TEST_SUITE("builder") {
  TEST_CASE("truncate_Z") {
    auto plain = truncate_Z(s3_double(), 3);
    CHECK(plain.modulus == 1);
    CHECK(plain.truncated.size() == 2);
    for (auto const& x : ball(s3_double(), default_alphabet(s3_double()), 2)) {
      CHECK(plain.stage_map(x) == x);
    }

    auto t = truncate_Z(s3_loop(), 2);
    CHECK(t.modulus == 5);
    CHECK(t.truncated.factor(1).base()->order() == 10);
    CHECK_FALSE(t.truncated.factor(1).has_z());
    // exponents taken mod 5
    for (long m : {-7L, -1L, 0L, 3L, 5L, 12L}) {
      auto l = t.stage_letter(LZ(1, 1, m));
      CHECK(l.value.shift == 0);
      CHECK(l.value.base == 1 * 5 + static_cast<Element>(((m % 5) + 5) % 5));
    }
    // injective on the radius-2 ball
    auto                 b = ball(s3_loop(), default_alphabet(s3_loop()), 2);
    std::set<NormalForm> images;
    for (auto const& x : b) {
      images.insert(t.stage_map(x));
    }
    CHECK(images.size() == b.size());
    // and a homomorphism on the ball
    for (auto const& x : b) {
      for (auto const& y : b) {
        CHECK(t.stage_map(multiply(s3_loop(), x, y))
              == multiply(t.truncated, t.stage_map(x), t.stage_map(y)));
      }
    }
  }

  TEST_CASE("seed quotient") {
    // single vertex: the left regular representation of G
    auto single = decompose_graph(GraphSpec{{0}, {}}, s3_h());
    auto s1     = seed_quotient(truncate_Z(single, 2)).combined();
    CHECK(s1.degree == 6);
    auto reg = left_regular_rep(*single.factor(0).base());
    for (Element x = 0; x < 6; ++x) {
      CHECK(s1.base_images[0][x] == reg[x]);
    }

    // two copies: the same translation action on both
    auto spec = s3_double();
    auto t    = truncate_Z(spec, 2);
    auto s2   = seed_quotient(t).combined();
    check_action_exhaustively(t.truncated, s2);
    CHECK(s2.base_images[0] == s2.base_images[1]);
    for (auto const& l : default_alphabet(spec)) {
      CHECK_FALSE(s2.image(spec, normalize(spec, {l})).is_identity());
    }

    // loop: the stable letter is the order-N shift
    auto lt = truncate_Z(s3_loop(), 2);
    auto s3 = seed_quotient(lt).combined();
    check_action_exhaustively(lt.truncated, s3);
    CHECK(s3.degree == 30);
    auto shift = s3.image(lt.truncated, lt.stage_letter(LZ(1, 0, 1)));
    CHECK(order(shift) == 5);
    for (long m = -7; m <= 7; ++m) {
      auto img = s3.image(lt.truncated, lt.stage_map(normalize(s3_loop(), {LZ(1, 0, m)})));
      CHECK(img.is_identity() == (m % 5 == 0));
      if (m % 5 != 0) {
        CHECK(img.fixed_points() == 0);
      }
    }
    CHECK_FALSE(s3.check(lt.truncated).has_value());

    Caps caps;
    caps.max_degree = 10;
    CHECK_THROWS_AS(seed_quotient(lt, caps), Error);
  }

  TEST_CASE("separation") {
    auto spec = s3_double();
    auto t    = truncate_Z(spec, 3);
    auto F    = ball(spec, default_alphabet(spec), 3);
    auto seed = seed_quotient(t);

    // a radius-1 ball is separated by the seed alone
    auto F1 = ball(spec, default_alphabet(spec), 1);
    auto r1 = separate(t, F1, seed);
    CHECK(r1.unseparated.empty());
    CHECK(r1.bundle.components.size() == seed.components.size());
    CHECK(r1.stats.components_added == 0);

    // the seed misses g0 g1^-1 style elements at radius 3
    CHECK_FALSE(unseparated_targets(t.truncated, seed.combined(),
                                    [&] {
                                      std::vector<NormalForm> out;
                                      for (auto const& x : F) {
                                        out.push_back(t.stage_map(x));
                                      }
                                      return out;
                                    }())
                    .empty());

    auto r = separate(t, F, seed);
    CHECK(r.unseparated.empty());
    CHECK_FALSE(r.stats.budget_exhausted);
    auto combined = r.bundle.combined();
    CHECK_FALSE(combined.check(t.truncated).has_value());
    // recount: every non-identity ball element moves some point
    for (auto const& x : F) {
      CHECK(combined.image(t.truncated, t.stage_map(x)).is_identity() == x.is_identity());
    }
    for (auto const& c : r.bundle.components) {
      check_action_exhaustively(t.truncated, c, false);
    }

    // zero budget: partial result with the unseparated targets listed
    SearchOptions none;
    none.budget = 0;
    auto p      = separate(t, F, seed, none);
    CHECK_FALSE(p.unseparated.empty());
    CHECK(p.stats.budget_exhausted);
    for (auto i : p.unseparated) {
      CHECK(seed.combined().image(t.truncated, t.stage_map(F[i])).is_identity());
    }

    // deterministic
    auto again = separate(t, F, seed);
    REQUIRE(again.bundle.components.size() == r.bundle.components.size());
    for (std::size_t i = 0; i < r.bundle.components.size(); ++i) {
      CHECK(again.bundle.components[i].base_images == r.bundle.components[i].base_images);
    }
    CHECK(again.stats.nodes == r.stats.nodes);
  }

  TEST_CASE("separation rejects targets that are not normal forms") {
    auto       spec = s3_double();
    NormalForm bad;
    bad.letters = {L(0, 1)};  // an element of H as a letter
    CHECK_THROWS_AS(separate(spec, {bad}, {}), Error);
  }

  TEST_CASE("image group") {
    auto spec = s3_double();
    auto t    = truncate_Z(spec, 1);
    auto seed = seed_quotient(t).combined();
    auto q    = image_group(t.truncated, seed, 1000);
    CHECK(q.order() == 6);
    CHECK(q.elements[0].is_identity());
    CHECK(q.find(q.elements[4]) == 4);
    CHECK_THROWS_AS(image_group(t.truncated, seed, 5), Error);
  }

  TEST_CASE("build: single vertex") {
    for (std::size_t R : {1u, 2u, 4u}) {
      BuildOptions o;
      o.radius = R;
      auto single = decompose_graph(GraphSpec{{0}, {}}, s3_h());
      auto r      = build_approximation(single, o);
      REQUIRE(r.complete);
      CHECK(r.certificate.image_order == 6);
      CHECK(r.certificate.components.size() == 1);
      CHECK(r.certificate.report->mult_defect == Rational(0));
      CHECK(r.certificate.report->free_defect == Rational(0));
      reverify(single, r.certificate);
    }
  }

  TEST_CASE("build: the double at radius 3") {
    BuildOptions o;
    o.radius = 3;
    auto spec = s3_double();
    auto r    = build_approximation(spec, o);
    REQUIRE(r.complete);
    auto const& c = r.certificate;
    CHECK(c.truncation == 1);
    CHECK(c.report->passed);
    CHECK(c.report->mult_defect == Rational(0));
    CHECK(c.report->free_defect == Rational(0));
    CHECK(c.image_order <= 100000);
    CHECK(c.approx->degree == c.image_order);
    reverify(spec, c);

    // same through the graph entry point
    auto g = build_approximation(GraphSpec{{0, 1}, {{0, 1}}}, s3_h(), o);
    REQUIRE(g.complete);
    CHECK(g.certificate.approx->table == c.approx->table);

    // serial and parallel runs agree
    o.exec  = Execution::serial;
    auto sr = build_approximation(spec, o);
    CHECK(sr.certificate.approx->table == c.approx->table);
    CHECK(sr.certificate.support == c.support);
    CHECK(*sr.certificate.report == *c.report);
  }

  TEST_CASE("build: one loop at radius 2") {
    BuildOptions o;
    o.radius = 2;
    auto r   = build_approximation(one_loop(), s3_h(), o);
    REQUIRE(r.complete);
    auto const& c = r.certificate;
    CHECK(c.truncation == 5);
    CHECK(c.report->mult_defect == Rational(0));
    CHECK(c.report->free_defect == Rational(0));
    reverify(s3_loop(), c);
  }

  TEST_CASE("build: incomplete separation is a value") {
    BuildOptions o;
    o.radius        = 3;
    o.search.budget = 0;
    auto r          = build_approximation(s3_double(), o);
    CHECK_FALSE(r.complete);
    CHECK_FALSE(r.unseparated.empty());
    CHECK_FALSE(r.certificate.approx.has_value());
    CHECK_FALSE(r.certificate.report.has_value());
  }

  TEST_CASE("build: other instances") {
    // an index-3 subgroup, three copies, and a graph with two loops
    auto h  = s3_h();
    auto a3 = Subgroup::generated_by(h.parent(), std::vector<Element>{2});
    BuildOptions o;
    o.radius = 2;
    for (auto const& spec : {double_over(a3, 2), double_over(h, 3),
                             decompose_graph(GraphSpec{{0}, {{0, 0}, {0, 0}}}, h),
                             decompose_graph(GraphSpec{{0, 1}, {{0, 1}, {1, 1}}}, a3)}) {
      auto r = build_approximation(spec, o);
      REQUIRE(r.complete);
      CHECK(r.certificate.report->passed);
      reverify(spec, r.certificate);
    }
  }
}
